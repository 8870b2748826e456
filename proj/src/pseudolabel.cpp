#include "hccal/pseudolabel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <numeric>
#include <thread>

#include "hccal/error.hpp"
#include "hccal/evalkit.hpp"
#include "hccal/scoring.hpp"

namespace hccal::pseudolabel {

Json to_json(const PipelineReport& r) {
  return {{"total", r.total},
          {"dropped_by_prefilter", r.dropped_by_prefilter},
          {"dropped_by_gamma", r.dropped_by_gamma},
          {"dropped_by_tau", r.dropped_by_tau},
          {"dropped_by_nms", r.dropped_by_nms},
          {"emitted", r.emitted}};
}

void validate_inputs(const PipelineInputs& inputs, const CalibrationConfig& config) {
  config.validate();
  if (inputs.hierarchy.size() < 2) {
    throw Error(ErrorKind::hierarchy, "pseudo labeling needs at least two novel classes");
  }
  inputs.hierarchy.validate(inputs.text_features.rows());
  if (inputs.text_features.dim() != inputs.features.dim()) {
    throw Error(ErrorKind::shape, "region and text features differ in dimension");
  }
  if (inputs.head.dim() != inputs.features.dim()) {
    throw Error(ErrorKind::shape, "objectness head dimension does not match region features");
  }
}

RegionTrace evaluate_region(const PipelineInputs& in, const RegionRecord& region,
                            const CalibrationConfig& config, Mode mode) {
  try {
    if (!region.feature_row) throw Error(ErrorKind::data, "region has no feature row");
    const auto feature = in.features.row(*region.feature_row);

    RegionTrace trace;
    const auto p = scoring::class_probabilities(feature, in.text_features, in.hierarchy,
                                                config.class_temperature);
    trace.p_hat = p.max();
    if (trace.p_hat < config.prefilter) {
      trace.stage = Stage::prefilter;
      return trace;
    }

    const auto p_sub = scoring::hierarchy_probabilities(feature, in.text_features, in.hierarchy,
                                                        Level::sub, config.temperature);
    const auto p_sup = scoring::hierarchy_probabilities(feature, in.text_features, in.hierarchy,
                                                        Level::sup, config.temperature);
    std::size_t label = 0;
    double confidence = 0.0;
    if (mode == Mode::calibrated) {
      trace.outcome = hcc::calibrate(p, p_sub, p_sup);
      if (trace.outcome->r_hat < config.gamma) {
        trace.stage = Stage::gamma;
        return trace;
      }
      label = trace.outcome->label();
      confidence = trace.outcome->r_hat;
    } else {
      const auto direct = hcc::direct_consistency_label(p, hcc::pool_classwise(p_sub),
                                                        hcc::pool_classwise(p_sup));
      if (!direct) {
        trace.stage = Stage::gamma;
        return trace;
      }
      label = *direct;
      confidence = trace.p_hat;
    }

    trace.objectness = objectness::objectness_score(in.head, feature);
    if (*trace.objectness < config.tau) {
      trace.stage = Stage::tau;
      return trace;
    }
    trace.stage = Stage::emitted;
    trace.label = PseudoLabel{region, label, confidence, *trace.objectness};
    return trace;
  } catch (const Error& e) {
    throw Error(e.kind(), "region " + region.image_id + "/" + region.region_id + ": " + e.what());
  }
}

namespace {

std::vector<RegionTrace> evaluate_all(const PipelineInputs& in, const CalibrationConfig& config,
                                      Mode mode, unsigned threads) {
  const std::size_t n = in.regions.size();
  std::vector<std::optional<RegionTrace>> traces(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        traces[i] = evaluate_region(in, in.regions[i], config, mode);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (count <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  }

  // Every region is evaluated so the reported failure is the earliest in
  // input order, independent of scheduling.
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<RegionTrace> out;
  out.reserve(n);
  for (auto& t : traces) out.push_back(std::move(*t));
  return out;
}

Result run(const PipelineInputs& in, const CalibrationConfig& config, const Options& options,
           Mode mode) {
  validate_inputs(in, config);
  Result result;
  result.report.total = in.regions.size();
  for (auto& trace : evaluate_all(in, config, mode, options.threads)) {
    switch (trace.stage) {
      case Stage::prefilter: ++result.report.dropped_by_prefilter; break;
      case Stage::gamma: ++result.report.dropped_by_gamma; break;
      case Stage::tau: ++result.report.dropped_by_tau; break;
      case Stage::emitted: result.labels.push_back(std::move(*trace.label)); break;
    }
  }
  if (options.nms_iou) {
    const std::size_t before = result.labels.size();
    result.labels = suppress_overlaps(std::move(result.labels), *options.nms_iou);
    result.report.dropped_by_nms = before - result.labels.size();
  }
  result.report.emitted = result.labels.size();
  return result;
}

}  // namespace

Result generate(const PipelineInputs& inputs, const CalibrationConfig& config,
                const Options& options) {
  return run(inputs, config, options, Mode::calibrated);
}

Result generate_baseline_direct(const PipelineInputs& inputs, const CalibrationConfig& config,
                                const Options& options) {
  return run(inputs, config, options, Mode::direct_baseline);
}

std::vector<PseudoLabel> suppress_overlaps(std::vector<PseudoLabel> labels, double iou_threshold) {
  if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
    throw Error(ErrorKind::config, "NMS IoU threshold must lie in (0, 1]");
  }
  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return labels[a].confidence > labels[b].confidence;
  });
  std::vector<bool> keep(labels.size(), false);
  std::vector<std::size_t> kept;
  for (std::size_t i : order) {
    bool suppressed = false;
    for (std::size_t k : kept) {
      if (labels[k].region.image_id == labels[i].region.image_id &&
          labels[k].class_index == labels[i].class_index &&
          eval::iou(labels[k].region.box, labels[i].region.box) > iou_threshold) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) {
      keep[i] = true;
      kept.push_back(i);
    }
  }
  std::vector<PseudoLabel> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (keep[i]) out.push_back(std::move(labels[i]));
  }
  return out;
}

std::vector<Json> loss_weight_records(std::span<const PseudoLabel> labels,
                                      std::span<const std::string> class_names,
                                      std::span<const Annotation> base_annotations) {
  std::vector<Json> out;
  out.reserve(labels.size() + base_annotations.size());
  for (const auto& a : base_annotations) {
    Json j = {{"source", a.category ? "base" : "background"}};
    const Json region = to_json(a.region);
    for (const auto& [k, v] : region.items()) j[k] = v;
    j["class"] = a.category ? Json(*a.category) : Json(nullptr);
    j["cls_w"] = 1.0;
    if (a.category) j["reg_w"] = 1.0;
    out.push_back(std::move(j));
  }
  for (const auto& label : labels) {
    if (label.class_index >= class_names.size()) {
      throw Error(ErrorKind::shape, "pseudo label class index out of range");
    }
    Json j = {{"source", "pseudo"}};
    const Json region = to_json(label.region);
    for (const auto& [k, v] : region.items()) j[k] = v;
    j["class"] = class_names[label.class_index];
    j["cls_w"] = label.confidence;
    j["reg_w"] = label.objectness;
    out.push_back(std::move(j));
  }
  return out;
}

std::string labels_to_ndjson(std::span<const PseudoLabel> labels) {
  std::vector<Json> records;
  records.reserve(labels.size());
  for (const auto& l : labels) records.push_back(to_json(l));
  return to_ndjson(records);
}

}  // namespace hccal::pseudolabel
