#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hccal/hcc.hpp"
#include "hccal/io.hpp"
#include "hccal/objectness.hpp"
#include "hccal/types.hpp"

namespace hccal::pseudolabel {

/// Per-stage counts. total == emitted + every drop counter.
struct PipelineReport {
  std::size_t total = 0;
  std::size_t dropped_by_prefilter = 0;
  std::size_t dropped_by_gamma = 0;  // direct baseline: rejected by the argmax predicate
  std::size_t dropped_by_tau = 0;
  std::size_t dropped_by_nms = 0;
  std::size_t emitted = 0;

  bool conserved() const {
    return total == emitted + dropped_by_prefilter + dropped_by_gamma + dropped_by_tau +
                        dropped_by_nms;
  }
};

Json to_json(const PipelineReport& report);

/// Inputs shared by every region. Text features hold the class prompt rows and
/// all hierarchy entries.
struct PipelineInputs {
  std::span<const RegionRecord> regions;
  const FeatureMatrix& features;
  const FeatureMatrix& text_features;
  const Hierarchy& hierarchy;
  const objectness::ObjectnessHead& head;
};

enum class Mode { calibrated, direct_baseline };

enum class Stage { prefilter, gamma, tau, emitted };

/// Everything computed for one region on its way through the gates.
struct RegionTrace {
  Stage stage = Stage::prefilter;
  double p_hat = 0.0;
  std::optional<hcc::CalibrationOutcome> outcome;  // calibrated mode, past prefilter
  std::optional<double> objectness;
  std::optional<PseudoLabel> label;
};

struct Options {
  unsigned threads = 1;
  /// Optional class-wise NMS among emitted labels of the same image.
  std::optional<double> nms_iou;
};

struct Result {
  std::vector<PseudoLabel> labels;
  PipelineReport report;
};

/// Throws unless the inputs are mutually consistent.
void validate_inputs(const PipelineInputs& inputs, const CalibrationConfig& config);

RegionTrace evaluate_region(const PipelineInputs& inputs, const RegionRecord& region,
                            const CalibrationConfig& config, Mode mode = Mode::calibrated);

/// Prefilter on max(p), calibrate, gate on r-hat >= gamma, gate on objectness
/// >= tau, and emit argmax(r) with confidence r-hat. Output keeps input order
/// for any thread count; the first failing region aborts the run.
Result generate(const PipelineInputs& inputs, const CalibrationConfig& config,
                const Options& options = {});

/// Same pipeline with the calibration gate replaced by the triple-argmax
/// predicate; emits argmax(p) with confidence max(p).
Result generate_baseline_direct(const PipelineInputs& inputs, const CalibrationConfig& config,
                                const Options& options = {});

/// Greedy per-image, per-class suppression by descending confidence.
std::vector<PseudoLabel> suppress_overlaps(std::vector<PseudoLabel> labels, double iou_threshold);

/// One loss-weight record per instance: base boxes get unit weights,
/// background boxes carry only a classification weight, pseudo labels carry
/// (confidence, objectness).
std::vector<Json> loss_weight_records(std::span<const PseudoLabel> labels,
                                      std::span<const std::string> class_names,
                                      std::span<const Annotation> base_annotations);

std::string labels_to_ndjson(std::span<const PseudoLabel> labels);

}  // namespace hccal::pseudolabel
