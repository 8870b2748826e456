#include "hccal/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "hccal/error.hpp"
#include "hccal/evalkit.hpp"
#include "hccal/hierarchy_refine.hpp"
#include "hccal/io.hpp"
#include "hccal/objectness.hpp"
#include "hccal/pseudolabel.hpp"
#include "hccal/scoring.hpp"

namespace hccal::cli {

namespace fs = std::filesystem;

namespace {

struct MissingInput {
  std::string path;
};

void require_inputs(std::initializer_list<const std::string*> paths) {
  for (const auto* p : paths) {
    if (p->empty()) continue;
    std::error_code ec;
    if (!fs::is_regular_file(*p, ec)) throw MissingInput{*p};
  }
}

void require_feature_inputs(const std::string& path) {
  fs::path stem = path;
  if (stem.extension() == ".json" || stem.extension() == ".f32") stem.replace_extension();
  const std::string header = stem.string() + ".json";
  const std::string data = stem.string() + ".f32";
  require_inputs({&header, &data});
}

std::string config_path_for(const std::string& out) { return out + ".config.json"; }

void write_config(const std::string& out, const std::string& command, Json params) {
  Json doc = {{"command", command}, {"params", std::move(params)}};
  write_file_atomic(config_path_for(out), doc.dump(2) + "\n");
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string fmt_fraction(const std::optional<double>& v) {
  if (!v) return "undefined";
  std::ostringstream s;
  s << std::fixed << std::setprecision(4) << *v;
  return s.str();
}

void init_logging() {
  auto logger = spdlog::get("hccal");
  if (!logger) logger = spdlog::stderr_logger_st("hccal");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("HCCAL_LOG")) {
    spdlog::set_level(spdlog::level::from_str(level));
  }
}

// --- refine -----------------------------------------------------------------

struct RefineArgs {
  std::string raw, verdicts, text_features, entry_index, vocab, out;
  double fraction = 1.0 / 3.0;
  double dup_threshold = 0.95;
};

void add_refine(CLI::App& app, RefineArgs& a) {
  app.add_option("--raw", a.raw, "Raw LLM hierarchy JSON")->required();
  app.add_option("--verdicts", a.verdicts, "Is-A verdicts JSON array")->required();
  app.add_option("--text-features", a.text_features, "Entry embeddings (.json header or stem)")
      ->required();
  app.add_option("--entry-index", a.entry_index, "JSON map from entry/class name to row")
      ->required();
  app.add_option("--vocab", a.vocab, "Vocabulary JSON {novel:[..], base:[..]}");
  app.add_option("--fraction", a.fraction, "Discriminability fraction of novel classes")
      ->capture_default_str();
  app.add_option("--dup-threshold", a.dup_threshold, "Near-duplicate cosine threshold")
      ->capture_default_str();
  app.add_option("--out", a.out, "Refined hierarchy JSON")->required();
}

int cmd_refine(const RefineArgs& a, std::ostream& out) {
  require_inputs({&a.raw, &a.verdicts, &a.entry_index, &a.vocab});
  require_feature_inputs(a.text_features);

  auto raw = refine::raw_hierarchy_from_json(Json::parse(read_text_file(a.raw)));
  const auto verdicts = refine::verdicts_from_json(Json::parse(read_text_file(a.verdicts)));
  const auto index =
      Json::parse(read_text_file(a.entry_index)).get<std::map<std::string, std::size_t>>();
  raw = refine::attach_rows(std::move(raw), index);
  const auto features = load_feature_matrix(a.text_features);

  std::vector<std::string> novel;
  for (const auto& c : raw.classes) novel.push_back(c.name);
  const ClassVocabulary vocab = a.vocab.empty()
                                    ? ClassVocabulary(novel, {})
                                    : vocabulary_from_json(Json::parse(read_text_file(a.vocab)));

  const auto refined = refine::refine(raw, verdicts, vocab, features,
                                      {a.fraction, a.dup_threshold});
  write_file_atomic(a.out, to_json(refined).dump(2) + "\n");
  write_config(a.out, "refine",
               {{"raw", a.raw}, {"verdicts", a.verdicts}, {"text_features", a.text_features},
                {"entry_index", a.entry_index}, {"vocab", a.vocab}, {"fraction", a.fraction},
                {"dup_threshold", a.dup_threshold}, {"out", a.out}});

  out << "class\tsupers\tsubs\n";
  for (const auto& c : refined.classes) {
    out << c.name << '\t' << c.supers.size() << '\t' << c.subs.size() << '\n';
  }
  return kExitOk;
}

// --- train-objectness -------------------------------------------------------

struct TrainArgs {
  std::string features, regions, ground_truth, out, log;
  double pos_iou = 0.8;
  objectness::TrainConfig config;
};

void add_train(CLI::App& app, TrainArgs& a) {
  app.add_option("--features", a.features, "Region features (.json header or stem)")->required();
  app.add_option("--regions", a.regions, "Proposal NDJSON with feature_row")->required();
  app.add_option("--ground-truth", a.ground_truth, "Base-class ground truth NDJSON")->required();
  app.add_option("--pos-iou", a.pos_iou, "IoU above which a proposal is positive")
      ->capture_default_str();
  app.add_option("--iterations", a.config.iterations)->capture_default_str();
  app.add_option("--batch-size", a.config.batch_size)->capture_default_str();
  app.add_option("--max-lr", a.config.max_lr)->capture_default_str();
  app.add_option("--seed", a.config.seed)->capture_default_str();
  app.add_option("--out", a.out, "Head checkpoint JSON")->required();
  app.add_option("--log", a.log, "Training log CSV (iteration,lr,loss)");
}

int cmd_train_objectness(const TrainArgs& a, std::ostream& out) {
  require_inputs({&a.regions, &a.ground_truth});
  require_feature_inputs(a.features);
  const auto features = load_feature_matrix(a.features);
  const auto proposals = load_regions(a.regions);
  std::vector<RegionRecord> gt;
  for (auto& ann : load_annotations(a.ground_truth)) gt.push_back(std::move(ann.region));
  if (gt.empty()) spdlog::warn("ground truth is empty; every proposal is negative");

  const auto data = objectness::build_dataset(proposals, features, gt, a.pos_iou);
  auto trained = objectness::train_head(data, a.config);
  trained.head.tau = objectness::select_tau(trained.head, data);

  std::vector<double> scores(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    scores[i] = objectness::objectness_score(trained.head, data.features().row(i));
  }
  const double acc = objectness::threshold_accuracy(scores, data.labels(), *trained.head.tau);

  write_file_atomic(a.out, objectness::to_json(trained.head).dump() + "\n");
  if (!a.log.empty()) write_file_atomic(a.log, objectness::training_log_csv(trained.log));
  write_config(a.out, "train-objectness",
               {{"features", a.features}, {"regions", a.regions},
                {"ground_truth", a.ground_truth}, {"pos_iou", a.pos_iou},
                {"iterations", a.config.iterations}, {"batch_size", a.config.batch_size},
                {"max_lr", a.config.max_lr}, {"seed", a.config.seed}, {"out", a.out},
                {"log", a.log}});

  out << "positives\t" << data.n_pos() << "\nnegatives\t" << data.n_neg() << "\ntau\t"
      << *trained.head.tau << "\ntrain_accuracy\t" << acc << '\n';
  return kExitOk;
}

// --- pseudolabel ------------------------------------------------------------

struct PseudoArgs {
  std::string features, text_features, hierarchy, regions, head, out;
  std::string profile = "coco";
  std::optional<double> gamma, tau, nms_iou;
  double prefilter = 0.5;
  double temperature = 1.0;
  double class_temperature = 1.0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool baseline_direct = false;
  std::string loss_weights, base_annotations;
};

void add_pseudolabel(CLI::App& app, PseudoArgs& a) {
  app.add_option("--features", a.features, "Region features (.json header or stem)")->required();
  app.add_option("--text-features", a.text_features, "Class and hierarchy text features")
      ->required();
  app.add_option("--hierarchy", a.hierarchy, "Refined hierarchy JSON")->required();
  app.add_option("--regions", a.regions, "Candidate region NDJSON")->required();
  app.add_option("--head", a.head, "Objectness head JSON")->required();
  app.add_option("--out", a.out, "Pseudo-label NDJSON")->required();
  app.add_option("--profile", a.profile, "Threshold defaults: coco (0.8/0.3) or lvis (0.6/0.2)")
      ->check(CLI::IsMember({"coco", "lvis"}))
      ->capture_default_str();
  app.add_option("--gamma", a.gamma, "Calibrated confidence gate (overrides profile)");
  app.add_option("--tau", a.tau, "Objectness gate (overrides profile)");
  app.add_option("--prefilter", a.prefilter, "Minimum max(p) before calibration")
      ->capture_default_str();
  app.add_option("--temperature", a.temperature, "Hierarchy-level softmax temperature")
      ->capture_default_str();
  app.add_option("--class-temperature", a.class_temperature, "Class-level softmax temperature")
      ->capture_default_str();
  app.add_option("--seed", a.seed)->capture_default_str();
  app.add_option("--threads", a.threads, "Worker threads")->capture_default_str();
  app.add_option("--nms-iou", a.nms_iou, "Optional per-class NMS among emitted labels");
  app.add_flag("--baseline-direct", a.baseline_direct,
               "Use the triple-argmax consistency baseline instead of calibration");
  app.add_option("--emit-loss-weights", a.loss_weights, "Write loss-weight NDJSON here");
  app.add_option("--base-annotations", a.base_annotations,
                 "Base/background annotations NDJSON for the loss-weight records");
}

int cmd_pseudolabel(const PseudoArgs& a, std::ostream& out, std::ostream& err) {
  require_inputs({&a.hierarchy, &a.regions, &a.head, &a.base_annotations});
  require_feature_inputs(a.features);
  require_feature_inputs(a.text_features);
  if (a.threads < 1) throw Error(ErrorKind::config, "--threads must be at least 1");

  CalibrationConfig config;
  if (a.profile == "lvis") {
    config.gamma = 0.6;
    config.tau = 0.2;
  }
  if (a.gamma) config.gamma = *a.gamma;
  if (a.tau) config.tau = *a.tau;
  config.prefilter = a.prefilter;
  config.temperature = a.temperature;
  config.class_temperature = a.class_temperature;
  config.seed = a.seed;
  config.validate();

  const auto features = load_feature_matrix(a.features);
  const auto text = load_feature_matrix(a.text_features);
  const auto hierarchy = load_hierarchy(a.hierarchy);
  const auto regions = load_regions(a.regions);
  const auto head = objectness::head_from_json(Json::parse(read_text_file(a.head)));

  const pseudolabel::PipelineInputs inputs{regions, features, text, hierarchy, head};
  const pseudolabel::Options options{a.threads, a.nms_iou};
  const auto result = a.baseline_direct
                          ? pseudolabel::generate_baseline_direct(inputs, config, options)
                          : pseudolabel::generate(inputs, config, options);

  write_file_atomic(a.out, pseudolabel::labels_to_ndjson(result.labels));
  if (!a.loss_weights.empty()) {
    std::vector<Annotation> base;
    if (!a.base_annotations.empty()) base = load_annotations(a.base_annotations);
    const auto names = hierarchy.class_names();
    write_file_atomic(a.loss_weights,
                      to_ndjson(pseudolabel::loss_weight_records(result.labels, names, base)));
  }
  write_config(a.out, "pseudolabel",
               {{"features", a.features}, {"text_features", a.text_features},
                {"hierarchy", a.hierarchy}, {"regions", a.regions}, {"head", a.head},
                {"out", a.out}, {"profile", a.profile}, {"gamma", config.gamma},
                {"tau", config.tau}, {"prefilter", config.prefilter},
                {"temperature", config.temperature},
                {"class_temperature", config.class_temperature}, {"seed", config.seed},
                {"threads", a.threads}, {"nms_iou", optional_json(a.nms_iou)},
                {"baseline_direct", a.baseline_direct},
                {"emit_loss_weights", a.loss_weights},
                {"base_annotations", a.base_annotations}});

  err << pseudolabel::to_json(result.report).dump() << '\n';
  out << "emitted " << result.report.emitted << " of " << result.report.total << " regions\n";
  return kExitOk;
}

// --- eval -------------------------------------------------------------------

struct EvalArgs {
  std::string features, text_features, hierarchy, regions, ground_truth, head, pairs, labels,
      out, csv;
  double fg_iou = 0.8, bg_iou = 0.5, match_iou = 0.5;
  double temperature = 1.0, class_temperature = 1.0;
};

std::vector<RegionRecord> regions_only(std::vector<Annotation> annotations) {
  std::vector<RegionRecord> out;
  out.reserve(annotations.size());
  for (auto& a : annotations) out.push_back(std::move(a.region));
  return out;
}

void emit_report(const EvalArgs& a, const std::string& command, const Json& report,
                 const std::string& csv) {
  if (!a.out.empty()) {
    write_file_atomic(a.out, report.dump(2) + "\n");
    write_config(a.out, command,
                 {{"features", a.features}, {"text_features", a.text_features},
                  {"hierarchy", a.hierarchy}, {"regions", a.regions},
                  {"ground_truth", a.ground_truth}, {"head", a.head}, {"pairs", a.pairs},
                  {"labels", a.labels}, {"fg_iou", a.fg_iou}, {"bg_iou", a.bg_iou},
                  {"match_iou", a.match_iou}, {"temperature", a.temperature},
                  {"class_temperature", a.class_temperature}, {"csv", a.csv}});
  }
  if (!a.csv.empty()) write_file_atomic(a.csv, csv);
}

int cmd_eval_consistency(const EvalArgs& a, std::ostream& out) {
  require_inputs({&a.hierarchy, &a.regions, &a.ground_truth});
  require_feature_inputs(a.features);
  require_feature_inputs(a.text_features);
  const auto features = load_feature_matrix(a.features);
  const auto text = load_feature_matrix(a.text_features);
  const auto hierarchy = load_hierarchy(a.hierarchy);
  hierarchy.validate(text.rows());
  const auto regions = load_regions(a.regions);
  const auto gt = regions_only(load_annotations(a.ground_truth));

  std::vector<eval::RegionScores> scores;
  scores.reserve(regions.size());
  for (const auto& r : regions) {
    if (!r.feature_row) throw Error(ErrorKind::data, "region " + r.region_id + " has no feature row");
    const auto f = features.row(*r.feature_row);
    scores.push_back({scoring::class_probabilities(f, text, hierarchy, a.class_temperature),
                      hcc::pool_classwise(scoring::hierarchy_probabilities(
                          f, text, hierarchy, Level::sub, a.temperature)),
                      hcc::pool_classwise(scoring::hierarchy_probabilities(
                          f, text, hierarchy, Level::sup, a.temperature))});
  }
  const auto rep = eval::consistency_study(regions, gt, scores, a.fg_iou, a.bg_iou);
  const Json report = {{"fg_count", rep.fg_count},
                       {"bg_count", rep.bg_count},
                       {"excluded", rep.excluded},
                       {"fg_consistent", rep.fg_consistent},
                       {"bg_consistent", rep.bg_consistent},
                       {"fg_consistent_fraction", optional_json(rep.fg_consistent_fraction)},
                       {"bg_consistent_fraction", optional_json(rep.bg_consistent_fraction)}};
  std::ostringstream csv;
  csv << "group,count,consistent,fraction\n"
      << "fg," << rep.fg_count << ',' << rep.fg_consistent << ','
      << fmt_fraction(rep.fg_consistent_fraction) << '\n'
      << "bg," << rep.bg_count << ',' << rep.bg_consistent << ','
      << fmt_fraction(rep.bg_consistent_fraction) << '\n';
  emit_report(a, "eval consistency", report, csv.str());

  out << "group  count  consistent  fraction\n"
      << "fg     " << rep.fg_count << "  " << rep.fg_consistent << "  "
      << fmt_fraction(rep.fg_consistent_fraction) << '\n'
      << "bg     " << rep.bg_count << "  " << rep.bg_consistent << "  "
      << fmt_fraction(rep.bg_consistent_fraction) << '\n'
      << "excluded " << rep.excluded << '\n';
  return kExitOk;
}

std::pair<std::vector<double>, std::vector<double>> read_pairs_csv(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  std::vector<double> x, y;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    try {
      if (comma == std::string::npos) throw std::invalid_argument("no comma");
      std::size_t used = 0;
      const double xv = std::stod(line.substr(0, comma), &used);
      const double yv = std::stod(line.substr(comma + 1));
      x.push_back(xv);
      y.push_back(yv);
    } catch (const std::exception&) {
      if (line_no == 1) continue;  // header
      throw Error(ErrorKind::data, path + ":" + std::to_string(line_no) + ": expected x,y");
    }
  }
  return {std::move(x), std::move(y)};
}

int cmd_eval_correlation(const EvalArgs& a, std::ostream& out) {
  std::vector<double> x, y;
  if (!a.pairs.empty()) {
    require_inputs({&a.pairs});
    std::tie(x, y) = read_pairs_csv(a.pairs);
  } else {
    if (a.features.empty() || a.regions.empty() || a.head.empty() || a.ground_truth.empty()) {
      throw Error(ErrorKind::config,
                  "correlation needs --pairs or --features, --regions, --head and --ground-truth");
    }
    require_inputs({&a.regions, &a.head, &a.ground_truth});
    require_feature_inputs(a.features);
    const auto features = load_feature_matrix(a.features);
    const auto regions = load_regions(a.regions);
    const auto head = objectness::head_from_json(Json::parse(read_text_file(a.head)));
    const auto gt = regions_only(load_annotations(a.ground_truth));
    const eval::GroundTruthIndex index(gt);
    for (const auto& r : regions) {
      if (!r.feature_row) throw Error(ErrorKind::data, "region " + r.region_id + " has no feature row");
      x.push_back(objectness::objectness_score(head, features.row(*r.feature_row)));
      y.push_back(index.max_iou(r));
    }
  }
  const auto rep = eval::correlate(x, y);
  const Json report = {{"n", rep.n}, {"spearman_rho", rep.spearman_rho},
                       {"kendall_tau", rep.kendall_tau}};
  std::ostringstream csv;
  csv.precision(17);
  csv << "n,spearman_rho,kendall_tau\n" << rep.n << ',' << rep.spearman_rho << ',' << rep.kendall_tau << '\n';
  emit_report(a, "eval correlation", report, csv.str());
  out << std::fixed << std::setprecision(4) << "n  spearman_rho  kendall_tau\n"
      << rep.n << "  " << rep.spearman_rho << "  " << rep.kendall_tau << '\n';
  return kExitOk;
}

int cmd_eval_quality(const EvalArgs& a, std::ostream& out) {
  require_inputs({&a.labels, &a.ground_truth, &a.hierarchy});
  const auto labels = load_pseudo_labels(a.labels);
  const auto gt = load_annotations(a.ground_truth);
  const auto names = load_hierarchy(a.hierarchy).class_names();
  const auto rep = eval::pseudo_label_quality(labels, names, gt, a.match_iou);
  const Json report = {{"labels", rep.labels},
                       {"ground_truth", rep.ground_truth},
                       {"true_positives", rep.true_positives},
                       {"precision", optional_json(rep.precision)},
                       {"recall", optional_json(rep.recall)}};
  std::ostringstream csv;
  csv << "labels,ground_truth,true_positives,precision,recall\n"
      << rep.labels << ',' << rep.ground_truth << ',' << rep.true_positives << ','
      << fmt_fraction(rep.precision) << ',' << fmt_fraction(rep.recall) << '\n';
  emit_report(a, "eval quality", report, csv.str());
  out << "labels  ground_truth  tp  precision  recall\n"
      << rep.labels << "  " << rep.ground_truth << "  " << rep.true_positives << "  "
      << fmt_fraction(rep.precision) << "  " << fmt_fraction(rep.recall) << '\n';
  return kExitOk;
}

void write_error(std::ostream& err, std::string_view kind, const std::string& message,
                 const std::optional<std::string>& path = std::nullopt) {
  Json j = {{"error", kind}, {"message", message}};
  if (path) j["path"] = *path;
  err << j.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  init_logging();

  CLI::App app{"Calibrated pseudo labels for open-vocabulary detection", "hccal"};
  app.require_subcommand(1);

  RefineArgs refine_args;
  TrainArgs train_args;
  PseudoArgs pseudo_args;
  EvalArgs eval_args;

  auto* refine_cmd = app.add_subcommand("refine", "Refine an LLM-generated hierarchy");
  add_refine(*refine_cmd, refine_args);
  auto* train_cmd = app.add_subcommand("train-objectness", "Train the objectness head");
  add_train(*train_cmd, train_args);
  auto* pseudo_cmd = app.add_subcommand("pseudolabel", "Generate calibrated pseudo labels");
  add_pseudolabel(*pseudo_cmd, pseudo_args);

  auto* eval_cmd = app.add_subcommand("eval", "Evaluation studies");
  eval_cmd->require_subcommand(1);
  auto* consistency = eval_cmd->add_subcommand("consistency", "Hierarchical consistency study");
  consistency->add_option("--features", eval_args.features)->required();
  consistency->add_option("--text-features", eval_args.text_features)->required();
  consistency->add_option("--hierarchy", eval_args.hierarchy)->required();
  consistency->add_option("--regions", eval_args.regions)->required();
  consistency->add_option("--ground-truth", eval_args.ground_truth)->required();
  consistency->add_option("--fg-iou", eval_args.fg_iou)->capture_default_str();
  consistency->add_option("--bg-iou", eval_args.bg_iou)->capture_default_str();
  consistency->add_option("--temperature", eval_args.temperature)->capture_default_str();
  consistency->add_option("--class-temperature", eval_args.class_temperature)
      ->capture_default_str();
  auto* correlation = eval_cmd->add_subcommand("correlation", "Spearman and Kendall correlation");
  correlation->add_option("--pairs", eval_args.pairs, "CSV of x,y pairs");
  correlation->add_option("--features", eval_args.features);
  correlation->add_option("--regions", eval_args.regions);
  correlation->add_option("--head", eval_args.head);
  correlation->add_option("--ground-truth", eval_args.ground_truth);
  auto* quality = eval_cmd->add_subcommand("quality", "Pseudo-label precision and recall");
  quality->add_option("--labels", eval_args.labels)->required();
  quality->add_option("--ground-truth", eval_args.ground_truth)->required();
  quality->add_option("--hierarchy", eval_args.hierarchy, "Supplies the class order")
      ->required();
  quality->add_option("--match-iou", eval_args.match_iou)->capture_default_str();
  for (auto* sub : {consistency, correlation, quality}) {
    sub->add_option("--out", eval_args.out, "Report JSON");
    sub->add_option("--csv", eval_args.csv, "Report CSV");
  }

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    write_error(err, "usage", e.what());
    return kExitUsage;
  }

  try {
    if (refine_cmd->parsed()) return cmd_refine(refine_args, out);
    if (train_cmd->parsed()) return cmd_train_objectness(train_args, out);
    if (pseudo_cmd->parsed()) return cmd_pseudolabel(pseudo_args, out, err);
    if (consistency->parsed()) return cmd_eval_consistency(eval_args, out);
    if (correlation->parsed()) return cmd_eval_correlation(eval_args, out);
    if (quality->parsed()) return cmd_eval_quality(eval_args, out);
  } catch (const MissingInput& e) {
    write_error(err, "io", "input file not found: " + e.path, e.path);
    return kExitIo;
  } catch (const Error& e) {
    write_error(err, to_string(e.kind()), e.what());
    return e.kind() == ErrorKind::io ? kExitIo : kExitFailure;
  } catch (const Json::exception& e) {
    write_error(err, "data", e.what());
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace hccal::cli
