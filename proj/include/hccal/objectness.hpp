#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hccal/io.hpp"
#include "hccal/types.hpp"

// Objectness estimation with a sigmoid linear head over frozen region
// features, trained on IoU-derived binary labels.
namespace hccal::objectness {

struct RegionLabels {
  std::vector<std::uint8_t> labels;  // 1 = positive
  bool no_ground_truth = false;      // set when the ground truth list was empty
};

/// Positive iff the best same-image IoU against ground truth exceeds pos_iou.
RegionLabels label_regions(std::span<const RegionRecord> proposals,
                           std::span<const RegionRecord> ground_truth, double pos_iou);

class ObjectnessDataset {
 public:
  ObjectnessDataset(FeatureMatrix features, std::vector<std::uint8_t> labels);

  const FeatureMatrix& features() const noexcept { return features_; }
  std::span<const std::uint8_t> labels() const noexcept { return labels_; }
  std::size_t n_pos() const noexcept { return n_pos_; }
  std::size_t n_neg() const noexcept { return n_neg_; }
  std::size_t size() const noexcept { return labels_.size(); }

  /// Throws unless both classes are present.
  void require_both_classes() const;

 private:
  FeatureMatrix features_;
  std::vector<std::uint8_t> labels_;
  std::size_t n_pos_ = 0;
  std::size_t n_neg_ = 0;
};

/// Gathers each proposal's feature row and labels it against ground truth.
ObjectnessDataset build_dataset(std::span<const RegionRecord> proposals,
                                const FeatureMatrix& features,
                                std::span<const RegionRecord> ground_truth, double pos_iou);

struct ObjectnessHead {
  std::vector<double> weights;
  double bias = 0.0;
  std::optional<double> tau;

  std::size_t dim() const noexcept { return weights.size(); }
  bool operator==(const ObjectnessHead&) const = default;
};

struct TrainConfig {
  double max_lr = 0.001;
  std::size_t iterations = 8000;
  std::size_t batch_size = 64;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Term weights for the weighted BCE. Inverse frequency: positives are weighted
/// by the negative share and vice versa.
struct LossWeights {
  double positive = 1.0;
  double negative = 1.0;

  static LossWeights inverse_frequency(std::size_t n_pos, std::size_t n_neg);
};

inline constexpr double kProbabilityClip = 1e-7;

double sigmoid(double x);

/// -w_pos*y*ln(p) - w_neg*(1-y)*ln(1-p), with p clipped to [1e-7, 1-1e-7].
double weighted_bce_loss(double pred, int label, double w_pos, double w_neg);

/// d loss / d logit for pred = sigmoid(logit); zero where the clip is active.
double weighted_bce_logit_gradient(double logit, int label, double w_pos, double w_neg);

/// max_lr * (1 + cos(pi * t / T)) / 2.
double cosine_lr(double max_lr, std::size_t t, std::size_t total);

struct TrainLogEntry {
  std::size_t iteration = 0;
  double lr = 0.0;
  double loss = 0.0;
};

struct TrainResult {
  ObjectnessHead head;
  std::vector<TrainLogEntry> log;
};

/// Mini-batch SGD from zero weights with a per-epoch seeded shuffle. Fully
/// deterministic for a given dataset and config.
TrainResult train_head(const ObjectnessDataset& data, const TrainConfig& config);

double objectness_score(const ObjectnessHead& head, std::span<const double> feature);

/// Fraction of samples where (score >= tau) matches the label.
double threshold_accuracy(std::span<const double> scores, std::span<const std::uint8_t> labels,
                          double tau);

/// Best accuracy over tau in {0.1, ..., 0.9}; ties go to the lowest tau.
double select_tau(std::span<const double> scores, std::span<const std::uint8_t> labels);
double select_tau(const ObjectnessHead& head, const ObjectnessDataset& data);

Json to_json(const ObjectnessHead& head);
ObjectnessHead head_from_json(const Json& j);
std::string training_log_csv(std::span<const TrainLogEntry> log);

}  // namespace hccal::objectness
