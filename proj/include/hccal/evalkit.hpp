#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hccal/hcc.hpp"
#include "hccal/types.hpp"

namespace hccal::eval {

/// Intersection over union of two corner-format boxes; 0 when disjoint.
double iou(const Box& a, const Box& b);

/// Ground-truth boxes grouped by image for max-IoU lookups.
class GroundTruthIndex {
 public:
  explicit GroundTruthIndex(std::span<const RegionRecord> ground_truth);

  /// Largest IoU against any box in the same image, 0 when the image has none.
  double max_iou(const RegionRecord& proposal) const;
  bool empty() const noexcept { return by_image_.empty(); }

 private:
  std::unordered_map<std::string, std::vector<Box>> by_image_;
};

struct RegionScores {
  ProbVector p;
  hcc::ClasswiseScores z_sub;
  hcc::ClasswiseScores z_sup;

  bool consistent() const;
};

struct ConsistencyReport {
  std::size_t fg_count = 0;
  std::size_t bg_count = 0;
  std::size_t fg_consistent = 0;
  std::size_t bg_consistent = 0;
  std::size_t excluded = 0;
  std::optional<double> fg_consistent_fraction;  // empty when fg_count == 0
  std::optional<double> bg_consistent_fraction;
};

/// Splits proposals into foreground (IoU > fg_iou) and background
/// (IoU < bg_iou), skipping the band in between, and reports how often each
/// group has matching class, sub and super argmaxes.
ConsistencyReport consistency_study(std::span<const RegionRecord> proposals,
                                    std::span<const RegionRecord> ground_truth,
                                    std::span<const RegionScores> scores, double fg_iou,
                                    double bg_iou);

/// 1-based ranks with ties sharing their average rank.
std::vector<double> average_ranks(std::span<const double> values);

/// Pearson correlation of average ranks.
double spearman(std::span<const double> x, std::span<const double> y);

/// Kendall tau-b, computed in O(n log n).
double kendall(std::span<const double> x, std::span<const double> y);

struct CorrelationReport {
  double spearman_rho = 0.0;
  double kendall_tau = 0.0;
  std::size_t n = 0;
};

CorrelationReport correlate(std::span<const double> x, std::span<const double> y);

struct QualityReport {
  std::size_t labels = 0;
  std::size_t ground_truth = 0;
  std::size_t true_positives = 0;
  std::optional<double> precision;  // empty without labels
  std::optional<double> recall;     // empty without ground truth
};

/// Greedy matching in descending confidence; each ground-truth box matches at
/// most once and only a same-class box in the same image with IoU >= match_iou.
/// Recall counts only annotations whose class appears in class_names.
QualityReport pseudo_label_quality(std::span<const PseudoLabel> labels,
                                   std::span<const std::string> class_names,
                                   std::span<const Annotation> ground_truth, double match_iou);

}  // namespace hccal::eval
