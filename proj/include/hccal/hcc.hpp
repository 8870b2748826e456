#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hccal/types.hpp"

// Hierarchical confidence calibration. Class probabilities are reweighted by
// how strongly each class's best super-/sub-category is supported, which
// raises the top score when the levels agree and lowers it when they do not.
namespace hccal::hcc {

/// Per-class score pooled from one hierarchy level; entries lie in (0, 1].
class ClasswiseScores {
 public:
  ClasswiseScores(std::vector<double> values, Level level);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }
  Level level() const noexcept { return level_; }
  std::size_t argmax() const { return hccal::argmax(values_); }

 private:
  std::vector<double> values_;
  Level level_;
};

/// Max/min ratio bound on class-wise scores under which suppression is
/// guaranteed for two classes.
class FlatnessBound {
 public:
  explicit FlatnessBound(double beta);
  double beta() const noexcept { return beta_; }
  bool admits(const ClasswiseScores& z) const;

 private:
  double beta_;
};

/// max(z) / min(z).
double flatness(const ClasswiseScores& z);

struct CalibrationOutcome {
  ProbVector r_sub;
  ProbVector r_sup;
  ProbVector r;
  ClasswiseScores z_sub;
  ClasswiseScores z_sup;
  double p_hat = 0.0;
  double r_hat = 0.0;
  bool consistent_sub = false;
  bool consistent_sup = false;

  std::size_t label() const { return r.argmax(); }
};

/// Row-wise maximum of a joint hierarchy distribution.
ClasswiseScores pool_classwise(const SubProbMatrix& p_level);

/// r(n) = p(n) z(n) / sum_m p(m) z(m).
ProbVector calibrate_level(const ProbVector& p, const ClasswiseScores& z);

/// Elementwise mean of the two calibrated distributions.
ProbVector combine(const ProbVector& r_sub, const ProbVector& r_sup);

CalibrationOutcome calibrate(const ProbVector& p, const SubProbMatrix& p_sub,
                             const SubProbMatrix& p_sup);

/// Baseline that accepts argmax(p) only when the class, sub and super argmaxes
/// coincide.
std::optional<std::size_t> direct_consistency_label(const ProbVector& p,
                                                    const ClasswiseScores& z_sub,
                                                    const ClasswiseScores& z_sup);

}  // namespace hccal::hcc
