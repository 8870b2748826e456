#include "hccal/hcc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hccal/error.hpp"

namespace hccal::hcc {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    std::ostringstream msg;
    msg << what << ": size " << a << " vs " << b;
    throw Error(ErrorKind::shape, msg.str());
  }
}

}  // namespace

ClasswiseScores::ClasswiseScores(std::vector<double> values, Level level)
    : values_(std::move(values)), level_(level) {
  if (values_.empty()) throw Error(ErrorKind::shape, "class-wise scores are empty");
  for (double v : values_) {
    if (!(v > 0.0 && v <= 1.0)) {
      throw Error(ErrorKind::degenerate_score, "class-wise score outside (0, 1]");
    }
  }
}

FlatnessBound::FlatnessBound(double beta) : beta_(beta) {
  if (!(beta_ >= 1.0) || !std::isfinite(beta_)) {
    throw Error(ErrorKind::config, "flatness bound must be >= 1");
  }
}

bool FlatnessBound::admits(const ClasswiseScores& z) const { return flatness(z) <= beta_; }

double flatness(const ClasswiseScores& z) {
  const auto [lo, hi] = std::minmax_element(z.values().begin(), z.values().end());
  return *hi / *lo;
}

ClasswiseScores pool_classwise(const SubProbMatrix& p_level) {
  std::vector<double> pooled(p_level.classes());
  for (std::size_t n = 0; n < p_level.classes(); ++n) {
    const auto row = p_level.row(n);
    if (row.empty()) {
      throw Error(ErrorKind::hierarchy, "class " + std::to_string(n) + " has no " +
                                            to_string(p_level.level()) + "-category entries");
    }
    pooled[n] = *std::max_element(row.begin(), row.end());
  }
  return ClasswiseScores(std::move(pooled), p_level.level());
}

ProbVector calibrate_level(const ProbVector& p, const ClasswiseScores& z) {
  require_same_size(p.size(), z.size(), "calibrate_level");
  std::vector<double> r(p.size());
  double denom = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) {
    r[n] = p[n] * z[n];
    denom += r[n];
  }
  if (!(denom > 0.0)) {
    throw Error(ErrorKind::degenerate_score, "calibration denominator is zero");
  }
  for (double& v : r) v /= denom;
  return ProbVector(std::move(r));
}

ProbVector combine(const ProbVector& r_sub, const ProbVector& r_sup) {
  require_same_size(r_sub.size(), r_sup.size(), "combine");
  std::vector<double> r(r_sub.size());
  for (std::size_t n = 0; n < r.size(); ++n) r[n] = (r_sub[n] + r_sup[n]) / 2.0;
  return ProbVector(std::move(r));
}

CalibrationOutcome calibrate(const ProbVector& p, const SubProbMatrix& p_sub,
                             const SubProbMatrix& p_sup) {
  require_same_size(p.size(), p_sub.classes(), "calibrate (sub level)");
  require_same_size(p.size(), p_sup.classes(), "calibrate (super level)");

  auto z_sub = pool_classwise(p_sub);
  auto z_sup = pool_classwise(p_sup);
  auto r_sub = calibrate_level(p, z_sub);
  auto r_sup = calibrate_level(p, z_sup);
  auto r = combine(r_sub, r_sup);

  const std::size_t top = p.argmax();
  const double p_hat = p.max();
  const double r_hat = r.max();
  const bool consistent_sub = z_sub.argmax() == top;
  const bool consistent_sup = z_sup.argmax() == top;
  return CalibrationOutcome{std::move(r_sub), std::move(r_sup), std::move(r),
                            std::move(z_sub), std::move(z_sup), p_hat,
                            r_hat,            consistent_sub,   consistent_sup};
}

std::optional<std::size_t> direct_consistency_label(const ProbVector& p,
                                                    const ClasswiseScores& z_sub,
                                                    const ClasswiseScores& z_sup) {
  require_same_size(p.size(), z_sub.size(), "direct_consistency_label (sub level)");
  require_same_size(p.size(), z_sup.size(), "direct_consistency_label (super level)");
  const std::size_t top = p.argmax();
  if (z_sub.argmax() == top && z_sup.argmax() == top) return top;
  return std::nullopt;
}

}  // namespace hccal::hcc
