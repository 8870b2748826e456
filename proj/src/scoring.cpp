#include "hccal/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hccal/error.hpp"

namespace hccal::scoring {

namespace {

constexpr double kSimilaritySlack = 1e-7;

double norm_of(std::span<const double> v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  return std::sqrt(sq);
}

double cosine(std::span<const double> a, double a_norm, std::span<const double> b,
              std::size_t b_row) {
  const double b_norm = norm_of(b);
  if (b_norm == 0.0) {
    throw Error(ErrorKind::degenerate_feature,
                "text feature row " + std::to_string(b_row) + " has zero norm");
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  return std::clamp(dot / (a_norm * b_norm), -1.0, 1.0);
}

double checked_norm(std::span<const double> region, const FeatureMatrix& texts) {
  if (region.size() != texts.dim()) {
    std::ostringstream msg;
    msg << "region feature has dim " << region.size() << ", text features have dim "
        << texts.dim();
    throw Error(ErrorKind::shape, msg.str());
  }
  const double n = norm_of(region);
  if (n == 0.0) throw Error(ErrorKind::degenerate_feature, "region feature has zero norm");
  return n;
}

}  // namespace

SimilarityRow::SimilarityRow(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (!(v >= -1.0 - kSimilaritySlack && v <= 1.0 + kSimilaritySlack)) {
      throw Error(ErrorKind::data, "cosine similarity outside [-1, 1]");
    }
  }
}

SimilarityRow cosine_similarities(std::span<const double> region, const FeatureMatrix& texts) {
  const double rn = checked_norm(region, texts);
  std::vector<double> out(texts.rows());
  for (std::size_t i = 0; i < texts.rows(); ++i) out[i] = cosine(region, rn, texts.row(i), i);
  return SimilarityRow(std::move(out));
}

SimilarityRow cosine_similarities(std::span<const double> region, const FeatureMatrix& texts,
                                  std::span<const std::size_t> rows) {
  const double rn = checked_norm(region, texts);
  std::vector<double> out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out[i] = cosine(region, rn, texts.row(rows[i]), rows[i]);
  }
  return SimilarityRow(std::move(out));
}

std::vector<double> softmax(std::span<const double> logits, double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw Error(ErrorKind::config, "temperature must be positive");
  }
  if (logits.empty()) throw Error(ErrorKind::shape, "softmax of an empty vector");
  const double peak = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(temperature * (logits[i] - peak));
    total += out[i];
  }
  for (double& v : out) v /= total;
  return out;
}

ProbVector class_probabilities(const SimilarityRow& sims, double temperature) {
  if (sims.size() < 2) {
    throw Error(ErrorKind::shape, "class probabilities need at least two novel classes");
  }
  return ProbVector(softmax(sims.values(), temperature));
}

ProbVector class_probabilities(std::span<const double> region, const FeatureMatrix& texts,
                               const Hierarchy& hierarchy, double temperature) {
  std::vector<std::size_t> rows;
  rows.reserve(hierarchy.size());
  for (const auto& c : hierarchy.classes) rows.push_back(c.text_row);
  return class_probabilities(cosine_similarities(region, texts, rows), temperature);
}

SubProbMatrix hierarchy_probabilities(std::span<const double> region, const FeatureMatrix& texts,
                                      const Hierarchy& hierarchy, Level level,
                                      double temperature) {
  std::vector<std::size_t> rows;
  for (const auto& c : hierarchy.classes) {
    const auto& entries = c.entries(level);
    if (entries.empty()) {
      throw Error(ErrorKind::hierarchy, "class '" + c.name + "' has no " + to_string(level) +
                                            "-category entries");
    }
    for (const auto& e : entries) rows.push_back(e.row);
  }
  const auto joint = softmax(cosine_similarities(region, texts, rows).values(), temperature);

  std::vector<std::vector<double>> out;
  out.reserve(hierarchy.size());
  auto it = joint.begin();
  for (const auto& c : hierarchy.classes) {
    const auto k = static_cast<std::ptrdiff_t>(c.entries(level).size());
    out.emplace_back(it, it + k);
    it += k;
  }
  return SubProbMatrix(std::move(out), level);
}

}  // namespace hccal::scoring
