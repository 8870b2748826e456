#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hccal/types.hpp"

namespace hccal::scoring {

/// Cosine similarities between one region and a set of text embeddings.
class SimilarityRow {
 public:
  explicit SimilarityRow(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

/// Similarity against every row of `texts`.
SimilarityRow cosine_similarities(std::span<const double> region, const FeatureMatrix& texts);
/// Similarity against the selected rows of `texts`, in the given order.
SimilarityRow cosine_similarities(std::span<const double> region, const FeatureMatrix& texts,
                                  std::span<const std::size_t> rows);

/// exp(t*x_i) / sum_j exp(t*x_j), evaluated with the maximum subtracted.
std::vector<double> softmax(std::span<const double> logits, double temperature);

/// Softmax over the novel classes. Needs at least two classes.
ProbVector class_probabilities(const SimilarityRow& sims, double temperature = 1.0);

/// Class probabilities for a region using each class's prompt row in `texts`.
ProbVector class_probabilities(std::span<const double> region, const FeatureMatrix& texts,
                               const Hierarchy& hierarchy, double temperature = 1.0);

/// One joint softmax over all entries of all classes at `level`. A class with
/// no entries at that level is a hierarchy error.
SubProbMatrix hierarchy_probabilities(std::span<const double> region, const FeatureMatrix& texts,
                                      const Hierarchy& hierarchy, Level level,
                                      double temperature = 1.0);

}  // namespace hccal::scoring
