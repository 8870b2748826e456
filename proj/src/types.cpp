#include "hccal/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "hccal/error.hpp"

namespace hccal {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::io: return "io";
    case ErrorKind::corrupt_file: return "corrupt_file";
    case ErrorKind::data: return "data";
    case ErrorKind::degenerate_feature: return "degenerate_feature";
    case ErrorKind::shape: return "shape";
    case ErrorKind::config: return "config";
    case ErrorKind::hierarchy: return "hierarchy";
    case ErrorKind::degenerate_score: return "degenerate_score";
    case ErrorKind::incomplete_verdict: return "incomplete_verdict";
    case ErrorKind::refinement: return "refinement";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::geometry: return "geometry";
    case ErrorKind::undefined_correlation: return "undefined_correlation";
  }
  return "unknown";
}

FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t dim, std::vector<double> data)
    : rows_(rows), dim_(dim), data_(std::move(data)) {
  if (rows_ == 0 || dim_ == 0) {
    throw Error(ErrorKind::shape, "feature matrix needs at least one row and one column");
  }
  if (data_.size() != rows_ * dim_) {
    std::ostringstream msg;
    msg << "feature matrix holds " << data_.size() << " values, expected " << rows_ << "x" << dim_;
    throw Error(ErrorKind::shape, msg.str());
  }
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      std::ostringstream msg;
      msg << "non-finite feature value at row " << i / dim_ << ", column " << i % dim_;
      throw Error(ErrorKind::data, msg.str());
    }
  }
}

std::span<const double> FeatureMatrix::row(std::size_t i) const {
  if (i >= rows_) {
    std::ostringstream msg;
    msg << "row " << i << " out of range for matrix with " << rows_ << " rows";
    throw Error(ErrorKind::shape, msg.str());
  }
  return std::span<const double>(data_).subspan(i * dim_, dim_);
}

FeatureMatrix l2_normalize_rows(const FeatureMatrix& m) {
  std::vector<double> out(m.data().begin(), m.data().end());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = std::span<double>(out).subspan(r * m.dim(), m.dim());
    double sq = 0.0;
    for (double v : row) sq += v * v;
    if (sq == 0.0) {
      throw Error(ErrorKind::degenerate_feature, "row " + std::to_string(r) + " has zero norm");
    }
    const double norm = std::sqrt(sq);
    for (double& v : row) v /= norm;
  }
  return FeatureMatrix(m.rows(), m.dim(), std::move(out));
}

std::size_t argmax(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::shape, "argmax of an empty vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

ProbVector::ProbVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw Error(ErrorKind::shape, "probability vector is empty");
  double total = 0.0;
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::data, "probability vector has a negative or non-finite entry");
    }
    total += v;
  }
  if (std::abs(total - 1.0) > kSumTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "probability vector sums to " << total;
    throw Error(ErrorKind::data, msg.str());
  }
}

double ProbVector::max() const { return *std::max_element(values_.begin(), values_.end()); }

const char* to_string(Level level) { return level == Level::sub ? "sub" : "sup"; }

SubProbMatrix::SubProbMatrix(std::vector<std::vector<double>> rows, Level level)
    : rows_(std::move(rows)), level_(level) {
  if (rows_.empty()) throw Error(ErrorKind::shape, "hierarchy probability matrix has no classes");
  double total = 0.0;
  for (const auto& row : rows_) {
    for (double v : row) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw Error(ErrorKind::data, "hierarchy probability has a negative or non-finite entry");
      }
      total += v;
    }
  }
  if (std::abs(total - 1.0) > ProbVector::kSumTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "hierarchy probabilities sum to " << total;
    throw Error(ErrorKind::data, msg.str());
  }
}

std::size_t SubProbMatrix::entry_count() const {
  std::size_t n = 0;
  for (const auto& row : rows_) n += row.size();
  return n;
}

ClassVocabulary::ClassVocabulary(std::vector<std::string> novel, std::vector<std::string> base)
    : novel_(std::move(novel)), base_(std::move(base)) {
  std::set<std::string> seen;
  for (const auto* list : {&novel_, &base_}) {
    for (const auto& name : *list) {
      if (!seen.insert(name).second) {
        throw Error(ErrorKind::data, "class name '" + name + "' appears more than once");
      }
    }
  }
}

std::optional<std::size_t> ClassVocabulary::novel_index(const std::string& name) const {
  auto it = std::find(novel_.begin(), novel_.end(), name);
  if (it == novel_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - novel_.begin());
}

bool ClassVocabulary::is_base(const std::string& name) const {
  return std::find(base_.begin(), base_.end(), name) != base_.end();
}

std::vector<std::string> Hierarchy::class_names() const {
  std::vector<std::string> names;
  names.reserve(classes.size());
  for (const auto& c : classes) names.push_back(c.name);
  return names;
}

void Hierarchy::validate(std::size_t rows) const {
  std::set<std::string> class_seen;
  for (const auto& c : classes) {
    if (!class_seen.insert(c.name).second) {
      throw Error(ErrorKind::hierarchy, "class '" + c.name + "' listed twice");
    }
    if (c.text_row >= rows) {
      throw Error(ErrorKind::hierarchy, "class '" + c.name + "' text row out of range");
    }
    for (Level level : {Level::sup, Level::sub}) {
      std::set<std::string> names;
      for (const auto& e : c.entries(level)) {
        if (e.row >= rows) {
          throw Error(ErrorKind::hierarchy, "entry '" + e.name + "' of class '" + c.name +
                                                "' has row " + std::to_string(e.row) +
                                                " beyond " + std::to_string(rows) + " rows");
        }
        if (!names.insert(e.name).second) {
          throw Error(ErrorKind::hierarchy, "entry '" + e.name + "' repeated in " +
                                                to_string(level) + " list of '" + c.name + "'");
        }
      }
    }
  }
}

void validate_box(const Box& b) {
  for (double v : {b.x1, b.y1, b.x2, b.y2}) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(ErrorKind::geometry, "box coordinates must be finite and non-negative");
    }
  }
  if (!(b.x2 > b.x1) || !(b.y2 > b.y1)) {
    throw Error(ErrorKind::geometry, "degenerate box: need x2 > x1 and y2 > y1");
  }
}

void CalibrationConfig::validate() const {
  auto in_unit = [](double v) { return v > 0.0 && v <= 1.0; };
  if (!in_unit(gamma)) throw Error(ErrorKind::config, "gamma must lie in (0, 1]");
  if (!in_unit(tau)) throw Error(ErrorKind::config, "tau must lie in (0, 1]");
  if (!(prefilter >= 0.0 && prefilter <= 1.0)) {
    throw Error(ErrorKind::config, "prefilter must lie in [0, 1]");
  }
  if (!in_unit(temperature)) throw Error(ErrorKind::config, "temperature must lie in (0, 1]");
  if (!(class_temperature > 0.0) || !std::isfinite(class_temperature)) {
    throw Error(ErrorKind::config, "class temperature must be positive");
  }
}

}  // namespace hccal
