#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hccal {

/// Dense row-major matrix of embeddings. Stored as 32-bit floats on disk and
/// promoted to double in memory; every value is finite.
class FeatureMatrix {
 public:
  FeatureMatrix(std::size_t rows, std::size_t dim, std::vector<double> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t dim() const noexcept { return dim_; }
  std::span<const double> row(std::size_t i) const;
  std::span<const double> data() const noexcept { return data_; }

 private:
  std::size_t rows_;
  std::size_t dim_;
  std::vector<double> data_;
};

/// Returns a copy with every row scaled to unit Euclidean norm. A zero row is a
/// degenerate-feature error naming the row.
FeatureMatrix l2_normalize_rows(const FeatureMatrix& m);

/// Index of the largest element; ties resolve to the lowest index.
std::size_t argmax(std::span<const double> values);

/// Non-negative vector summing to one within 1e-9.
class ProbVector {
 public:
  static constexpr double kSumTolerance = 1e-9;

  explicit ProbVector(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }
  double max() const;
  std::size_t argmax() const { return hccal::argmax(values_); }

 private:
  std::vector<double> values_;
};

enum class Level { sub, sup };

const char* to_string(Level level);

/// One joint distribution over every (class, entry) pair at one hierarchy
/// level. Rows are ragged; the grand total is one within 1e-9.
class SubProbMatrix {
 public:
  SubProbMatrix(std::vector<std::vector<double>> rows, Level level);

  std::size_t classes() const noexcept { return rows_.size(); }
  std::span<const double> row(std::size_t n) const { return rows_.at(n); }
  Level level() const noexcept { return level_; }
  std::size_t entry_count() const;

 private:
  std::vector<std::vector<double>> rows_;
  Level level_;
};

class ClassVocabulary {
 public:
  ClassVocabulary(std::vector<std::string> novel, std::vector<std::string> base);

  const std::vector<std::string>& novel() const noexcept { return novel_; }
  const std::vector<std::string>& base() const noexcept { return base_; }
  std::optional<std::size_t> novel_index(const std::string& name) const;
  bool is_base(const std::string& name) const;

 private:
  std::vector<std::string> novel_;
  std::vector<std::string> base_;
};

struct HierarchyEntry {
  std::string name;
  std::size_t row = 0;

  bool operator==(const HierarchyEntry&) const = default;
};

struct ClassNode {
  std::string name;
  std::size_t text_row = 0;  // row of the class prompt in the text features
  std::vector<HierarchyEntry> supers;
  std::vector<HierarchyEntry> subs;

  const std::vector<HierarchyEntry>& entries(Level level) const {
    return level == Level::sub ? subs : supers;
  }
  bool operator==(const ClassNode&) const = default;
};

/// Super-/sub-categories per novel class, in class order. Lists may differ in
/// length between classes.
struct Hierarchy {
  std::vector<ClassNode> classes;

  std::size_t size() const noexcept { return classes.size(); }
  std::vector<std::string> class_names() const;
  /// Throws if any row index is out of range for `rows` or a class list holds
  /// a repeated name.
  void validate(std::size_t rows) const;

  bool operator==(const Hierarchy&) const = default;
};

struct Box {
  double x1 = 0, y1 = 0, x2 = 0, y2 = 0;

  double width() const noexcept { return x2 - x1; }
  double height() const noexcept { return y2 - y1; }
  double area() const noexcept { return width() * height(); }
  bool operator==(const Box&) const = default;
};

/// Throws a geometry error unless coordinates are finite, non-negative and
/// x2 > x1, y2 > y1.
void validate_box(const Box& box);

struct RegionRecord {
  std::string image_id;
  std::string region_id;
  Box box;
  std::optional<std::size_t> feature_row;

  bool operator==(const RegionRecord&) const = default;
};

/// A box with an optional class name. No class means a background instance.
struct Annotation {
  RegionRecord region;
  std::optional<std::string> category;

  bool operator==(const Annotation&) const = default;
};

struct PseudoLabel {
  RegionRecord region;
  std::size_t class_index = 0;
  double confidence = 0.0;  // calibrated r-hat
  double objectness = 0.0;

  bool operator==(const PseudoLabel&) const = default;
};

struct CalibrationConfig {
  double gamma = 0.8;
  double tau = 0.3;
  double prefilter = 0.5;
  double temperature = 1.0;        // hierarchy level, in (0, 1]
  double class_temperature = 1.0;  // class level, any positive value
  std::uint64_t seed = 0;

  void validate() const;
};

}  // namespace hccal
