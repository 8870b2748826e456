#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "hccal/io.hpp"
#include "hccal/types.hpp"

// Cleans an LLM-generated hierarchy in three passes: drop entries the Is-A
// check rejected, drop super-categories shared by too many classes, then drop
// near-duplicate entries by embedding similarity.
namespace hccal::refine {

struct RawEntry {
  std::string name;
  std::optional<std::size_t> row;  // text-feature row, needed for de-duplication

  bool operator==(const RawEntry&) const = default;
};

struct RawClass {
  std::string name;
  std::optional<std::size_t> text_row;
  std::vector<RawEntry> supers;
  std::vector<RawEntry> subs;

  std::vector<RawEntry>& entries(Level level) { return level == Level::sub ? subs : supers; }
  const std::vector<RawEntry>& entries(Level level) const {
    return level == Level::sub ? subs : supers;
  }
  bool operator==(const RawClass&) const = default;
};

struct RawHierarchy {
  std::vector<RawClass> classes;
  std::size_t k_sup = 10;
  std::size_t k_sub = 30;

  bool operator==(const RawHierarchy&) const = default;
};

/// Recorded Is-A answers keyed by (class, entry, level).
class VerdictSet {
 public:
  void set(const std::string& cls, const std::string& entry, Level level, bool is_a);
  std::optional<bool> find(const std::string& cls, const std::string& entry, Level level) const;
  std::size_t size() const noexcept { return verdicts_.size(); }

 private:
  std::map<std::tuple<std::string, std::string, Level>, bool> verdicts_;
};

struct RefineConfig {
  double discriminability_fraction = 1.0 / 3.0;
  double duplicate_threshold = 0.95;
};

RawHierarchy filter_correctness(const RawHierarchy& raw, const VerdictSet& verdicts);

/// Removes, from every class, any super-category held by strictly more than
/// fraction * |novel classes| classes. Sub-categories are untouched.
RawHierarchy filter_discriminability(const RawHierarchy& raw, const ClassVocabulary& vocab,
                                     double fraction);

/// Greedy in-order scan per class list: an entry is dropped when its cosine
/// similarity to an already kept entry exceeds `threshold`.
RawHierarchy remove_near_duplicates(const RawHierarchy& raw, const FeatureMatrix& entry_features,
                                    double threshold);

Hierarchy refine(const RawHierarchy& raw, const VerdictSet& verdicts,
                 const ClassVocabulary& vocab, const FeatureMatrix& entry_features,
                 const RefineConfig& config = {});

RawHierarchy to_raw(const Hierarchy& h);

// File formats.
//   raw:      {"k_sup":10,"k_sub":30,"classes":{"<class>":{"supers":[..],"subs":[..]}}}
//   verdicts: [{"class":..,"entry":..,"relation":"super"|"sub","is_a":true}, ...]
//   index:    {"<entry or class name>": row, ...}
RawHierarchy raw_hierarchy_from_json(const Json& j);
VerdictSet verdicts_from_json(const Json& j);
/// Fills entry and class rows from a name-to-row index.
RawHierarchy attach_rows(RawHierarchy raw, const std::map<std::string, std::size_t>& index);

}  // namespace hccal::refine
