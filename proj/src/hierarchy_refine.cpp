#include "hccal/hierarchy_refine.hpp"

#include <cmath>
#include <set>

#include "hccal/error.hpp"

namespace hccal::refine {

namespace {

constexpr Level kLevels[] = {Level::sup, Level::sub};

const char* relation_name(Level level) { return level == Level::sub ? "sub" : "super"; }

double cosine(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) {
    throw Error(ErrorKind::degenerate_feature, "hierarchy entry embedding has zero norm");
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace

void VerdictSet::set(const std::string& cls, const std::string& entry, Level level, bool is_a) {
  verdicts_[{cls, entry, level}] = is_a;
}

std::optional<bool> VerdictSet::find(const std::string& cls, const std::string& entry,
                                     Level level) const {
  auto it = verdicts_.find({cls, entry, level});
  if (it == verdicts_.end()) return std::nullopt;
  return it->second;
}

RawHierarchy filter_correctness(const RawHierarchy& raw, const VerdictSet& verdicts) {
  RawHierarchy out = raw;
  for (auto& c : out.classes) {
    for (Level level : kLevels) {
      auto& list = c.entries(level);
      std::vector<RawEntry> kept;
      for (auto& e : list) {
        const auto verdict = verdicts.find(c.name, e.name, level);
        if (!verdict) {
          throw Error(ErrorKind::incomplete_verdict,
                      std::string("no Is-A verdict for ") + relation_name(level) + " entry '" +
                          e.name + "' of class '" + c.name + "'");
        }
        if (*verdict) kept.push_back(std::move(e));
      }
      list = std::move(kept);
    }
  }
  return out;
}

RawHierarchy filter_discriminability(const RawHierarchy& raw, const ClassVocabulary& vocab,
                                     double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error(ErrorKind::config, "discriminability fraction must lie in (0, 1]");
  }
  std::map<std::string, std::size_t> holders;
  for (const auto& c : raw.classes) {
    std::set<std::string> names;
    for (const auto& e : c.supers) names.insert(e.name);
    for (const auto& name : names) ++holders[name];
  }
  // The slack keeps an exact boundary such as 1/3 * 6 == 2 from rounding into
  // a removal.
  const double limit = fraction * static_cast<double>(vocab.novel().size()) + 1e-9;
  RawHierarchy out = raw;
  for (auto& c : out.classes) {
    std::erase_if(c.supers, [&](const RawEntry& e) {
      return static_cast<double>(holders[e.name]) > limit;
    });
  }
  return out;
}

RawHierarchy remove_near_duplicates(const RawHierarchy& raw, const FeatureMatrix& entry_features,
                                    double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error(ErrorKind::config, "duplicate threshold must lie in (0, 1)");
  }
  RawHierarchy out = raw;
  for (auto& c : out.classes) {
    for (Level level : kLevels) {
      std::vector<RawEntry> kept;
      for (auto& e : c.entries(level)) {
        if (!e.row || *e.row >= entry_features.rows()) {
          throw Error(ErrorKind::hierarchy, "entry '" + e.name + "' of class '" + c.name +
                                                "' has no valid feature row");
        }
        bool duplicate = false;
        for (const auto& k : kept) {
          if (cosine(entry_features.row(*e.row), entry_features.row(*k.row)) > threshold) {
            duplicate = true;
            break;
          }
        }
        if (!duplicate) kept.push_back(std::move(e));
      }
      c.entries(level) = std::move(kept);
    }
  }
  return out;
}

Hierarchy refine(const RawHierarchy& raw, const VerdictSet& verdicts,
                 const ClassVocabulary& vocab, const FeatureMatrix& entry_features,
                 const RefineConfig& config) {
  auto stage = filter_correctness(raw, verdicts);
  stage = filter_discriminability(stage, vocab, config.discriminability_fraction);
  stage = remove_near_duplicates(stage, entry_features, config.duplicate_threshold);

  Hierarchy out;
  for (std::size_t i = 0; i < stage.classes.size(); ++i) {
    const auto& c = stage.classes[i];
    ClassNode node;
    node.name = c.name;
    node.text_row = c.text_row.value_or(i);
    for (Level level : kLevels) {
      if (c.entries(level).empty()) {
        throw Error(ErrorKind::refinement, "class '" + c.name + "' has no " +
                                               relation_name(level) +
                                               "-categories left after refinement");
      }
      auto& dst = level == Level::sub ? node.subs : node.supers;
      for (const auto& e : c.entries(level)) dst.push_back({e.name, *e.row});
    }
    out.classes.push_back(std::move(node));
  }
  return out;
}

RawHierarchy to_raw(const Hierarchy& h) {
  RawHierarchy raw;
  raw.k_sup = 0;
  raw.k_sub = 0;
  for (const auto& c : h.classes) {
    RawClass rc{c.name, c.text_row, {}, {}};
    for (const auto& e : c.supers) rc.supers.push_back({e.name, e.row});
    for (const auto& e : c.subs) rc.subs.push_back({e.name, e.row});
    raw.k_sup = std::max(raw.k_sup, rc.supers.size());
    raw.k_sub = std::max(raw.k_sub, rc.subs.size());
    raw.classes.push_back(std::move(rc));
  }
  return raw;
}

RawHierarchy raw_hierarchy_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("classes") || !j.at("classes").is_object()) {
    throw Error(ErrorKind::data, "raw hierarchy needs a 'classes' object");
  }
  RawHierarchy raw;
  raw.k_sup = j.value("k_sup", raw.k_sup);
  raw.k_sub = j.value("k_sub", raw.k_sub);
  for (const auto& [name, node] : j.at("classes").items()) {
    RawClass c;
    c.name = name;
    for (Level level : kLevels) {
      const char* key = level == Level::sub ? "subs" : "supers";
      if (!node.contains(key) || !node.at(key).is_array() || node.at(key).empty()) {
        throw Error(ErrorKind::data,
                    "raw hierarchy class '" + name + "' needs a non-empty '" + key + "' list");
      }
      for (const auto& entry : node.at(key)) {
        if (!entry.is_string()) {
          throw Error(ErrorKind::data, "raw hierarchy entries must be strings");
        }
        c.entries(level).push_back({entry.get<std::string>(), std::nullopt});
      }
    }
    raw.classes.push_back(std::move(c));
  }
  return raw;
}

VerdictSet verdicts_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorKind::data, "verdicts must be a JSON array");
  VerdictSet out;
  for (const auto& v : j) {
    try {
      const auto relation = v.at("relation").get<std::string>();
      if (relation != "super" && relation != "sub") {
        throw Error(ErrorKind::data, "verdict relation must be 'super' or 'sub'");
      }
      out.set(v.at("class").get<std::string>(), v.at("entry").get<std::string>(),
              relation == "sub" ? Level::sub : Level::sup, v.at("is_a").get<bool>());
    } catch (const Json::exception& e) {
      throw Error(ErrorKind::data, std::string("malformed verdict: ") + e.what());
    }
  }
  return out;
}

RawHierarchy attach_rows(RawHierarchy raw, const std::map<std::string, std::size_t>& index) {
  for (auto& c : raw.classes) {
    if (auto it = index.find(c.name); it != index.end()) c.text_row = it->second;
    for (Level level : kLevels) {
      for (auto& e : c.entries(level)) {
        if (auto it = index.find(e.name); it != index.end()) e.row = it->second;
      }
    }
  }
  return raw;
}

}  // namespace hccal::refine
