#pragma once

// Random but structured pseudo-labeling worlds shared by the unit and
// acceptance tests, plus a plain-loop reference for the whole gate sequence.

#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hccal/objectness.hpp"
#include "hccal/types.hpp"
#include "support/oracle.hpp"

namespace synthetic {

struct World {
  std::size_t classes = 0;
  std::size_t dim = 0;
  hccal::FeatureMatrix features{1, 1, {0.0}};       // one row per region
  hccal::FeatureMatrix text_features{1, 1, {0.0}};  // class prompts, then entries
  hccal::Hierarchy hierarchy;
  std::vector<hccal::RegionRecord> regions;
  hccal::objectness::ObjectnessHead head;
  std::vector<std::size_t> true_class;
};

struct WorldSpec {
  std::size_t classes = 4;
  std::size_t dim = 12;
  std::size_t regions = 200;
  std::size_t images = 5;
  std::size_t max_entries = 4;  // per class and level, at least 1
  double signal = 1.0;          // mean strength of the class direction in a region
};

inline oracle::Vec random_vec(std::size_t d, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  oracle::Vec v(d);
  for (auto& x : v) x = normal(rng);
  return v;
}

inline World make_world(const WorldSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  World w;
  w.classes = spec.classes;
  w.dim = spec.dim;

  std::vector<oracle::Vec> centers;
  std::vector<double> text;
  std::size_t row = 0;
  auto push_text = [&](const oracle::Vec& base, double noise) {
    const auto n = random_vec(spec.dim, rng, noise);
    for (std::size_t j = 0; j < spec.dim; ++j) text.push_back(base[j] + n[j]);
    return row++;
  };
  for (std::size_t c = 0; c < spec.classes; ++c) {
    centers.push_back(random_vec(spec.dim, rng));
    hccal::ClassNode node;
    node.name = "class" + std::to_string(c);
    node.text_row = push_text(centers[c], 0.1);
    w.hierarchy.classes.push_back(node);
  }
  for (std::size_t c = 0; c < spec.classes; ++c) {
    auto& node = w.hierarchy.classes[c];
    const std::size_t n_sub = 1 + rng() % spec.max_entries;
    const std::size_t n_sup = 1 + rng() % spec.max_entries;
    for (std::size_t k = 0; k < n_sub; ++k) {
      node.subs.push_back({node.name + "_sub" + std::to_string(k), push_text(centers[c], 0.6)});
    }
    for (std::size_t k = 0; k < n_sup; ++k) {
      node.supers.push_back({node.name + "_sup" + std::to_string(k), push_text(centers[c], 0.9)});
    }
  }
  w.text_features = hccal::FeatureMatrix(row, spec.dim, text);

  std::vector<double> feats;
  for (std::size_t i = 0; i < spec.regions; ++i) {
    const std::size_t c = rng() % spec.classes;
    w.true_class.push_back(c);
    const double strength = spec.signal * 2.0 * u(rng);
    const auto n = random_vec(spec.dim, rng, 0.8);
    for (std::size_t j = 0; j < spec.dim; ++j) feats.push_back(strength * centers[c][j] + n[j]);
    const double x = 100.0 * u(rng), y = 100.0 * u(rng);
    w.regions.push_back({"img" + std::to_string(rng() % spec.images), "r" + std::to_string(i),
                         hccal::Box{x, y, x + 5.0 + 40.0 * u(rng), y + 5.0 + 40.0 * u(rng)}, i});
  }
  w.features = hccal::FeatureMatrix(spec.regions, spec.dim, feats);
  w.head.weights = random_vec(spec.dim, rng, 0.5);
  w.head.bias = 0.2;
  return w;
}

struct Expected {
  enum class Stage { prefilter, gamma, tau, emitted } stage = Stage::prefilter;
  oracle::Calibrated calibrated;
  double objectness = 0.0;
  std::size_t label = 0;
  double confidence = 0.0;
};

inline oracle::Vec row_of(const hccal::FeatureMatrix& m, std::size_t r) {
  const auto s = m.row(r);
  return oracle::Vec(s.begin(), s.end());
}

// Straight from the definitions: cosine similarities, two softmaxes, max
// pooling, re-weighting, then prefilter, gamma and tau gates in that order.
inline Expected expected_outcome(const World& w, std::size_t region, double gamma, double tau,
                                 double prefilter, double class_t, double level_t) {
  const auto x = row_of(w.features, *w.regions[region].feature_row);
  oracle::Vec class_sims, sub_sims, sup_sims;
  std::vector<std::size_t> sub_counts, sup_counts;
  for (const auto& node : w.hierarchy.classes) {
    class_sims.push_back(oracle::cosine(x, row_of(w.text_features, node.text_row)));
    for (const auto& e : node.subs) sub_sims.push_back(oracle::cosine(x, row_of(w.text_features, e.row)));
    for (const auto& e : node.supers) sup_sims.push_back(oracle::cosine(x, row_of(w.text_features, e.row)));
    sub_counts.push_back(node.subs.size());
    sup_counts.push_back(node.supers.size());
  }
  Expected out;
  out.calibrated =
      oracle::calibrate_from_sims(class_sims, sub_sims, sub_counts, sup_sims, sup_counts, class_t, level_t);
  if (out.calibrated.p_hat < prefilter) return out;
  if (out.calibrated.r_hat < gamma) {
    out.stage = Expected::Stage::gamma;
    return out;
  }
  double logit = w.head.bias;
  for (std::size_t j = 0; j < x.size(); ++j) logit += w.head.weights[j] * x[j];
  out.objectness = 1.0 / (1.0 + std::exp(-logit));
  if (out.objectness < tau) {
    out.stage = Expected::Stage::tau;
    return out;
  }
  out.stage = Expected::Stage::emitted;
  out.label = oracle::first_argmax(out.calibrated.r);
  out.confidence = out.calibrated.r_hat;
  return out;
}

}  // namespace synthetic
