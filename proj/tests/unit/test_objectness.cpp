#include <doctest.h>

#include <cmath>
#include <random>

#include "hccal/objectness.hpp"
#include "support/errors.hpp"
#include "support/oracle.hpp"

using namespace hccal;
using namespace hccal::objectness;
using testing_support::kind_of;

namespace {

RegionRecord box_record(const std::string& image, const std::string& id, Box b) {
  return RegionRecord{image, id, b, std::nullopt};
}

// Two clusters split by the line x + y = 0 with a margin.
ObjectnessDataset separable_2d(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> data;
  std::vector<std::uint8_t> labels;
  while (labels.size() < n) {
    const double x = u(rng), y = u(rng);
    if (std::abs(x + y) < 0.4) continue;
    data.push_back(x);
    data.push_back(y);
    labels.push_back(x + y > 0 ? 1 : 0);
  }
  return ObjectnessDataset(FeatureMatrix(n, 2, std::move(data)), std::move(labels));
}

}  // namespace

TEST_CASE("label_regions") {
  const std::vector<RegionRecord> gt = {box_record("img", "g0", {0, 0, 2, 2})};
  const std::vector<RegionRecord> proposals = {
      box_record("img", "same", {0, 0, 2, 2}),
      box_record("img", "disjoint", {5, 5, 6, 6}),
      box_record("img", "shifted", {1, 1, 3, 3}),
      box_record("other", "same-box-other-image", {0, 0, 2, 2}),
  };
  const auto out = label_regions(proposals, gt, 0.8);
  CHECK(out.labels == std::vector<std::uint8_t>{1, 0, 0, 0});
  CHECK_FALSE(out.no_ground_truth);
  CHECK(oracle::box_iou(0, 0, 2, 2, 1, 1, 3, 3) == doctest::Approx(1.0 / 7.0));

  // IoU must exceed the threshold strictly.
  const auto at_threshold = label_regions(proposals, gt, 1.0 / 7.0);
  CHECK(at_threshold.labels[2] == 0);

  const auto empty = label_regions(proposals, {}, 0.8);
  CHECK(empty.no_ground_truth);
  CHECK(empty.labels == std::vector<std::uint8_t>{0, 0, 0, 0});
  CHECK(kind_of([&] { label_regions(proposals, gt, 1.0); }) == ErrorKind::config);
}

TEST_CASE("weighted BCE values") {
  CHECK(weighted_bce_loss(0.5, 1, 1.0, 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(weighted_bce_loss(0.5, 0, 1.0, 0.25) == doctest::Approx(0.25 * std::log(2.0)));
  // Exact predictions are clipped, so the loss is tiny but positive.
  const double eps_loss = -std::log(1.0 - kProbabilityClip);
  CHECK(weighted_bce_loss(1.0, 1, 1.0, 1.0) == doctest::Approx(eps_loss).epsilon(1e-9));
  CHECK(weighted_bce_loss(0.0, 0, 1.0, 1.0) == doctest::Approx(eps_loss).epsilon(1e-9));
  CHECK(std::isfinite(weighted_bce_loss(0.0, 1, 1.0, 1.0)));
  CHECK(weighted_bce_loss(0.0, 1, 1.0, 1.0) == doctest::Approx(-std::log(kProbabilityClip)));
}

TEST_CASE("logit gradient matches central finite differences") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> logit(-12.0, 12.0), weight(0.05, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const double z = logit(rng), wp = weight(rng), wn = weight(rng);
    const int y = static_cast<int>(rng() % 2);
    const double h = 1e-5;
    const double numeric = (weighted_bce_loss(sigmoid(z + h), y, wp, wn) -
                            weighted_bce_loss(sigmoid(z - h), y, wp, wn)) /
                           (2.0 * h);
    const double analytic = weighted_bce_logit_gradient(z, y, wp, wn);
    const double scale = std::max({std::abs(numeric), std::abs(analytic), 1e-12});
    CHECK(std::abs(numeric - analytic) / scale < 1e-5);
  }
}

TEST_CASE("inverse-frequency weights make the constant predictor label-symmetric") {
  const auto w = LossWeights::inverse_frequency(10, 90);
  CHECK(w.positive == doctest::Approx(0.9));
  CHECK(w.negative == doctest::Approx(0.1));
  for (double q : {0.1, 0.3, 0.5, 0.77}) {
    // Total weighted loss of predicting q for everyone, before and after swapping labels.
    const double original = 10 * weighted_bce_loss(q, 1, w.positive, w.negative) +
                            90 * weighted_bce_loss(q, 0, w.positive, w.negative);
    const auto s = LossWeights::inverse_frequency(90, 10);
    const double swapped = 90 * weighted_bce_loss(q, 1, s.positive, s.negative) +
                           10 * weighted_bce_loss(q, 0, s.positive, s.negative);
    CHECK(original == doctest::Approx(swapped).epsilon(1e-12));
  }
  // The total positive and negative term weights are equal.
  CHECK(10 * w.positive == doctest::Approx(90 * w.negative));
}

TEST_CASE("cosine schedule") {
  CHECK(cosine_lr(0.001, 0, 100) == doctest::Approx(0.001));
  CHECK(cosine_lr(0.001, 50, 100) == doctest::Approx(0.0005));
  CHECK(cosine_lr(0.001, 100, 100) == doctest::Approx(0.0).epsilon(1e-12));
  double previous = 1.0;
  for (std::size_t t = 0; t < 100; ++t) {
    const double lr = cosine_lr(0.001, t, 100);
    CHECK(lr <= previous);
    previous = lr;
  }
}

TEST_CASE("train_head on separable data") {
  const auto data = separable_2d(400, 5);
  const TrainConfig config{0.5, 2000, 32, 11};
  const auto a = train_head(data, config);
  auto head = a.head;
  head.tau = select_tau(head, data);
  std::vector<double> scores;
  for (std::size_t i = 0; i < data.size(); ++i) {
    scores.push_back(objectness_score(head, data.features().row(i)));
  }
  CHECK(threshold_accuracy(scores, data.labels(), *head.tau) == 1.0);

  SUBCASE("same seed is bit-identical") {
    const auto b = train_head(data, config);
    CHECK(b.head == a.head);
    REQUIRE(b.log.size() == a.log.size());
    for (std::size_t i = 0; i < a.log.size(); ++i) CHECK(b.log[i].loss == a.log[i].loss);
  }
  SUBCASE("log follows the schedule") {
    REQUIRE(a.log.size() == 2000);
    CHECK(a.log[0].lr == 0.5);
    CHECK(a.log[1000].lr == doctest::Approx(0.25));
    CHECK(a.log.front().loss == doctest::Approx(std::log(2.0) / 2.0).epsilon(0.2));
    CHECK(a.log.back().loss < a.log.front().loss);
  }
}

TEST_CASE("a full-batch step matches a hand-written gradient step") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  const std::size_t n = 37, d = 5;
  std::vector<double> data(n * d);
  for (auto& v : data) v = normal(rng);
  std::vector<std::uint8_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = i % 4 == 0 ? 1 : 0;
  const ObjectnessDataset dataset(FeatureMatrix(n, d, data), labels);

  const auto result = train_head(dataset, {0.1, 3, n, 0});

  // Oracle: three full-batch steps at lr 0.1 * (1 + cos(pi t / 3)) / 2.
  const double n_pos = 10, n_neg = 27;
  const double wp = n_neg / n, wn = n_pos / n;
  oracle::Vec w(d, 0.0);
  double b = 0.0;
  for (int t = 0; t < 3; ++t) {
    oracle::Vec gw(d, 0.0);
    double gb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double z = b;
      for (std::size_t j = 0; j < d; ++j) z += w[j] * data[i * d + j];
      const double p = 1.0 / (1.0 + std::exp(-z));
      const double g = labels[i] ? wp * (p - 1.0) : wn * p;
      for (std::size_t j = 0; j < d; ++j) gw[j] += g * data[i * d + j];
      gb += g;
    }
    const double lr = 0.1 * 0.5 * (1.0 + std::cos(M_PI * t / 3.0));
    for (std::size_t j = 0; j < d; ++j) w[j] -= lr * gw[j] / n;
    b -= lr * gb / n;
  }
  for (std::size_t j = 0; j < d; ++j) CHECK(result.head.weights[j] == doctest::Approx(w[j]).epsilon(1e-12));
  CHECK(result.head.bias == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("training rejects single-class data and bad configs") {
  const ObjectnessDataset all_pos(FeatureMatrix(3, 1, {1, 2, 3}), {1, 1, 1});
  CHECK(all_pos.n_neg() == 0);
  CHECK(kind_of([&] { train_head(all_pos, {}); }) == ErrorKind::data);
  const auto data = separable_2d(20, 1);
  CHECK(kind_of([&] { train_head(data, {0.0, 10, 4, 0}); }) == ErrorKind::config);
  CHECK(kind_of([&] { train_head(data, {0.1, 0, 4, 0}); }) == ErrorKind::config);
  CHECK(kind_of([&] { ObjectnessDataset(FeatureMatrix(2, 1, {1, 2}), {1}); }) == ErrorKind::shape);
}

TEST_CASE("divergence is reported with its iteration") {
  // The first step overflows the weights to (+inf, -inf); the third row then
  // produces an inf - inf logit.
  const ObjectnessDataset data(
      FeatureMatrix(3, 2, {1e308, -1e308, -1e308, 1e308, 1e308, 1e308}), {1, 0, 0});
  try {
    train_head(data, {1e300, 5, 3, 0});
    FAIL("expected divergence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::divergence);
    CHECK(std::string(e.what()).find("iteration") != std::string::npos);
  }
}

TEST_CASE("select_tau") {
  const std::vector<std::uint8_t> labels = {1, 1, 0, 0};
  CHECK(select_tau(std::vector<double>{0.95, 0.95, 0.05, 0.05}, labels) == 0.1);
  CHECK(select_tau(std::vector<double>{0.35, 0.35, 0.25, 0.25}, labels) == doctest::Approx(0.3));
  CHECK(threshold_accuracy(std::vector<double>{0.35, 0.35, 0.25, 0.25}, labels, 0.2) == 0.5);
  // Single-class scoring still counts both classes.
  CHECK(threshold_accuracy(std::vector<double>{0.9, 0.9, 0.9, 0.9}, labels, 0.5) == 0.5);
}

TEST_CASE("objectness_score") {
  const ObjectnessHead zero{{0.0, 0.0, 0.0}, 0.0, std::nullopt};
  CHECK(objectness_score(zero, std::vector<double>{3, -1, 7}) == 0.5);
  CHECK(kind_of([&] { objectness_score(zero, std::vector<double>{1, 2}); }) == ErrorKind::shape);

  const ObjectnessHead head{{2.0, -1.0}, 0.5, std::nullopt};
  double previous = 0.0;
  for (double x = -400.0; x <= 400.0; x += 0.5) {
    const double s = objectness_score(head, std::vector<double>{x, 0.0});
    CHECK(std::isfinite(s));
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
    CHECK(s >= previous);
    previous = s;
  }
  CHECK(objectness_score(head, std::vector<double>{0.1, 0.0}) >
        objectness_score(head, std::vector<double>{0.0, 0.0}));
}

TEST_CASE("head JSON and training log") {
  const ObjectnessHead head{{0.25, -1.5}, 0.125, 0.3};
  const auto j = to_json(head);
  CHECK(j.dump() == R"({"dim":2,"weights":[0.25,-1.5],"bias":0.125,"tau":0.3})");
  CHECK(head_from_json(j) == head);
  auto bad = j;
  bad["dim"] = 3;
  CHECK(kind_of([&] { head_from_json(bad); }) == ErrorKind::data);
  const std::vector<TrainLogEntry> log = {{0, 0.001, 0.5}, {1, 0.0005, 0.25}};
  CHECK(training_log_csv(log) == "iteration,lr,loss\n0,0.001,0.5\n1,0.00050000000000000001,0.25\n");
}
