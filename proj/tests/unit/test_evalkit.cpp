#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "hccal/evalkit.hpp"
#include "support/errors.hpp"
#include "support/oracle.hpp"

using namespace hccal;
using namespace hccal::eval;
using testing_support::kind_of;

namespace {

RegionRecord rec(const std::string& image, const std::string& id, Box b) {
  return RegionRecord{image, id, b, std::nullopt};
}

RegionScores scores_of(const oracle::Vec& p, const oracle::Vec& sub, const oracle::Vec& sup) {
  return RegionScores{ProbVector(p), hcc::ClasswiseScores(sub, Level::sub),
                      hcc::ClasswiseScores(sup, Level::sup)};
}

// Random vector with plenty of ties.
oracle::Vec tied(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> level(0, 4);
  oracle::Vec v(n);
  for (auto& x : v) x = level(rng) * 0.5;
  return v;
}

}  // namespace

TEST_CASE("iou") {
  CHECK(iou({0, 0, 2, 2}, {0, 0, 2, 2}) == 1.0);
  CHECK(iou({0, 0, 1, 1}, {2, 2, 3, 3}) == 0.0);
  CHECK(iou({0, 0, 1, 1}, {1, 0, 2, 1}) == 0.0);  // touching edges
  CHECK(iou({0, 0, 2, 2}, {1, 1, 3, 3}) == doctest::Approx(1.0 / 7.0).epsilon(1e-15));
  CHECK(kind_of([] { iou({0, 0, -1, 1}, {0, 0, 1, 1}); }) == ErrorKind::geometry);

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int i = 0; i < 5000; ++i) {
    const double ax = u(rng), ay = u(rng), bx = u(rng), by = u(rng);
    const Box a{ax, ay, ax + 0.1 + u(rng), ay + 0.1 + u(rng)};
    const Box b{bx, by, bx + 0.1 + u(rng), by + 0.1 + u(rng)};
    const double v = iou(a, b);
    CHECK(v == iou(b, a));
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
    CHECK(v == doctest::Approx(oracle::box_iou(a.x1, a.y1, a.x2, a.y2, b.x1, b.y1, b.x2, b.y2)));
  }
}

TEST_CASE("GroundTruthIndex restricts matches to the same image") {
  const std::vector<RegionRecord> gt = {rec("a", "g0", {0, 0, 2, 2}), rec("a", "g1", {10, 10, 12, 12}),
                                        rec("b", "g2", {1, 1, 3, 3})};
  const GroundTruthIndex index(gt);
  CHECK(index.max_iou(rec("a", "p", {0, 0, 2, 2})) == 1.0);
  CHECK(index.max_iou(rec("b", "p", {0, 0, 2, 2})) == doctest::Approx(1.0 / 7.0));
  CHECK(index.max_iou(rec("c", "p", {0, 0, 2, 2})) == 0.0);
}

TEST_CASE("average_ranks") {
  const std::vector<double> v = {3.0, 1.0, 3.0, 2.0, 3.0};
  CHECK(average_ranks(v) == std::vector<double>{4.0, 1.0, 4.0, 2.0, 4.0});
}

TEST_CASE("spearman and kendall examples") {
  const std::vector<double> x = {1, 2, 3}, y = {1, 3, 2}, rev = {3, 2, 1};
  CHECK(spearman(x, y) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(kendall(x, y) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(spearman(x, x) == 1.0);
  CHECK(kendall(x, x) == 1.0);
  CHECK(spearman(x, rev) == -1.0);
  CHECK(kendall(x, rev) == -1.0);

  const auto report = correlate(x, y);
  CHECK(report.n == 3);
  CHECK(report.spearman_rho == doctest::Approx(0.5));

  const std::vector<double> flat = {2, 2, 2};
  CHECK(kind_of([&] { spearman(x, flat); }) == ErrorKind::undefined_correlation);
  CHECK(kind_of([&] { kendall(flat, x); }) == ErrorKind::undefined_correlation);
  CHECK(kind_of([&] { spearman(std::vector<double>{1}, std::vector<double>{1}); }) == ErrorKind::shape);
  CHECK(kind_of([&] { kendall(x, std::vector<double>{1, 2}); }) == ErrorKind::shape);
}

TEST_CASE("correlations match brute-force oracles on every permutation of up to 6 items") {
  for (std::size_t n = 2; n <= 6; ++n) {
    oracle::Vec x(n);
    std::iota(x.begin(), x.end(), 1.0);
    oracle::Vec y = x;
    do {
      CHECK(spearman(x, y) == doctest::Approx(oracle::brute_spearman(x, y)).epsilon(1e-12));
      CHECK(kendall(x, y) == doctest::Approx(oracle::brute_kendall(x, y)).epsilon(1e-12));
      // Classic no-ties closed form.
      double d2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) d2 += (x[i] - y[i]) * (x[i] - y[i]);
      const double nn = static_cast<double>(n);
      CHECK(spearman(x, y) == doctest::Approx(1.0 - 6.0 * d2 / (nn * (nn * nn - 1.0))));
    } while (std::next_permutation(y.begin(), y.end()));
  }
}

TEST_CASE("correlations match brute-force oracles on tied random vectors") {
  std::mt19937_64 rng(2024);
  int checked = 0;
  while (checked < 1000) {
    const std::size_t n = 2 + rng() % 60;
    const auto x = tied(n, rng), y = tied(n, rng);
    if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; }) ||
        std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; })) {
      continue;
    }
    ++checked;
    const double k = kendall(x, y);
    CHECK(k == doctest::Approx(oracle::brute_kendall(x, y)).epsilon(1e-12));
    CHECK(spearman(x, y) == doctest::Approx(oracle::brute_spearman(x, y)).epsilon(1e-12));
    CHECK(k == doctest::Approx(kendall(y, x)).epsilon(1e-14));

    // Strictly monotone transform and order reversal.
    oracle::Vec tx(n), neg(n);
    for (std::size_t i = 0; i < n; ++i) {
      tx[i] = std::exp(3.0 * x[i]) - 7.0;
      neg[i] = -y[i];
    }
    CHECK(kendall(tx, y) == doctest::Approx(k).epsilon(1e-12));
    CHECK(spearman(tx, y) == doctest::Approx(spearman(x, y)).epsilon(1e-12));
    CHECK(kendall(x, neg) == doctest::Approx(-k).epsilon(1e-12));
    CHECK(spearman(x, neg) == doctest::Approx(-spearman(x, y)).epsilon(1e-12));
  }
}

TEST_CASE("kendall handles large inputs") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  const std::size_t n = 200000;
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = normal(rng);
    y[i] = x[i];
  }
  CHECK(kendall(x, y) == doctest::Approx(1.0).epsilon(1e-12));
  std::reverse(y.begin(), y.end());
  const double k = kendall(x, y);
  CHECK(std::abs(k) < 0.01);
}

TEST_CASE("consistency_study") {
  const std::vector<RegionRecord> gt = {rec("img", "g", {0, 0, 10, 10})};
  SUBCASE("band exclusion") {
    // IoU 0.64 and 0.81 relative to the GT box; both lie between 0.5 and 0.9.
    const std::vector<RegionRecord> proposals = {rec("img", "p0", {0, 0, 8, 8}),
                                                 rec("img", "p1", {0, 0, 9, 9})};
    const std::vector<RegionScores> s = {scores_of({0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}),
                                         scores_of({0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5})};
    const auto r = consistency_study(proposals, gt, s, 0.9, 0.5);
    CHECK(r.fg_count == 0);
    CHECK(r.bg_count == 0);
    CHECK(r.excluded == 2);
    CHECK_FALSE(r.fg_consistent_fraction);
    CHECK_FALSE(r.bg_consistent_fraction);
  }
  SUBCASE("aligned foreground and random background") {
    const std::size_t classes = 4, n = 20000;
    std::mt19937_64 rng(99);
    std::vector<RegionRecord> proposals;
    std::vector<RegionScores> s;
    for (std::size_t i = 0; i < n; ++i) {
      const bool fg = i % 2 == 0;
      proposals.push_back(fg ? rec("img", std::to_string(i), {0, 0, 10, 10})
                             : rec("img", std::to_string(i), {20, 20, 30, 30}));
      if (fg) {
        const std::size_t c = rng() % classes;
        oracle::Vec one(classes, 0.02), sub(classes, 0.1), sup(classes, 0.1);
        one[c] = 1.0 - 0.02 * (classes - 1);
        sub[c] = 0.9;
        sup[c] = 0.9;
        s.push_back(scores_of(one, sub, sup));
      } else {
        s.push_back(scores_of(oracle::dirichlet(classes, rng), oracle::dirichlet(classes, rng),
                              oracle::dirichlet(classes, rng)));
      }
    }
    const auto r = consistency_study(proposals, gt, s, 0.8, 0.5);
    CHECK(r.fg_count == n / 2);
    CHECK(r.bg_count == n / 2);
    CHECK(*r.fg_consistent_fraction == 1.0);
    const double expected = 1.0 / (classes * classes);
    const double sigma = std::sqrt(expected * (1 - expected) / (n / 2));
    CHECK(std::abs(*r.bg_consistent_fraction - expected) < 4 * sigma);
  }
  CHECK(kind_of([&] { consistency_study(gt, gt, {}, 0.8, 0.5); }) == ErrorKind::shape);
}

TEST_CASE("pseudo_label_quality") {
  const std::vector<std::string> names = {"cat", "dog"};
  const std::vector<Annotation> gt = {{rec("img", "g0", {0, 0, 10, 10}), "cat"},
                                      {rec("img", "g1", {20, 20, 30, 30}), std::nullopt}};
  const PseudoLabel correct{rec("img", "p0", {0, 0, 10, 10}), 0, 0.9, 0.8};
  const PseudoLabel wrong_class{rec("img", "p1", {0, 0, 10, 10}), 1, 0.95, 0.8};
  const PseudoLabel background{rec("img", "p2", {20, 20, 30, 30}), 0, 0.99, 0.8};

  SUBCASE("identical labels") {
    const std::vector<PseudoLabel> labels = {correct};
    const auto q = pseudo_label_quality(labels, names, gt, 0.5);
    CHECK(q.ground_truth == 1);
    CHECK(*q.precision == 1.0);
    CHECK(*q.recall == 1.0);
  }
  SUBCASE("no labels") {
    const auto q = pseudo_label_quality({}, names, gt, 0.5);
    CHECK_FALSE(q.precision);
    CHECK(*q.recall == 0.0);
  }
  SUBCASE("one of two correct") {
    const std::vector<PseudoLabel> labels = {background, correct};
    const auto q = pseudo_label_quality(labels, names, gt, 0.5);
    CHECK(*q.precision == 0.5);
    CHECK(*q.recall == 1.0);
  }
  SUBCASE("a ground-truth box matches once") {
    const std::vector<PseudoLabel> labels = {correct, correct, wrong_class};
    const auto q = pseudo_label_quality(labels, names, gt, 0.5);
    CHECK(q.true_positives == 1);
    CHECK(*q.precision == doctest::Approx(1.0 / 3.0));
  }
}
