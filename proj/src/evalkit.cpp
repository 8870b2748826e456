#include "hccal/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "hccal/error.hpp"

namespace hccal::eval {

double iou(const Box& a, const Box& b) {
  validate_box(a);
  validate_box(b);
  const double iw = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const double ih = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  return inter / (a.area() + b.area() - inter);
}

GroundTruthIndex::GroundTruthIndex(std::span<const RegionRecord> ground_truth) {
  for (const auto& g : ground_truth) by_image_[g.image_id].push_back(g.box);
}

double GroundTruthIndex::max_iou(const RegionRecord& proposal) const {
  auto it = by_image_.find(proposal.image_id);
  if (it == by_image_.end()) return 0.0;
  double best = 0.0;
  for (const auto& box : it->second) best = std::max(best, iou(proposal.box, box));
  return best;
}

bool RegionScores::consistent() const {
  return hcc::direct_consistency_label(p, z_sub, z_sup).has_value();
}

ConsistencyReport consistency_study(std::span<const RegionRecord> proposals,
                                    std::span<const RegionRecord> ground_truth,
                                    std::span<const RegionScores> scores, double fg_iou,
                                    double bg_iou) {
  if (proposals.size() != scores.size()) {
    throw Error(ErrorKind::shape, "consistency study needs one score set per proposal");
  }
  if (!(fg_iou > bg_iou)) throw Error(ErrorKind::config, "fg IoU must exceed bg IoU");

  const GroundTruthIndex index(ground_truth);
  ConsistencyReport report;
  for (std::size_t i = 0; i < proposals.size(); ++i) {
    const double overlap = index.max_iou(proposals[i]);
    if (overlap > fg_iou) {
      ++report.fg_count;
      report.fg_consistent += scores[i].consistent() ? 1 : 0;
    } else if (overlap < bg_iou) {
      ++report.bg_count;
      report.bg_consistent += scores[i].consistent() ? 1 : 0;
    } else {
      ++report.excluded;
    }
  }
  if (report.fg_count > 0) {
    report.fg_consistent_fraction =
        static_cast<double>(report.fg_consistent) / static_cast<double>(report.fg_count);
  }
  if (report.bg_count > 0) {
    report.bg_consistent_fraction =
        static_cast<double>(report.bg_consistent) / static_cast<double>(report.bg_count);
  }
  return report;
}

namespace {

void check_pair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::shape, "correlation inputs differ in length");
  if (x.size() < 2) throw Error(ErrorKind::shape, "correlation needs at least two points");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw Error(ErrorKind::data, "correlation input is not finite");
    }
  }
}

// Number of tied pairs over runs of equal values in an already sorted sequence.
template <typename Eq>
std::int64_t tied_pairs(std::size_t n, Eq&& equal) {
  std::int64_t total = 0;
  std::size_t run = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i < n && equal(i - 1, i)) {
      ++run;
    } else {
      total += static_cast<std::int64_t>(run) * static_cast<std::int64_t>(run - 1) / 2;
      run = 1;
    }
  }
  return total;
}

// Stable merge sort on `v`, returning the number of inversions removed.
std::int64_t merge_count(std::vector<double>& v, std::vector<double>& scratch, std::size_t lo,
                         std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t swaps = merge_count(v, scratch, lo, mid) + merge_count(v, scratch, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += static_cast<std::int64_t>(mid - i);
      scratch[k++] = v[j++];
    } else {
      scratch[k++] = v[i++];
    }
  }
  while (i < mid) scratch[k++] = v[i++];
  while (j < hi) scratch[k++] = v[j++];
  std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo),
            scratch.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

}  // namespace

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    // positions i..j (0-based) share the mean of ranks i+1..j+1
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(ErrorKind::undefined_correlation, "Spearman correlation of a constant ranking");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double kendall(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
  });

  const std::int64_t pairs = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;
  const std::int64_t x_ties =
      tied_pairs(n, [&](std::size_t i, std::size_t j) { return x[order[i]] == x[order[j]]; });
  const std::int64_t joint_ties = tied_pairs(n, [&](std::size_t i, std::size_t j) {
    return x[order[i]] == x[order[j]] && y[order[i]] == y[order[j]];
  });

  std::vector<double> ys(n), scratch(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = y[order[i]];
  const std::int64_t discordant = merge_count(ys, scratch, 0, n);
  const std::int64_t y_ties = tied_pairs(n, [&](std::size_t i, std::size_t j) { return ys[i] == ys[j]; });

  const std::int64_t concordant_minus_discordant =
      pairs - x_ties - y_ties + joint_ties - 2 * discordant;
  const std::int64_t dx = pairs - x_ties;
  const std::int64_t dy = pairs - y_ties;
  if (dx == 0 || dy == 0) {
    throw Error(ErrorKind::undefined_correlation, "Kendall tau-b of a fully tied input");
  }
  return static_cast<double>(concordant_minus_discordant) /
         std::sqrt(static_cast<double>(dx) * static_cast<double>(dy));
}

CorrelationReport correlate(std::span<const double> x, std::span<const double> y) {
  return {spearman(x, y), kendall(x, y), x.size()};
}

QualityReport pseudo_label_quality(std::span<const PseudoLabel> labels,
                                   std::span<const std::string> class_names,
                                   std::span<const Annotation> ground_truth, double match_iou) {
  if (!(match_iou > 0.0 && match_iou < 1.0)) {
    throw Error(ErrorKind::config, "match IoU must lie in (0, 1)");
  }
  QualityReport report;
  report.labels = labels.size();
  // Only novel-class annotations count; background and other classes are ignored.
  for (const auto& gt : ground_truth) {
    if (gt.category &&
        std::find(class_names.begin(), class_names.end(), *gt.category) != class_names.end()) {
      ++report.ground_truth;
    }
  }

  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return labels[a].confidence > labels[b].confidence;
  });

  std::vector<bool> matched(ground_truth.size(), false);
  for (std::size_t li : order) {
    const auto& label = labels[li];
    if (label.class_index >= class_names.size()) {
      throw Error(ErrorKind::shape, "pseudo label class index out of range");
    }
    const auto& name = class_names[label.class_index];
    double best = -1.0;
    std::size_t best_gt = ground_truth.size();
    for (std::size_t g = 0; g < ground_truth.size(); ++g) {
      const auto& gt = ground_truth[g];
      if (matched[g] || gt.region.image_id != label.region.image_id || gt.category != name) continue;
      const double overlap = iou(label.region.box, gt.region.box);
      if (overlap > best) {
        best = overlap;
        best_gt = g;
      }
    }
    if (best_gt < ground_truth.size() && best >= match_iou) {
      matched[best_gt] = true;
      ++report.true_positives;
    }
  }
  if (report.labels > 0) {
    report.precision = static_cast<double>(report.true_positives) / static_cast<double>(report.labels);
  }
  if (report.ground_truth > 0) {
    report.recall =
        static_cast<double>(report.true_positives) / static_cast<double>(report.ground_truth);
  }
  return report;
}

}  // namespace hccal::eval
