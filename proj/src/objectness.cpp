#include "hccal/objectness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "hccal/error.hpp"
#include "hccal/evalkit.hpp"

namespace hccal::objectness {

RegionLabels label_regions(std::span<const RegionRecord> proposals,
                           std::span<const RegionRecord> ground_truth, double pos_iou) {
  if (!(pos_iou > 0.0 && pos_iou < 1.0)) {
    throw Error(ErrorKind::config, "positive IoU threshold must lie in (0, 1)");
  }
  RegionLabels out;
  out.no_ground_truth = ground_truth.empty();
  out.labels.reserve(proposals.size());
  const eval::GroundTruthIndex index(ground_truth);
  for (const auto& p : proposals) out.labels.push_back(index.max_iou(p) > pos_iou ? 1 : 0);
  return out;
}

ObjectnessDataset::ObjectnessDataset(FeatureMatrix features, std::vector<std::uint8_t> labels)
    : features_(std::move(features)), labels_(std::move(labels)) {
  if (labels_.size() != features_.rows()) {
    throw Error(ErrorKind::shape, "objectness dataset needs one label per feature row");
  }
  for (auto l : labels_) {
    if (l > 1) throw Error(ErrorKind::data, "objectness labels must be 0 or 1");
    (l ? n_pos_ : n_neg_) += 1;
  }
}

void ObjectnessDataset::require_both_classes() const {
  if (n_pos_ == 0 || n_neg_ == 0) {
    std::ostringstream msg;
    msg << "objectness training needs both classes (positives " << n_pos_ << ", negatives "
        << n_neg_ << ")";
    throw Error(ErrorKind::data, msg.str());
  }
}

ObjectnessDataset build_dataset(std::span<const RegionRecord> proposals,
                                const FeatureMatrix& features,
                                std::span<const RegionRecord> ground_truth, double pos_iou) {
  if (proposals.empty()) throw Error(ErrorKind::data, "no proposals to build a dataset from");
  std::vector<double> rows;
  rows.reserve(proposals.size() * features.dim());
  for (const auto& p : proposals) {
    if (!p.feature_row) {
      throw Error(ErrorKind::data, "proposal " + p.region_id + " has no feature row");
    }
    const auto row = features.row(*p.feature_row);
    rows.insert(rows.end(), row.begin(), row.end());
  }
  auto labeled = label_regions(proposals, ground_truth, pos_iou);
  return ObjectnessDataset(FeatureMatrix(proposals.size(), features.dim(), std::move(rows)),
                           std::move(labeled.labels));
}

void TrainConfig::validate() const {
  if (!(max_lr > 0.0) || !std::isfinite(max_lr)) {
    throw Error(ErrorKind::config, "max learning rate must be positive");
  }
  if (iterations < 1) throw Error(ErrorKind::config, "iterations must be at least 1");
  if (batch_size < 1) throw Error(ErrorKind::config, "batch size must be at least 1");
}

LossWeights LossWeights::inverse_frequency(std::size_t n_pos, std::size_t n_neg) {
  const double n = static_cast<double>(n_pos + n_neg);
  return {static_cast<double>(n_neg) / n, static_cast<double>(n_pos) / n};
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double weighted_bce_loss(double pred, int label, double w_pos, double w_neg) {
  const double p = std::clamp(pred, kProbabilityClip, 1.0 - kProbabilityClip);
  return label ? -w_pos * std::log(p) : -w_neg * std::log(1.0 - p);
}

double weighted_bce_logit_gradient(double logit, int label, double w_pos, double w_neg) {
  const double p = sigmoid(logit);
  if (p < kProbabilityClip || p > 1.0 - kProbabilityClip) return 0.0;
  return label ? w_pos * (p - 1.0) : w_neg * p;
}

double cosine_lr(double max_lr, std::size_t t, std::size_t total) {
  return max_lr * 0.5 *
         (1.0 + std::cos(std::numbers::pi * static_cast<double>(t) / static_cast<double>(total)));
}

namespace {

double logit_of(const ObjectnessHead& head, std::span<const double> x) {
  double z = head.bias;
  for (std::size_t j = 0; j < x.size(); ++j) z += head.weights[j] * x[j];
  return z;
}

}  // namespace

TrainResult train_head(const ObjectnessDataset& data, const TrainConfig& config) {
  config.validate();
  data.require_both_classes();

  const auto weights = LossWeights::inverse_frequency(data.n_pos(), data.n_neg());
  const std::size_t dim = data.features().dim();
  const std::size_t n = data.size();

  TrainResult result;
  result.head.weights.assign(dim, 0.0);
  result.log.reserve(config.iterations);

  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::size_t cursor = 0;

  std::vector<double> grad_w(dim);
  for (std::size_t t = 0; t < config.iterations; ++t) {
    if (cursor == n) {
      std::shuffle(order.begin(), order.end(), rng);
      cursor = 0;
    }
    const std::size_t end = std::min(n, cursor + config.batch_size);
    const double batch = static_cast<double>(end - cursor);

    std::fill(grad_w.begin(), grad_w.end(), 0.0);
    double grad_b = 0.0;
    double loss = 0.0;
    for (; cursor < end; ++cursor) {
      const std::size_t i = order[cursor];
      const auto x = data.features().row(i);
      const int y = data.labels()[i];
      const double z = logit_of(result.head, x);
      loss += weighted_bce_loss(sigmoid(z), y, weights.positive, weights.negative);
      const double g = weighted_bce_logit_gradient(z, y, weights.positive, weights.negative);
      for (std::size_t j = 0; j < dim; ++j) grad_w[j] += g * x[j];
      grad_b += g;
    }
    loss /= batch;
    if (!std::isfinite(loss)) {
      throw Error(ErrorKind::divergence,
                  "objectness training diverged at iteration " + std::to_string(t));
    }

    const double lr = cosine_lr(config.max_lr, t, config.iterations);
    for (std::size_t j = 0; j < dim; ++j) result.head.weights[j] -= lr * grad_w[j] / batch;
    result.head.bias -= lr * grad_b / batch;
    result.log.push_back({t, lr, loss});
  }
  return result;
}

double objectness_score(const ObjectnessHead& head, std::span<const double> feature) {
  if (feature.size() != head.dim()) {
    std::ostringstream msg;
    msg << "objectness head expects dim " << head.dim() << ", got " << feature.size();
    throw Error(ErrorKind::shape, msg.str());
  }
  return sigmoid(logit_of(head, feature));
}

double threshold_accuracy(std::span<const double> scores, std::span<const std::uint8_t> labels,
                          double tau) {
  if (scores.size() != labels.size() || scores.empty()) {
    throw Error(ErrorKind::shape, "accuracy needs matching, non-empty scores and labels");
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    correct += ((scores[i] >= tau) == (labels[i] == 1)) ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(scores.size());
}

double select_tau(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  double best_tau = 0.1;
  double best_acc = -1.0;
  for (int k = 1; k <= 9; ++k) {
    const double tau = k / 10.0;
    const double acc = threshold_accuracy(scores, labels, tau);
    if (acc > best_acc) {
      best_acc = acc;
      best_tau = tau;
    }
  }
  return best_tau;
}

double select_tau(const ObjectnessHead& head, const ObjectnessDataset& data) {
  std::vector<double> scores(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    scores[i] = objectness_score(head, data.features().row(i));
  }
  return select_tau(scores, data.labels());
}

Json to_json(const ObjectnessHead& head) {
  Json j = {{"dim", head.dim()}, {"weights", head.weights}, {"bias", head.bias}};
  j["tau"] = head.tau ? Json(*head.tau) : Json(nullptr);
  return j;
}

ObjectnessHead head_from_json(const Json& j) {
  try {
    ObjectnessHead head;
    head.weights = j.at("weights").get<std::vector<double>>();
    head.bias = j.at("bias").get<double>();
    if (j.contains("tau") && !j.at("tau").is_null()) head.tau = j.at("tau").get<double>();
    if (j.at("dim").get<std::size_t>() != head.weights.size()) {
      throw Error(ErrorKind::data, "objectness head dim does not match its weights");
    }
    for (double w : head.weights) {
      if (!std::isfinite(w)) throw Error(ErrorKind::data, "objectness head weight not finite");
    }
    if (!std::isfinite(head.bias)) throw Error(ErrorKind::data, "objectness head bias not finite");
    return head;
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::data, std::string("malformed objectness head: ") + e.what());
  }
}

std::string training_log_csv(std::span<const TrainLogEntry> log) {
  std::ostringstream out;
  out.precision(17);
  out << "iteration,lr,loss\n";
  for (const auto& e : log) out << e.iteration << ',' << e.lr << ',' << e.loss << '\n';
  return out.str();
}

}  // namespace hccal::objectness
