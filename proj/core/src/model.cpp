#include "lnlasso/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lnlasso {

NodeDataset::NodeDataset(BlockVector features,
                         std::vector<std::optional<int>> labels,
                         std::vector<std::size_t> training, bool normalized)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      training_(std::move(training)),
      normalized_(normalized) {
  const std::size_t n = features_.blocks;
  if (features_.dim == 0)
    throw std::invalid_argument("feature dimension must be >= 1");
  if (labels_.size() != n)
    throw std::invalid_argument("labels size mismatch");
  is_training_.assign(n, 0);
  for (std::size_t i : training_) {
    if (i >= n) throw std::invalid_argument("training node id out of range");
    if (is_training_[i])
      throw std::invalid_argument("duplicate training node " +
                                  std::to_string(i));
    if (!labels_[i].has_value())
      throw std::invalid_argument("training node " + std::to_string(i) +
                                  " has no label");
    is_training_[i] = 1;
  }
  for (const auto& y : labels_) {
    if (y.has_value() && *y != 1 && *y != -1)
      throw std::invalid_argument("labels must be -1 or +1");
  }
  feature_norm_sq_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    const double* x = features_.block(i);
    for (std::size_t k = 0; k < features_.dim; ++k) s += x[k] * x[k];
    feature_norm_sq_[i] = s;
    if (normalized_ && std::abs(std::sqrt(s) - 1.0) > 1e-9)
      throw std::invalid_argument("feature " + std::to_string(i) +
                                  " is not unit norm");
  }
}

double sigmoid(double z) {
  // exp overflows near 710; branch on the sign so the argument is always <= 0.
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

double logistic_loss(double z) {
  if (z > 40.0) return std::exp(-z);
  if (z < -40.0) return -z + std::log1p(std::exp(z));
  return std::log1p(std::exp(-z));
}

namespace {

void check_dims(const NodeDataset& dataset, const PrimalSignal& w) {
  if (w.blocks != dataset.num_nodes() || w.dim != dataset.dim())
    throw std::invalid_argument("signal does not match dataset dimensions");
  if (dataset.training_size() == 0)
    throw std::invalid_argument("training set is empty");
}

double margin(const NodeDataset& dataset, const PrimalSignal& w,
              std::size_t i) {
  // y^(i) <w^(i), x^(i)>
  const double* wi = w.block(i);
  const double* xi = dataset.feature(i);
  double z = 0.0;
  for (std::size_t k = 0; k < w.dim; ++k) z += wi[k] * xi[k];
  return dataset.label(i) * z;
}

}  // namespace

double empirical_risk(const NodeDataset& dataset, const PrimalSignal& w) {
  check_dims(dataset, w);
  double sum = 0.0;
  for (std::size_t i : dataset.training_set())
    sum += logistic_loss(margin(dataset, w, i));
  return sum / static_cast<double>(dataset.training_size());
}

PrimalSignal empirical_risk_gradient(const NodeDataset& dataset,
                                     const PrimalSignal& w) {
  check_dims(dataset, w);
  PrimalSignal g(w.blocks, w.dim);
  const double inv_m = 1.0 / static_cast<double>(dataset.training_size());
  for (std::size_t i : dataset.training_set()) {
    double z = margin(dataset, w, i);
    double s = sigmoid(-z);
    const double* xi = dataset.feature(i);
    double* gi = g.block(i);
    double y = dataset.label(i);
    for (std::size_t k = 0; k < w.dim; ++k)
      gi[k] = -inv_m * y * xi[k] * s;
  }
  return g;
}

double objective_value(const Objective& obj, const PrimalSignal& w) {
  return empirical_risk(obj.dataset, w) + obj.lambda * tv_norm(obj.graph, w);
}

std::vector<int> predict(const NodeDataset& dataset, const PrimalSignal& w) {
  if (w.blocks != dataset.num_nodes() || w.dim != dataset.dim())
    throw std::invalid_argument("signal does not match dataset dimensions");
  std::vector<int> yhat(w.blocks);
  for (std::size_t i = 0; i < w.blocks; ++i) {
    const double* wi = w.block(i);
    const double* xi = dataset.feature(i);
    double z = 0.0;
    for (std::size_t k = 0; k < w.dim; ++k) z += wi[k] * xi[k];
    yhat[i] = z > 0.0 ? 1 : -1;
  }
  return yhat;
}

double accuracy_unlabeled(const NodeDataset& dataset,
                          const std::vector<int>& predicted,
                          const std::vector<int>& true_labels) {
  const std::size_t n = dataset.num_nodes();
  if (predicted.size() != n || true_labels.size() != n)
    throw std::invalid_argument("label vector size mismatch");
  if (dataset.training_size() >= n)
    throw std::invalid_argument("no unlabeled nodes to score");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!dataset.in_training(i) && predicted[i] == true_labels[i]) ++correct;
  }
  return static_cast<double>(correct) /
         static_cast<double>(n - dataset.training_size());
}

double bayes_accuracy(const std::vector<double>& probabilities) {
  double sum = 0.0;
  for (double p : probabilities) sum += std::max(p, 1.0 - p);
  return sum / static_cast<double>(probabilities.size());
}

double bayes_accuracy(const NodeDataset& dataset,
                      const PrimalSignal& true_weights) {
  if (true_weights.blocks != dataset.num_nodes() ||
      true_weights.dim != dataset.dim())
    throw std::invalid_argument("signal does not match dataset dimensions");
  std::vector<double> p(dataset.num_nodes());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double* wi = true_weights.block(i);
    const double* xi = dataset.feature(i);
    double z = 0.0;
    for (std::size_t k = 0; k < true_weights.dim; ++k) z += wi[k] * xi[k];
    p[i] = sigmoid(z);
  }
  return bayes_accuracy(p);
}

}  // namespace lnlasso
