#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lnlasso/graph.hpp"

namespace lnlasso {

// Per-node features, partial {-1,+1} labels and training-set membership.
// Immutable after construction.
class NodeDataset {
 public:
  // features: N blocks of dimension d. labels: optional per node, required on
  // every training node. training: node ids of the labeled training set M.
  NodeDataset(BlockVector features, std::vector<std::optional<int>> labels,
              std::vector<std::size_t> training, bool normalized = false);

  std::size_t num_nodes() const { return features_.blocks; }
  std::size_t dim() const { return features_.dim; }
  const BlockVector& features() const { return features_; }
  const double* feature(std::size_t i) const { return features_.block(i); }
  const std::vector<std::optional<int>>& labels() const { return labels_; }
  int label(std::size_t i) const { return *labels_[i]; }
  const std::vector<std::size_t>& training_set() const { return training_; }
  bool in_training(std::size_t i) const { return is_training_[i]; }
  std::size_t training_size() const { return training_.size(); }
  bool normalized() const { return normalized_; }
  double feature_norm_sq(std::size_t i) const { return feature_norm_sq_[i]; }

 private:
  BlockVector features_;
  std::vector<std::optional<int>> labels_;
  std::vector<std::size_t> training_;
  std::vector<char> is_training_;
  std::vector<double> feature_norm_sq_;
  bool normalized_;
};

// 1/(1+exp(-z)), branch-wise stable for large |z|.
double sigmoid(double z);

// log(1+exp(-z)) without overflow for very negative z.
double logistic_loss(double z);

// (1/M) sum over training nodes of loss(y^(i) <w^(i), x^(i)>).
double empirical_risk(const NodeDataset& dataset, const PrimalSignal& w);

// Block gradient of empirical_risk; zero blocks at unlabeled nodes.
PrimalSignal empirical_risk_gradient(const NodeDataset& dataset,
                                     const PrimalSignal& w);

// Regularized objective: empirical risk plus lambda times graph TV.
struct Objective {
  const EmpiricalGraph& graph;
  const NodeDataset& dataset;
  double lambda;
};

double objective_value(const Objective& obj, const PrimalSignal& w);

// Classifier: +1 where <w^(i), x^(i)> > 0, else -1 (ties to -1).
std::vector<int> predict(const NodeDataset& dataset, const PrimalSignal& w);

// Fraction of non-training nodes with predicted == true label.
double accuracy_unlabeled(const NodeDataset& dataset,
                          const std::vector<int>& predicted,
                          const std::vector<int>& true_labels);

// Expected accuracy of the true-model classifier: mean of max(p, 1-p) over
// the per-node label probabilities.
double bayes_accuracy(const std::vector<double>& probabilities);

// Convenience overload: probabilities from the logistic model with the given
// true weights and the dataset's features.
double bayes_accuracy(const NodeDataset& dataset,
                      const PrimalSignal& true_weights);

}  // namespace lnlasso
