#include "lnlasso/synth.hpp"

#include <cmath>
#include <stdexcept>

#include "lnlasso/rng.hpp"

namespace lnlasso {

namespace {

// Sub-stream tags; labels and mask share a tag family so a resample with a
// fresh seed touches nothing else.
constexpr std::uint64_t kWeightsTag = 1;
constexpr std::uint64_t kFeaturesTag = 2;
constexpr std::uint64_t kLabelsTag = 3;
constexpr std::uint64_t kMaskTag = 4;

std::vector<std::size_t> cluster_of_nodes(const SyntheticSpec& spec) {
  const std::size_t n = spec.total_nodes();
  std::vector<std::size_t> cluster(n);
  if (spec.topology == Topology::kChain) {
    const std::size_t block = n / spec.clusters;
    for (std::size_t i = 0; i < n; ++i)
      cluster[i] = std::min(i / block, spec.clusters - 1);
  } else {
    const std::size_t s = spec.grid_side;
    const std::size_t half = s / 2;
    for (std::size_t r = 0; r < s; ++r)
      for (std::size_t c = 0; c < s; ++c)
        cluster[r * s + c] = (r >= half ? 2 : 0) + (c >= half ? 1 : 0);
  }
  return cluster;
}

std::vector<Edge> build_edges(const SyntheticSpec& spec,
                              const std::vector<std::size_t>& cluster) {
  std::vector<Edge> edges;
  auto weight = [&](std::size_t a, std::size_t b) {
    return cluster[a] == cluster[b] ? spec.intra_weight : spec.inter_weight;
  };
  if (spec.topology == Topology::kChain) {
    for (std::size_t i = 0; i + 1 < spec.total_nodes(); ++i)
      edges.push_back({i, i + 1, weight(i, i + 1)});
  } else {
    const std::size_t s = spec.grid_side;
    for (std::size_t r = 0; r < s; ++r) {
      for (std::size_t c = 0; c < s; ++c) {
        std::size_t id = r * s + c;
        if (c + 1 < s) edges.push_back({id, id + 1, weight(id, id + 1)});
        if (r + 1 < s) edges.push_back({id, id + s, weight(id, id + s)});
      }
    }
  }
  return edges;
}

struct LabelDraw {
  std::vector<std::optional<int>> labels;
  std::vector<int> true_labels;
  std::vector<std::size_t> training;
  std::uint64_t seed_used;
};

LabelDraw draw_labels(const std::vector<double>& probabilities,
                      double labeling_rate, std::uint64_t seed) {
  if (!(labeling_rate > 0.0 && labeling_rate <= 1.0))
    throw std::invalid_argument("labeling rate must be in (0, 1]");
  const std::size_t n = probabilities.size();
  LabelDraw out;
  out.seed_used = seed;
  Rng label_rng(derive_seed(seed, kLabelsTag));
  out.true_labels.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    out.true_labels[i] = label_rng.bernoulli(probabilities[i]) ? 1 : -1;

  // Bernoulli(labeling_rate) training mask; an empty draw (possible only for
  // tiny n) is retried with a derived sub-seed.
  std::uint64_t mask_seed = seed;
  for (;;) {
    Rng mask_rng(derive_seed(mask_seed, kMaskTag));
    out.training.clear();
    for (std::size_t i = 0; i < n; ++i)
      if (mask_rng.bernoulli(labeling_rate)) out.training.push_back(i);
    if (!out.training.empty()) break;
    mask_seed = derive_seed(mask_seed, kMaskTag);
    out.seed_used = mask_seed;
  }

  out.labels.assign(n, std::nullopt);
  for (std::size_t i = 0; i < n; ++i) out.labels[i] = out.true_labels[i];
  return out;
}

}  // namespace

SyntheticInstance generate(const SyntheticSpec& spec) {
  const std::size_t n = spec.total_nodes();
  const std::size_t d = spec.feature_dim;
  if (n < 2 || d == 0)
    throw std::invalid_argument("spec needs at least 2 nodes and d >= 1");
  if (spec.topology == Topology::kChain &&
      (spec.clusters == 0 || n % spec.clusters != 0))
    throw std::invalid_argument("cluster count must divide the chain length");
  if (spec.topology == Topology::kGrid && spec.grid_side % 2 != 0)
    throw std::invalid_argument("grid side must be even for quadrant clusters");
  if (!(spec.intra_weight > spec.inter_weight && spec.inter_weight > 0.0))
    throw std::invalid_argument("need intra_weight > inter_weight > 0");

  const std::vector<std::size_t> cluster = cluster_of_nodes(spec);
  EmpiricalGraph graph(n, build_edges(spec, cluster));

  const std::size_t num_clusters =
      spec.topology == Topology::kChain ? spec.clusters : 4;
  Rng weight_rng(derive_seed(spec.seed, kWeightsTag));
  std::vector<double> cluster_weights(num_clusters * d);
  for (double& v : cluster_weights) v = weight_rng.normal();

  PrimalSignal true_w(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < d; ++k)
      true_w.block(i)[k] = cluster_weights[cluster[i] * d + k];

  Rng feature_rng(derive_seed(spec.seed, kFeaturesTag));
  BlockVector features(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    double* x = features.block(i);
    double nrm_sq = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      x[k] = feature_rng.uniform01();
      nrm_sq += x[k] * x[k];
    }
    if (spec.normalize_features) {
      double nrm = std::sqrt(nrm_sq);
      if (nrm == 0.0) { x[0] = 1.0; continue; }
      for (std::size_t k = 0; k < d; ++k) x[k] /= nrm;
    }
  }

  std::vector<double> probabilities(n);
  for (std::size_t i = 0; i < n; ++i) {
    double z = 0.0;
    for (std::size_t k = 0; k < d; ++k)
      z += true_w.block(i)[k] * features.block(i)[k];
    probabilities[i] = sigmoid(z);
  }

  LabelDraw draw = draw_labels(probabilities, spec.labeling_rate, spec.seed);
  NodeDataset dataset(std::move(features), std::move(draw.labels),
                      std::move(draw.training), spec.normalize_features);
  return SyntheticInstance{std::move(graph),
                           std::move(dataset),
                           std::move(true_w),
                           std::move(probabilities),
                           cluster,
                           std::move(draw.true_labels),
                           draw.seed_used};
}

SyntheticInstance resample_labels(const SyntheticInstance& instance,
                                  double labeling_rate, std::uint64_t seed) {
  LabelDraw draw =
      draw_labels(instance.true_probabilities, labeling_rate, seed);
  NodeDataset dataset(instance.dataset.features(), std::move(draw.labels),
                      std::move(draw.training),
                      instance.dataset.normalized());
  return SyntheticInstance{instance.graph,
                           std::move(dataset),
                           instance.true_weights,
                           instance.true_probabilities,
                           instance.cluster_assignment,
                           std::move(draw.true_labels),
                           draw.seed_used};
}

}  // namespace lnlasso
