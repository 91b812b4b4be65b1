#pragma once

#include <cstdint>
#include <vector>

#include "lnlasso/graph.hpp"
#include "lnlasso/model.hpp"

namespace lnlasso {

enum class Topology { kChain, kGrid };

// Seeded generator spec for the clustered chain/grid benchmarks.
// Chain: num_nodes consecutive nodes split into `clusters` equal blocks.
// Grid: square lattice of side grid_side split into 4 quadrant clusters.
struct SyntheticSpec {
  Topology topology = Topology::kChain;
  std::size_t num_nodes = 400;   // chain only; grid uses grid_side^2
  std::size_t clusters = 8;      // chain only; grid is fixed at 4 quadrants
  std::size_t grid_side = 20;
  double intra_weight = 100.0;
  double inter_weight = 1.0;
  std::size_t feature_dim = 3;
  double labeling_rate = 0.5;
  std::uint64_t seed = 0;
  bool normalize_features = true;

  std::size_t total_nodes() const {
    return topology == Topology::kChain ? num_nodes : grid_side * grid_side;
  }
};

struct SyntheticInstance {
  EmpiricalGraph graph;
  NodeDataset dataset;
  PrimalSignal true_weights;
  std::vector<double> true_probabilities;
  std::vector<std::size_t> cluster_assignment;
  std::vector<int> true_labels;  // every node, including training ones
  std::uint64_t label_seed_used;  // differs from the derived seed only if an
                                  // empty training draw forced a redraw
};

// Fully deterministic in spec.seed. Sub-streams: cluster weights, features,
// labels, training mask; redrawing labels never perturbs weights or features.
SyntheticInstance generate(const SyntheticSpec& spec);

// Redraws labels and the training mask from the stored true probabilities;
// graph, features and true weights are reused unchanged.
SyntheticInstance resample_labels(const SyntheticInstance& instance,
                                  double labeling_rate, std::uint64_t seed);

}  // namespace lnlasso
