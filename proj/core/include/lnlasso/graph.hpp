#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace lnlasso {

// Stacked block vector: `blocks` blocks of `dim` reals each. Used both for
// node signals (one block per node) and edge signals (one block per edge).
struct BlockVector {
  std::size_t blocks = 0;
  std::size_t dim = 0;
  std::vector<double> data;  // size blocks * dim, block b at [b*dim, (b+1)*dim)

  BlockVector() = default;
  BlockVector(std::size_t blocks_, std::size_t dim_)
      : blocks(blocks_), dim(dim_), data(blocks_ * dim_, 0.0) {}

  double* block(std::size_t b) { return data.data() + b * dim; }
  const double* block(std::size_t b) const { return data.data() + b * dim; }

  double block_norm(std::size_t b) const;
  bool all_finite() const;
};

using PrimalSignal = BlockVector;  // N blocks, one per node
using DualSignal = BlockVector;    // E blocks, one per edge

struct Edge {
  std::size_t i;  // i < j (canonical orientation)
  std::size_t j;
  double weight;
};

// Weighted undirected graph with canonically oriented edges (i < j, sorted
// lexicographically) and cached weighted node degrees. Immutable after
// construction; isolated nodes are rejected.
class EmpiricalGraph {
 public:
  // Edges may arrive in any orientation/order; they are normalized to i < j
  // and sorted by (i, j). Throws std::invalid_argument on self-loops,
  // duplicates, non-positive weights, out-of-range ids or isolated nodes.
  EmpiricalGraph(std::size_t num_nodes, std::vector<Edge> edges);

  std::size_t num_nodes() const { return num_nodes_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  double degree(std::size_t i) const { return degrees_[i]; }
  const std::vector<double>& degrees() const { return degrees_; }

 private:
  std::size_t num_nodes_;
  std::vector<Edge> edges_;
  std::vector<double> degrees_;
};

// Block e of the result is A_ij (w^(i) - w^(j)) for edge e = {i, j}, i < j.
// Matrix-free, O(E d).
DualSignal apply_incidence(const EmpiricalGraph& graph, const PrimalSignal& w);

// Adjoint of apply_incidence: block i accumulates +A_ij u^(e) when i is the
// smaller endpoint of e and -A_ij u^(e) when it is the larger one.
PrimalSignal apply_incidence_adjoint(const EmpiricalGraph& graph,
                                     const DualSignal& u);

// Total variation: sum over edges of A_ij ||w^(j) - w^(i)||_2.
double tv_norm(const EmpiricalGraph& graph, const PrimalSignal& w);

// Power-iteration estimate of the squared spectral norm of S^{1/2} D T^{1/2},
// with S = diag{sigma_e I_d}, T = diag{tau_i I_d}. Deterministic given seed.
double estimate_precond_norm(const EmpiricalGraph& graph,
                             const std::vector<double>& sigma,
                             const std::vector<double>& tau,
                             std::size_t iters = 200,
                             std::uint64_t seed = 1);

}  // namespace lnlasso
