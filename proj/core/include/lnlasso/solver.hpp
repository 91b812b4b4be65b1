#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "lnlasso/graph.hpp"
#include "lnlasso/model.hpp"

namespace lnlasso {

// Diagonal primal/dual step sizes and the per-training-node contraction
// factors of the inexact primal resolvent.
struct Preconditioners {
  std::vector<double> sigma;  // per edge, 1/(2 A_e)
  std::vector<double> tau;    // per node, tau_scale / degree
  std::vector<double> beta;   // per node; tau_i ||x_i||^2 / M on training
                              // nodes, 0 elsewhere
};

Preconditioners build_preconditioners(const EmpiricalGraph& graph,
                                      const NodeDataset& dataset,
                                      double tau_scale = 0.9);

struct SolverConfig {
  double lambda = 1e-2;
  std::size_t max_iters = 1000;
  double rel_tol = 1e-6;
  double tau_scale = 0.9;
  bool record_diagnostics = false;
};

struct IterationRecord {
  std::size_t iter;
  double objective;
  double primal_rel_change;
  double dual_feas_margin;  // max_e ||u^(e)|| - lambda
  std::size_t inner_iters_total;
};

struct SolverRun {
  PrimalSignal final_primal;
  DualSignal final_dual;
  std::size_t iterations_used = 0;
  std::vector<IterationRecord> diagnostics;
};

// Block-wise projection onto the Euclidean ball of radius lambda.
DualSignal dual_prox(const DualSignal& u_bar, double lambda);
void dual_prox_in_place(DualSignal& u_bar, double lambda);

// Inexact resolvent of the empirical risk at one training node: iterates the
// contraction map
//   Phi(v) = w_bar + (tau_i / M) * xt_i * sigmoid(-<v, xt_i>)
// with xt_i = y_i x_i, repeated n_k = max(1, ceil(2 ln(max(k,2)) /
// ln(1/beta_i))) times, starting from w_bar. Writes the result over w_bar.
// Returns the number of inner iterations used.
std::size_t primal_prox_inexact(double* w_bar_block, std::size_t node,
                                const Preconditioners& precond,
                                const NodeDataset& dataset,
                                std::size_t outer_iter);

// One coupled primal-dual update (over-relaxed dual point 2 w_{k+1} - w_k).
// inner_total, if non-null, receives the summed inner iteration count.
void primal_dual_iterate(PrimalSignal& w, DualSignal& u,
                         const EmpiricalGraph& graph,
                         const NodeDataset& dataset,
                         const Preconditioners& precond,
                         const SolverConfig& config, std::size_t k,
                         std::size_t* inner_total = nullptr);

// Called after every outer iteration with (iteration index, current primal).
using IterationCallback =
    std::function<void(std::size_t, const PrimalSignal&)>;

// Runs the primal-dual method from zero initialization until max_iters or the
// relative primal change drops below rel_tol. Throws std::runtime_error
// naming the iteration if non-finite values appear.
SolverRun solve(const EmpiricalGraph& graph, const NodeDataset& dataset,
                const SolverConfig& config,
                const IterationCallback& on_iteration = nullptr);

// Warm-started variant for sweeps; w0/u0 must match the problem dimensions.
SolverRun solve_from(const EmpiricalGraph& graph, const NodeDataset& dataset,
                     const SolverConfig& config, PrimalSignal w0,
                     DualSignal u0,
                     const IterationCallback& on_iteration = nullptr);

}  // namespace lnlasso
