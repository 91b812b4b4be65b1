#include "lnlasso/solver.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lnlasso {

Preconditioners build_preconditioners(const EmpiricalGraph& graph,
                                      const NodeDataset& dataset,
                                      double tau_scale) {
  if (!(tau_scale > 0.0 && tau_scale < 1.0))
    throw std::invalid_argument("tau_scale must be in (0, 1)");
  if (dataset.training_size() == 0)
    throw std::invalid_argument("training set is empty");
  if (dataset.num_nodes() != graph.num_nodes())
    throw std::invalid_argument("dataset does not match graph");

  Preconditioners p;
  p.sigma.reserve(graph.num_edges());
  for (const Edge& e : graph.edges()) p.sigma.push_back(1.0 / (2.0 * e.weight));
  p.tau.resize(graph.num_nodes());
  for (std::size_t i = 0; i < graph.num_nodes(); ++i)
    p.tau[i] = tau_scale / graph.degree(i);
  p.beta.assign(graph.num_nodes(), 0.0);
  const double m = static_cast<double>(dataset.training_size());
  for (std::size_t i : dataset.training_set())
    p.beta[i] = p.tau[i] * dataset.feature_norm_sq(i) / m;
  return p;
}

void dual_prox_in_place(DualSignal& u, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  for (std::size_t e = 0; e < u.blocks; ++e) {
    double nrm = u.block_norm(e);
    if (nrm > lambda) {
      double scale = lambda / nrm;
      double* ue = u.block(e);
      for (std::size_t k = 0; k < u.dim; ++k) ue[k] *= scale;
    }
  }
}

DualSignal dual_prox(const DualSignal& u_bar, double lambda) {
  DualSignal u = u_bar;
  dual_prox_in_place(u, lambda);
  return u;
}

std::size_t primal_prox_inexact(double* w_bar_block, std::size_t node,
                                const Preconditioners& precond,
                                const NodeDataset& dataset,
                                std::size_t outer_iter) {
  const double beta = precond.beta[node];
  if (!(beta < 1.0))
    throw std::invalid_argument("contraction factor beta >= 1 at node " +
                                std::to_string(node));
  const std::size_t d = dataset.dim();
  const double* x = dataset.feature(node);
  const double y = dataset.label(node);
  const double step = precond.tau[node] /
                      static_cast<double>(dataset.training_size());

  std::size_t count = 1;
  if (beta > 0.0) {
    double k = static_cast<double>(outer_iter < 2 ? 2 : outer_iter);
    double n = std::ceil(2.0 * std::log(k) / std::log(1.0 / beta));
    if (n > 1.0) count = static_cast<std::size_t>(n);
  }

  // Phi contracts toward the fixed point of the resolvent equation; v starts
  // at w_bar and w_bar stays the anchor of the map throughout.
  std::vector<double> v(w_bar_block, w_bar_block + d);
  for (std::size_t it = 0; it < count; ++it) {
    double z = 0.0;
    for (std::size_t k = 0; k < d; ++k) z += v[k] * y * x[k];
    double s = sigmoid(-z);
    for (std::size_t k = 0; k < d; ++k)
      v[k] = w_bar_block[k] + step * y * x[k] * s;
  }
  for (std::size_t k = 0; k < d; ++k) w_bar_block[k] = v[k];
  return count;
}

void primal_dual_iterate(PrimalSignal& w, DualSignal& u,
                         const EmpiricalGraph& graph,
                         const NodeDataset& dataset,
                         const Preconditioners& precond,
                         const SolverConfig& config, std::size_t k,
                         std::size_t* inner_total) {
  const std::size_t d = w.dim;
  const PrimalSignal w_prev = w;

  // w_bar = w_k - T D^T u_k; unlabeled blocks are already final (the
  // resolvent of the risk is the identity off the training set).
  PrimalSignal dtu = apply_incidence_adjoint(graph, u);
  for (std::size_t i = 0; i < w.blocks; ++i) {
    double* wi = w.block(i);
    const double* gi = dtu.block(i);
    for (std::size_t c = 0; c < d; ++c) wi[c] -= precond.tau[i] * gi[c];
  }

  std::size_t inner = 0;
  for (std::size_t i : dataset.training_set())
    inner += primal_prox_inexact(w.block(i), i, precond, dataset, k);
  if (inner_total) *inner_total = inner;

  // u_bar = u_k + Sigma D (2 w_{k+1} - w_k), then project onto the
  // lambda-ball block-wise.
  PrimalSignal relaxed(w.blocks, d);
  for (std::size_t idx = 0; idx < relaxed.data.size(); ++idx)
    relaxed.data[idx] = 2.0 * w.data[idx] - w_prev.data[idx];
  DualSignal dw = apply_incidence(graph, relaxed);
  for (std::size_t e = 0; e < u.blocks; ++e) {
    double* ue = u.block(e);
    const double* de = dw.block(e);
    for (std::size_t c = 0; c < d; ++c) ue[c] += precond.sigma[e] * de[c];
  }
  dual_prox_in_place(u, config.lambda);
}

SolverRun solve_from(const EmpiricalGraph& graph, const NodeDataset& dataset,
                     const SolverConfig& config, PrimalSignal w0,
                     DualSignal u0, const IterationCallback& on_iteration) {
  if (!(config.lambda > 0.0))
    throw std::invalid_argument("lambda must be positive");
  if (config.max_iters == 0)
    throw std::invalid_argument("max_iters must be >= 1");
  if (w0.blocks != graph.num_nodes() || w0.dim != dataset.dim() ||
      u0.blocks != graph.num_edges() || u0.dim != dataset.dim())
    throw std::invalid_argument("initial iterates do not match the problem");

  const Preconditioners precond =
      build_preconditioners(graph, dataset, config.tau_scale);
  Objective obj{graph, dataset, config.lambda};

  SolverRun run;
  run.final_primal = std::move(w0);
  run.final_dual = std::move(u0);

  for (std::size_t k = 0; k < config.max_iters; ++k) {
    const PrimalSignal w_prev = run.final_primal;
    std::size_t inner = 0;
    primal_dual_iterate(run.final_primal, run.final_dual, graph, dataset,
                        precond, config, k, &inner);
    ++run.iterations_used;

    if (!run.final_primal.all_finite() || !run.final_dual.all_finite())
      throw std::runtime_error("non-finite iterate at iteration " +
                               std::to_string(k));

    double diff_sq = 0.0, prev_sq = 0.0;
    for (std::size_t idx = 0; idx < w_prev.data.size(); ++idx) {
      double dd = run.final_primal.data[idx] - w_prev.data[idx];
      diff_sq += dd * dd;
      prev_sq += w_prev.data[idx] * w_prev.data[idx];
    }
    double rel_change =
        std::sqrt(diff_sq) / std::max(1.0, std::sqrt(prev_sq));

    if (config.record_diagnostics) {
      double margin = -config.lambda;
      for (std::size_t e = 0; e < run.final_dual.blocks; ++e)
        margin = std::max(margin,
                          run.final_dual.block_norm(e) - config.lambda);
      run.diagnostics.push_back({k, objective_value(obj, run.final_primal),
                                 rel_change, margin, inner});
    }
    if (on_iteration) on_iteration(k, run.final_primal);

    if (rel_change < config.rel_tol) break;
  }
  return run;
}

SolverRun solve(const EmpiricalGraph& graph, const NodeDataset& dataset,
                const SolverConfig& config,
                const IterationCallback& on_iteration) {
  return solve_from(graph, dataset, config,
                    PrimalSignal(graph.num_nodes(), dataset.dim()),
                    DualSignal(graph.num_edges(), dataset.dim()),
                    on_iteration);
}

}  // namespace lnlasso
