#include "lnlasso/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "lnlasso/rng.hpp"

namespace lnlasso {

double BlockVector::block_norm(std::size_t b) const {
  double s = 0.0;
  const double* p = block(b);
  for (std::size_t k = 0; k < dim; ++k) s += p[k] * p[k];
  return std::sqrt(s);
}

bool BlockVector::all_finite() const {
  for (double v : data) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

EmpiricalGraph::EmpiricalGraph(std::size_t num_nodes, std::vector<Edge> edges)
    : num_nodes_(num_nodes), edges_(std::move(edges)) {
  if (num_nodes_ == 0) throw std::invalid_argument("graph must have nodes");
  for (Edge& e : edges_) {
    if (e.i > e.j) std::swap(e.i, e.j);
    if (e.i == e.j)
      throw std::invalid_argument("self-loop at node " + std::to_string(e.i));
    if (e.j >= num_nodes_)
      throw std::invalid_argument("edge endpoint " + std::to_string(e.j) +
                                  " out of range");
    if (!(e.weight > 0.0))
      throw std::invalid_argument("edge weight must be positive");
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  for (std::size_t e = 1; e < edges_.size(); ++e) {
    if (edges_[e].i == edges_[e - 1].i && edges_[e].j == edges_[e - 1].j)
      throw std::invalid_argument(
          "duplicate edge (" + std::to_string(edges_[e].i) + "," +
          std::to_string(edges_[e].j) + ")");
  }
  degrees_.assign(num_nodes_, 0.0);
  for (const Edge& e : edges_) {
    degrees_[e.i] += e.weight;
    degrees_[e.j] += e.weight;
  }
  for (std::size_t i = 0; i < num_nodes_; ++i) {
    if (degrees_[i] == 0.0)
      throw std::invalid_argument("isolated node " + std::to_string(i));
  }
}

namespace {

void check_primal(const EmpiricalGraph& graph, const PrimalSignal& w) {
  if (w.blocks != graph.num_nodes())
    throw std::invalid_argument("primal signal has " +
                                std::to_string(w.blocks) + " blocks, graph has " +
                                std::to_string(graph.num_nodes()) + " nodes");
  if (w.dim == 0) throw std::invalid_argument("signal dimension must be >= 1");
}

void check_dual(const EmpiricalGraph& graph, const DualSignal& u) {
  if (u.blocks != graph.num_edges())
    throw std::invalid_argument("dual signal has " + std::to_string(u.blocks) +
                                " blocks, graph has " +
                                std::to_string(graph.num_edges()) + " edges");
  if (u.dim == 0) throw std::invalid_argument("signal dimension must be >= 1");
}

}  // namespace

DualSignal apply_incidence(const EmpiricalGraph& graph, const PrimalSignal& w) {
  check_primal(graph, w);
  DualSignal u(graph.num_edges(), w.dim);
  const auto& edges = graph.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const double* wi = w.block(edges[e].i);
    const double* wj = w.block(edges[e].j);
    double* ue = u.block(e);
    for (std::size_t k = 0; k < w.dim; ++k)
      ue[k] = edges[e].weight * (wi[k] - wj[k]);
  }
  return u;
}

PrimalSignal apply_incidence_adjoint(const EmpiricalGraph& graph,
                                     const DualSignal& u) {
  check_dual(graph, u);
  PrimalSignal g(graph.num_nodes(), u.dim);
  const auto& edges = graph.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const double* ue = u.block(e);
    double* gi = g.block(edges[e].i);
    double* gj = g.block(edges[e].j);
    for (std::size_t k = 0; k < u.dim; ++k) {
      gi[k] += edges[e].weight * ue[k];
      gj[k] -= edges[e].weight * ue[k];
    }
  }
  return g;
}

double tv_norm(const EmpiricalGraph& graph, const PrimalSignal& w) {
  check_primal(graph, w);
  const auto& edges = graph.edges();
  double tv = 0.0;
  for (const Edge& e : edges) {
    const double* wi = w.block(e.i);
    const double* wj = w.block(e.j);
    double s = 0.0;
    for (std::size_t k = 0; k < w.dim; ++k) {
      double d = wj[k] - wi[k];
      s += d * d;
    }
    tv += e.weight * std::sqrt(s);
  }
  return tv;
}

double estimate_precond_norm(const EmpiricalGraph& graph,
                             const std::vector<double>& sigma,
                             const std::vector<double>& tau,
                             std::size_t iters, std::uint64_t seed) {
  if (sigma.size() != graph.num_edges() || tau.size() != graph.num_nodes())
    throw std::invalid_argument("sigma/tau size mismatch");
  for (double s : sigma)
    if (!(s > 0.0)) throw std::invalid_argument("sigma entries must be positive");
  for (double t : tau)
    if (!(t > 0.0)) throw std::invalid_argument("tau entries must be positive");
  if (iters == 0) throw std::invalid_argument("iters must be >= 1");

  // Power iteration on B^T B with B = S^{1/2} D T^{1/2}, applied block-wise
  // with d = 1 (the operator acts identically on each coordinate).
  const std::size_t n = graph.num_nodes();
  Rng rng(seed);
  PrimalSignal v(n, 1);
  for (double& x : v.data) x = rng.uniform01() - 0.5;

  double lambda = 0.0;
  for (std::size_t it = 0; it < iters; ++it) {
    double nrm = 0.0;
    for (double x : v.data) nrm += x * x;
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) return 0.0;
    for (double& x : v.data) x /= nrm;

    PrimalSignal scaled(n, 1);
    for (std::size_t i = 0; i < n; ++i)
      scaled.data[i] = std::sqrt(tau[i]) * v.data[i];
    DualSignal d = apply_incidence(graph, scaled);
    for (std::size_t e = 0; e < d.blocks; ++e) d.data[e] *= sigma[e];
    PrimalSignal back = apply_incidence_adjoint(graph, d);
    for (std::size_t i = 0; i < n; ++i)
      back.data[i] *= std::sqrt(tau[i]);

    lambda = 0.0;
    for (std::size_t i = 0; i < n; ++i) lambda += v.data[i] * back.data[i];
    v = back;
  }
  return lambda;
}

}  // namespace lnlasso
