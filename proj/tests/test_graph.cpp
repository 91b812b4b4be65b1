#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "lnlasso/graph.hpp"
#include "lnlasso/rng.hpp"

using namespace lnlasso;

namespace {

PrimalSignal random_primal(std::size_t n, std::size_t d, Rng& rng) {
  PrimalSignal w(n, d);
  for (double& v : w.data) v = 2.0 * rng.uniform01() - 1.0;
  return w;
}

DualSignal random_dual(std::size_t e, std::size_t d, Rng& rng) {
  DualSignal u(e, d);
  for (double& v : u.data) v = 2.0 * rng.uniform01() - 1.0;
  return u;
}

// Random connected graph on n nodes: a random spanning path plus extra edges.
EmpiricalGraph random_graph(std::size_t n, Rng& rng) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t i = n - 1; i > 0; --i)
    std::swap(perm[i], perm[rng.next_u64() % (i + 1)]);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i)
    edges.push_back({perm[i], perm[i + 1], 0.5 + rng.uniform01()});
  std::size_t extra = rng.next_u64() % n;
  for (std::size_t t = 0; t < extra; ++t) {
    std::size_t a = rng.next_u64() % n, b = rng.next_u64() % n;
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    bool dup = false;
    for (const Edge& e : edges) {
      std::size_t lo = std::min(e.i, e.j), hi = std::max(e.i, e.j);
      if (lo == a && hi == b) dup = true;
    }
    if (!dup) edges.push_back({a, b, 0.5 + rng.uniform01()});
  }
  return EmpiricalGraph(n, std::move(edges));
}

// Explicit (E x N) scaled-difference matrix; d coordinates are independent,
// so d = 1 suffices for dense comparisons.
std::vector<std::vector<double>> dense_incidence(const EmpiricalGraph& g) {
  std::vector<std::vector<double>> m(g.num_edges(),
                                     std::vector<double>(g.num_nodes(), 0.0));
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    m[e][g.edges()[e].i] = g.edges()[e].weight;
    m[e][g.edges()[e].j] = -g.edges()[e].weight;
  }
  return m;
}

}  // namespace

TEST_CASE("graph construction validates inputs") {
  CHECK_THROWS_AS(EmpiricalGraph(2, {{0, 0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(EmpiricalGraph(2, {{0, 2, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(EmpiricalGraph(2, {{0, 1, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(EmpiricalGraph(2, {{0, 1, -1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(EmpiricalGraph(2, {{0, 1, 1.0}, {1, 0, 2.0}}),
                  std::invalid_argument);
  // node 2 isolated
  CHECK_THROWS_AS(EmpiricalGraph(3, {{0, 1, 1.0}}), std::invalid_argument);
}

TEST_CASE("edges are normalized to i < j and sorted") {
  EmpiricalGraph g(3, {{2, 1, 3.0}, {1, 0, 2.0}});
  CHECK(g.edges()[0].i == 0);
  CHECK(g.edges()[0].j == 1);
  CHECK(g.edges()[0].weight == 2.0);
  CHECK(g.edges()[1].i == 1);
  CHECK(g.edges()[1].j == 2);
  CHECK(g.degree(1) == 5.0);
}

TEST_CASE("apply_incidence on hand examples") {
  SUBCASE("constant signal maps to zero") {
    EmpiricalGraph g(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    PrimalSignal w(3, 2);
    for (double& v : w.data) v = 3.7;
    DualSignal u = apply_incidence(g, w);
    for (double v : u.data) CHECK(v == 0.0);
  }
  SUBCASE("single weighted edge") {
    EmpiricalGraph g(2, {{0, 1, 2.0}});
    PrimalSignal w(2, 1);
    w.data = {3.0, 1.0};
    DualSignal u = apply_incidence(g, w);
    CHECK(u.data[0] == doctest::Approx(4.0));
  }
  SUBCASE("chain with unit weights") {
    EmpiricalGraph g(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    PrimalSignal w(3, 1);
    w.data = {1.0, 0.0, 1.0};
    DualSignal u = apply_incidence(g, w);
    CHECK(u.data[0] == doctest::Approx(1.0));
    CHECK(u.data[1] == doctest::Approx(-1.0));
  }
  SUBCASE("dimension mismatch throws") {
    EmpiricalGraph g(2, {{0, 1, 2.0}});
    CHECK_THROWS_AS(apply_incidence(g, PrimalSignal(3, 1)),
                    std::invalid_argument);
  }
}

TEST_CASE("adjoint on the single-edge example") {
  EmpiricalGraph g(2, {{0, 1, 2.0}});
  DualSignal u(1, 1);
  u.data = {1.0};
  PrimalSignal gvec = apply_incidence_adjoint(g, u);
  CHECK(gvec.data[0] == doctest::Approx(2.0));
  CHECK(gvec.data[1] == doctest::Approx(-2.0));
  CHECK_THROWS_AS(apply_incidence_adjoint(g, DualSignal(2, 1)),
                  std::invalid_argument);
  DualSignal zero(1, 3);
  PrimalSignal gz = apply_incidence_adjoint(g, zero);
  for (double v : gz.data) CHECK(v == 0.0);
}

TEST_CASE("adjoint identity and dense equivalence on random graphs") {
  Rng rng(12345);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 2 + rng.next_u64() % 7;  // N <= 8
    std::size_t d = 1 + rng.next_u64() % 3;
    EmpiricalGraph g = random_graph(n, rng);
    PrimalSignal w = random_primal(n, d, rng);
    DualSignal u = random_dual(g.num_edges(), d, rng);

    DualSignal dw = apply_incidence(g, w);
    PrimalSignal dtu = apply_incidence_adjoint(g, u);

    double lhs = 0.0;
    for (std::size_t i = 0; i < dw.data.size(); ++i) lhs += dw.data[i] * u.data[i];
    double rhs = 0.0;
    for (std::size_t i = 0; i < w.data.size(); ++i) rhs += w.data[i] * dtu.data[i];
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));

    auto dense = dense_incidence(g);
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
      for (std::size_t c = 0; c < d; ++c) {
        double expect = 0.0;
        for (std::size_t i = 0; i < n; ++i)
          expect += dense[e][i] * w.block(i)[c];
        CHECK(dw.block(e)[c] == doctest::Approx(expect).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("tv_norm examples and seminorm properties") {
  EmpiricalGraph g2(2, {{0, 1, 2.0}});
  PrimalSignal w(2, 1);
  w.data = {3.0, 1.0};
  CHECK(tv_norm(g2, w) == doctest::Approx(4.0));

  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t n = 3 + rng.next_u64() % 5;
    std::size_t d = 1 + rng.next_u64() % 3;
    EmpiricalGraph g = random_graph(n, rng);
    PrimalSignal v = random_primal(n, d, rng);

    // equals the sum of block norms of the incidence image
    DualSignal dv = apply_incidence(g, v);
    double sum = 0.0;
    for (std::size_t e = 0; e < dv.blocks; ++e) sum += dv.block_norm(e);
    CHECK(tv_norm(g, v) == doctest::Approx(sum).epsilon(1e-12));

    // invariance under per-coordinate constant shift
    PrimalSignal shifted = v;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t c = 0; c < d; ++c)
        shifted.block(i)[c] += 5.0 + static_cast<double>(c);
    CHECK(tv_norm(g, shifted) == doctest::Approx(tv_norm(g, v)).epsilon(1e-12));

    // absolute homogeneity
    PrimalSignal scaled = v;
    for (double& x : scaled.data) x *= -2.5;
    CHECK(tv_norm(g, scaled) ==
          doctest::Approx(2.5 * tv_norm(g, v)).epsilon(1e-12));
  }
}

TEST_CASE("estimate_precond_norm on the single-edge instance") {
  EmpiricalGraph g(2, {{0, 1, 1.0}});
  // B = sqrt(sigma) [A sqrt(tau_0), -A sqrt(tau_1)]; squared norm is
  // sigma A^2 (tau_0 + tau_1) = 0.5 * 1 * (0.5 + 0.5) = 0.5.
  double est = estimate_precond_norm(g, {0.5}, {0.5, 0.5});
  CHECK(est == doctest::Approx(0.5).epsilon(1e-10));

  // homogeneity under scaling of tau
  double est4 = estimate_precond_norm(g, {0.5}, {2.0, 2.0});
  CHECK(est4 == doctest::Approx(4.0 * est).epsilon(1e-10));

  CHECK_THROWS_AS(estimate_precond_norm(g, {0.0}, {0.5, 0.5}),
                  std::invalid_argument);
  CHECK_THROWS_AS(estimate_precond_norm(g, {0.5}, {0.5, -1.0}),
                  std::invalid_argument);
}

TEST_CASE("default step sizes keep the scaled operator norm below one") {
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    std::size_t n = 3 + rng.next_u64() % 6;
    EmpiricalGraph g = random_graph(n, rng);
    std::vector<double> sigma, tau;
    for (const Edge& e : g.edges()) sigma.push_back(1.0 / (2.0 * e.weight));
    for (std::size_t i = 0; i < n; ++i) tau.push_back(0.9 / g.degree(i));
    CHECK(estimate_precond_norm(g, sigma, tau) < 1.0);
  }
}
