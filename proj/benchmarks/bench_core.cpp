#include <benchmark/benchmark.h>

#include "lnlasso/graph.hpp"
#include "lnlasso/solver.hpp"
#include "lnlasso/synth.hpp"

using namespace lnlasso;

namespace {

SyntheticInstance chain_instance() {
  SyntheticSpec spec;
  spec.topology = Topology::kChain;
  spec.labeling_rate = 0.4;
  spec.seed = 7;
  return generate(spec);
}

void IncidenceApply(benchmark::State& state) {
  SyntheticInstance inst = chain_instance();
  PrimalSignal w(inst.graph.num_nodes(), inst.dataset.dim());
  for (std::size_t i = 0; i < w.data.size(); ++i)
    w.data[i] = static_cast<double>(i % 13) - 6.0;
  for (auto _ : state) {
    DualSignal u = apply_incidence(inst.graph, w);
    benchmark::DoNotOptimize(u.data.data());
  }
}
BENCHMARK(IncidenceApply);

void IncidenceAdjoint(benchmark::State& state) {
  SyntheticInstance inst = chain_instance();
  DualSignal u(inst.graph.num_edges(), inst.dataset.dim());
  for (std::size_t i = 0; i < u.data.size(); ++i)
    u.data[i] = static_cast<double>(i % 7) - 3.0;
  for (auto _ : state) {
    PrimalSignal g = apply_incidence_adjoint(inst.graph, u);
    benchmark::DoNotOptimize(g.data.data());
  }
}
BENCHMARK(IncidenceAdjoint);

void SolveChain(benchmark::State& state) {
  SyntheticInstance inst = chain_instance();
  SolverConfig cfg;
  cfg.lambda = 1e-1;
  cfg.max_iters = static_cast<std::size_t>(state.range(0));
  cfg.rel_tol = 0.0;
  for (auto _ : state) {
    SolverRun run = solve(inst.graph, inst.dataset, cfg);
    benchmark::DoNotOptimize(run.final_primal.data.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(SolveChain)->Arg(10)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
