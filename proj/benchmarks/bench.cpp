#include <benchmark/benchmark.h>

#include "platform_qbd/model_one.hpp"
#include "platform_qbd/qbd_solver.hpp"
#include "platform_qbd/sim.hpp"
#include "platform_qbd/truncated.hpp"

namespace {

using namespace pqbd;

const ModelParams kLarge{/*lambda=*/30.0, /*mu=*/1.0, /*gamma=*/100.0,
                         /*n_owners=*/60, /*price=*/50.0, /*share=*/0.8};

void BM_RateMatrixIteration(benchmark::State& state) {
  const QbdBlocksOne blocks = build_blocks_one(kLarge);
  for (auto _ : state) {
    RateMatrixSolution r = solve_rate_matrix(blocks.down, blocks.local, blocks.up);
    benchmark::DoNotOptimize(r.residual);
  }
}
BENCHMARK(BM_RateMatrixIteration)->Unit(benchmark::kMillisecond);

void BM_BoundarySolve(benchmark::State& state) {
  const QbdBlocksOne blocks = build_blocks_one(kLarge);
  const RateMatrixSolution rate = solve_rate_matrix(blocks.down, blocks.local, blocks.up);
  for (auto _ : state) {
    StationarySolution s = solve_boundary(blocks, rate);
    benchmark::DoNotOptimize(s.pi1.data());
  }
}
BENCHMARK(BM_BoundarySolve)->Unit(benchmark::kMillisecond);

void BM_TruncatedOracle(benchmark::State& state) {
  const ModelParams p{1.2, 1.0, 2.0, 3, 1.0, 0.5};
  const auto levels = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    TruncatedStationary t = truncated_stationary(Model::one, p, levels);
    benchmark::DoNotOptimize(t.eq2);
  }
}
BENCHMARK(BM_TruncatedOracle)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_SimulationEvents(benchmark::State& state) {
  const ModelParams p{1.2, 1.0, 2.0, 3, 1.0, 0.5};
  SimConfig cfg;
  cfg.max_events = static_cast<std::size_t>(state.range(0));
  cfg.replications = 1;
  for (auto _ : state) {
    SimResult r = simulate(Model::one, p, cfg);
    benchmark::DoNotOptimize(r.departures);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulationEvents)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
