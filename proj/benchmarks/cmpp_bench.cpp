#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "cmpp/abstraction.hpp"
#include "cmpp/acmts.hpp"
#include "cmpp/congestion.hpp"
#include "cmpp/grid_map.hpp"
#include "cmpp/low_level.hpp"
#include "cmpp/pibt.hpp"

namespace {

using namespace cmpp;

CmppInstance grid_instance(int side, int agents, std::uint64_t seed) {
  auto g = std::make_shared<const SparseGraph>(SparseGraph::grid(side, side));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, side * side - 1);
  std::vector<Agent> list;
  for (int a = 0; a < agents; ++a) {
    int s = pick(rng), t = pick(rng);
    while (t == s) t = pick(rng);
    list.push_back({a, s, t});
  }
  return CmppInstance(std::move(g), std::move(list));
}

void BM_Dijkstra(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  CmppInstance inst = grid_instance(side, 200, 1);
  Solution pp = pp_initial(inst);
  FlowField flow = compute_flow(pp, inst.graph());
  const auto goal = static_cast<VertexIndex>(side * side - 1);
  for (auto _ : state) benchmark::DoNotOptimize(dijkstra_min_delta(inst.graph(), flow, 0, goal));
}
BENCHMARK(BM_Dijkstra)->Arg(10)->Arg(30);

void BM_PpInitial(benchmark::State& state) {
  CmppInstance inst = grid_instance(10, static_cast<int>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(pp_initial(inst));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PpInitial)->Arg(100)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_SolveExpansions(benchmark::State& state) {
  CmppInstance inst = grid_instance(10, 500, 3);
  SolverConfig config;
  config.max_expansions = static_cast<std::uint64_t>(state.range(0));
  config.warm_start = pp_initial(inst);
  for (auto _ : state) benchmark::DoNotOptimize(solve(inst, config).best_cost);
}
BENCHMARK(BM_SolveExpansions)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_Sparsify(benchmark::State& state) {
  GridMap grid = load_map(CMPP_DATA_DIR "/maps/random-32-32-10.map");
  for (auto _ : state) benchmark::DoNotOptimize(sparsify(grid, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Sparsify)->Arg(2)->Arg(3)->Arg(5);

void BM_PibtStep(benchmark::State& state) {
  GridMap grid = load_map(CMPP_DATA_DIR "/maps/warehouse-small.map");
  const auto agents = static_cast<std::size_t>(state.range(0));
  std::vector<CellIndex> free;
  for (std::size_t c = 0; c < grid.size(); ++c) {
    if (grid.traversable(static_cast<CellIndex>(c))) free.push_back(static_cast<CellIndex>(c));
  }
  std::mt19937_64 rng(4);
  std::shuffle(free.begin(), free.end(), rng);
  std::vector<CellIndex> pos(free.begin(), free.begin() + static_cast<std::ptrdiff_t>(agents));
  std::vector<CellIndex> tgt(free.rbegin(), free.rbegin() + static_cast<std::ptrdiff_t>(agents));
  std::vector<std::int64_t> pri(agents, 0);
  DistanceCache cache(grid);
  for (auto _ : state) benchmark::DoNotOptimize(pibt_step(grid, {pos, tgt, pri, false}, cache));
}
BENCHMARK(BM_PibtStep)->Arg(40)->Arg(140);

}  // namespace

BENCHMARK_MAIN();
