#include <benchmark/benchmark.h>

#include "ecm/graph.hpp"
#include "ecm/metrics.hpp"
#include "ecm/sim.hpp"

using namespace ecm;

namespace {

Params sized(std::size_t n, std::size_t e, RewireStrategy s = RewireStrategy::random) {
  Params p;
  p.n = n;
  p.e = e;
  p.strategy = s;
  p.record_events = false;
  p.t_max = ~std::uint64_t{0};
  return p;
}

void BM_Step(benchmark::State& st) {
  auto s = init_simulation(sized(std::size_t(st.range(0)), std::size_t(st.range(0)) * 10,
                                 static_cast<RewireStrategy>(st.range(1))));
  for (auto _ : st) benchmark::DoNotOptimize(step(s));
  st.SetItemsProcessed(st.iterations());
  st.SetLabel(std::string(to_string(s.params.strategy)));
}
BENCHMARK(BM_Step)->ArgsProduct({{100, 10'000}, {0, 1, 2}});

void BM_TriadCensus(benchmark::State& st) {
  Rng rng(1);
  const auto n = std::size_t(st.range(0));
  const auto g = random_directed_graph(n, n * 10, rng);
  for (auto _ : st) benchmark::DoNotOptimize(triad_census(g));
}
BENCHMARK(BM_TriadCensus)->Arg(100)->Arg(1'000)->Arg(10'000);

void BM_StronglyConnected(benchmark::State& st) {
  Rng rng(2);
  const auto n = std::size_t(st.range(0));
  const auto g = random_directed_graph(n, n * 3, rng);
  for (auto _ : st) benchmark::DoNotOptimize(largest_strongly_connected_component(g));
}
BENCHMARK(BM_StronglyConnected)->Arg(1'000)->Arg(20'000);

void BM_EchoChamberCheck(benchmark::State& st) {
  auto s = init_simulation(sized(std::size_t(st.range(0)), std::size_t(st.range(0)) * 10));
  for (auto _ : st) benchmark::DoNotOptimize(is_echo_chamber(s));
}
BENCHMARK(BM_EchoChamberCheck)->Arg(100)->Arg(10'000);

}  // namespace
BENCHMARK_MAIN();
