#include <benchmark/benchmark.h>

#include "gscat/observables.hpp"

using namespace gscat;

namespace {

const TwoScatterer& scatterer(const char* name) {
  static std::map<std::string, TwoScatterer> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, TwoScatterer(make_family(parse_family(name)))).first;
  return it->second;
}

const char* kGraphs[] = {"AC:4", "C:10:5", "AL:10", "Line:27"};

void BM_J(benchmark::State& st, Exec exec) {
  const TwoScatterer& ts = scatterer(kGraphs[st.range(0)]);
  JOptions o;
  o.exec = exec;
  for (auto _ : st) benchmark::DoNotOptimize(ts.j_matrix(0.37, o).j.data());
  st.SetLabel(kGraphs[st.range(0)]);
}

void BM_JSerial(benchmark::State& st) { BM_J(st, Exec::Serial); }
void BM_JParallel(benchmark::State& st) { BM_J(st, Exec::Parallel); }

void BM_SingleScatter(benchmark::State& st) {
  const TwoScatterer& ts = scatterer(kGraphs[st.range(0)]);
  double e = -1.9;
  for (auto _ : st) {
    benchmark::DoNotOptimize(ts.single().at_energy(e).s.data());
    e = e > 1.9 ? -1.9 : e + 0.013;
  }
  st.SetLabel(kGraphs[st.range(0)]);
}

void BM_RGrid(benchmark::State& st) {
  const TwoScatterer& ts = scatterer("AL:10");
  std::vector<double> ks;
  for (int i = 0; i < st.range(0); ++i) ks.push_back(-kPi + 2 * kPi * (i + 0.5) / st.range(0));
  ObservableOptions o;
  for (auto _ : st) benchmark::DoNotOptimize(r_grid(ts, -kPi / 4, kPi / 2, ks, ks, o).data());
}

}  // namespace

BENCHMARK(BM_JSerial)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_JParallel)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SingleScatter)->DenseRange(0, 3)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_RGrid)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
