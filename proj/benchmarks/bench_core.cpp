#include <benchmark/benchmark.h>

#include "vacone/catalog.hpp"
#include "vacone/cones.hpp"
#include "vacone/penalty.hpp"

using namespace vacone;

namespace {

const ProblemInstance& entry(const std::string& id) {
  static const std::vector<ProblemInstance> all = load_catalog();
  for (const auto& p : all)
    if (p.id == id) return p;
  throw Error("no catalog entry " + id);
}

// Orthant-like cone in R^d cut by a few extra rows.
HPolyhedron sample_cone(std::size_t d) {
  Mat le;
  for (std::size_t i = 0; i < d; ++i) {
    Vec r(d, Rational(0));
    r[i] = -1;
    le.push_back(r);
  }
  for (std::size_t i = 0; i + 1 < d; ++i) {
    Vec r(d, Rational(0));
    r[i] = 1;
    r[i + 1] = -2;
    le.push_back(r);
  }
  return HPolyhedron::cone(d, le);
}

void BM_DoubleDescription(benchmark::State& st) {
  HPolyhedron h = sample_cone(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(to_generators(h));
}
BENCHMARK(BM_DoubleDescription)->Arg(3)->Arg(5)->Arg(7);

void BM_LimitingNormalCone(benchmark::State& st) {
  const auto& p = entry("mpcc");
  Vec y(2, Rational(0));
  for (auto _ : st) benchmark::DoNotOptimize(limiting_normal_cone(p.K, y));
}
BENCHMARK(BM_LimitingNormalCone);

void BM_MStationarity(benchmark::State& st) {
  const auto& p = entry("ex5.2");
  for (auto _ : st) benchmark::DoNotOptimize(m_stationarity_check(p, p.point));
}
BENCHMARK(BM_MStationarity);

void BM_AMRegularitySampler(benchmark::State& st) {
  const auto& p = entry("ex3.4");
  for (auto _ : st) benchmark::DoNotOptimize(am_regularity_check(p, p.point));
}
BENCHMARK(BM_AMRegularitySampler)->Unit(benchmark::kMillisecond);

void BM_PenaltyTrace(benchmark::State& st) {
  const auto& p = entry("ex3.1");
  PenaltyConfig cfg;
  cfg.tol_cap = 1e-6;
  for (auto _ : st) benchmark::DoNotOptimize(am_trace(p, p.point, cfg));
}
BENCHMARK(BM_PenaltyTrace)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
