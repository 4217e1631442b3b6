#include <benchmark/benchmark.h>

#include <vector>

#include "negdep/emerge.hpp"
#include "negdep/fdr.hpp"
#include "negdep/gendep.hpp"
#include "negdep/mc.hpp"
#include "negdep/pmerge.hpp"
#include "negdep/rng.hpp"

namespace {

using namespace negdep;

PVector make_p(int K, std::uint64_t seed) {
  Rng rng(seed, 0);
  std::vector<double> v(static_cast<std::size_t>(K));
  for (auto& x : v) x = rng.uniform01();
  return PVector(std::move(v));
}

void BM_Simes(benchmark::State& state) {
  const PVector p = make_p(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simes(p));
  }
}
BENCHMARK(BM_Simes)->Arg(10)->Arg(100)->Arg(10000);

void BM_Bh(benchmark::State& state) {
  const PVector p = make_p(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bh(p, 0.1));
  }
}
BENCHMARK(BM_Bh)->Arg(100)->Arg(10000);

void BM_UStatistic(benchmark::State& state) {
  Rng rng(3, 0);
  std::vector<double> v(static_cast<std::size_t>(state.range(0)));
  for (auto& x : v) x = 2.0 * rng.uniform01();
  const EVector e(v);
  const int k = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(u_statistic(e, k));
  }
}
BENCHMARK(BM_UStatistic)->Args({100, 2})->Args({1000, 2})->Args({1000, 5});

void BM_SimesBoundAdditive(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(simes_bound_additive(0.05, K));
  }
}
BENCHMARK(BM_SimesBoundAdditive)->Arg(100)->Arg(100000);

void BM_NormQuantile(benchmark::State& state) {
  Rng rng(4, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(norm_quantile(rng.uniform01()));
  }
}
BENCHMARK(BM_NormQuantile);

void BM_NegGaussianDraw(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  const GaussianFactor factor(CorrMatrix::equicorrelation(K, -0.5 / (K - 1)));
  const std::vector<double> shift(static_cast<std::size_t>(K), 0.0);
  Rng rng(5, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_neg_gaussian_p(factor, shift, rng));
  }
}
BENCHMARK(BM_NegGaussianDraw)->Arg(2)->Arg(50);

void BM_CyclicalDraw(benchmark::State& state) {
  Rng rng(6, 0);
  const int K = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_cyclical_pvalues(K, rng));
  }
}
BENCHMARK(BM_CyclicalDraw)->Arg(50);

void BM_SimesType1Replication(benchmark::State& state) {
  // One full type-1 replication at K=100: draw + combine.
  SamplerConfig cfg;
  cfg.kind = SamplerKind::independent;
  cfg.K = 100;
  const PSampler sampler(cfg);
  Rng rng(7, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simes(sampler.draw(rng)));
  }
}
BENCHMARK(BM_SimesType1Replication);

}  // namespace

BENCHMARK_MAIN();
