#include <benchmark/benchmark.h>

#include "multcount/counting.hpp"
#include "multcount/fixed_point.hpp"
#include "multcount/geometry.hpp"
#include "multcount/predictors.hpp"
#include "multcount/rng.hpp"
#include "multcount/sieve.hpp"

using namespace multcount;

namespace {

void BM_FracMulDist(benchmark::State& state) {
  Frac64 a = Frac64::sqrt_frac(2);
  std::uint64_t cur = 0, acc = 0;
  for (auto _ : state) {
    cur += a.raw;
    acc += nearest_dist_raw(Frac64{cur}, Frac64{});
  }
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_FracMulDist);

void BM_CountSimultaneous(benchmark::State& state) {
  CountQuery q;
  q.mode = CountMode::Simultaneous;
  q.alpha = {Frac64::sqrt_frac(2)};
  q.psi = ApproxFunction::constant(0.25);
  q.n_max = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(count(q).count);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CountSimultaneous)->Arg(1 << 20);

void BM_CountMultiplicativeK2(benchmark::State& state) {
  CountQuery q;
  q.mode = CountMode::Multiplicative;
  q.alpha = {Frac64::sqrt_frac(2), Frac64::sqrt_frac(3)};
  q.psi = ApproxFunction::power_log(1.0, 1.0, 0.0);
  q.n_max = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(count(q).count);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CountMultiplicativeK2)->Arg(1 << 20);

void BM_CountCoprime(benchmark::State& state) {
  CountQuery q;
  q.mode = CountMode::CoprimePairs;
  q.alpha = {Frac64::golden()};
  q.psi = ApproxFunction::constant(0.5);
  q.n_max = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(count(q).count);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CountCoprime)->Arg(1 << 18);

void BM_PhiSieve(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(euler_phi_sieve(static_cast<std::uint64_t>(state.range(0))));
  }
}
BENCHMARK(BM_PhiSieve)->Arg(1 << 20);

void BM_MultiplicativeSum(benchmark::State& state) {
  auto psi = ApproxFunction::power_log(1.0, 1.0, 0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(multiplicative_sum(static_cast<std::uint64_t>(state.range(0)), 2, psi));
  }
}
BENCHMARK(BM_MultiplicativeSum)->Arg(1 << 20);

void BM_MonteCarloVolume(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(monte_carlo_volume({2, 0.5, Box::Unit}, 1 << 20, 7, 1));
  }
  state.SetItemsProcessed(state.iterations() * (1 << 20));
}
BENCHMARK(BM_MonteCarloVolume);

}  // namespace

BENCHMARK_MAIN();
