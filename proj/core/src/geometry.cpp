#include "multcount/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "multcount/parallel.hpp"
#include "multcount/rng.hpp"
#include "multcount/summation.hpp"

namespace multcount {

double unit_box_product_volume(int k, double lambda) {
  if (k < 1) throw std::domain_error("unit_box_product_volume: k must be >= 1");
  if (!(lambda > 0.0)) throw std::domain_error("unit_box_product_volume: lambda must be > 0");
  if (lambda >= 1.0) return 1.0;
  double log_inv = -std::log(lambda);
  double term = lambda;  // lambda * log_inv^s / s!, grown incrementally
  double sum = term;
  for (int s = 1; s < k; ++s) {
    term *= log_inv / s;
    sum += term;
  }
  return sum;
}

double half_box_product_volume(int k, double lambda) {
  return std::ldexp(unit_box_product_volume(k, std::ldexp(lambda, k)), -k);
}

double nearest_product_measure(int k, double t) {
  if (!(t > 0.0)) return 0.0;
  return unit_box_product_volume(k, std::ldexp(t, k));
}

MonteCarloEstimate monte_carlo_volume(const ProductRegion& region, std::uint64_t samples,
                                      std::uint64_t seed, int threads) {
  if (region.k < 1) throw std::domain_error("monte_carlo_volume: k must be >= 1");
  if (!(region.lambda > 0.0)) throw std::domain_error("monte_carlo_volume: lambda must be > 0");
  if (samples < 1) throw std::domain_error("monte_carlo_volume: samples must be >= 1");

  const int k = region.k;
  const double lambda = region.lambda;
  const double scale = region.box == Box::Half ? 0.5 : 1.0;

  std::uint64_t nblocks = block_count(1, samples);
  std::vector<std::uint64_t> hits_per_block(nblocks, 0);
  for_each_block(1, samples, threads, [&](std::uint64_t b, std::uint64_t lo, std::uint64_t hi) {
    SplitMix64 rng(SplitMix64::child_seed(seed, b));
    std::uint64_t hits = 0;
    for (std::uint64_t i = lo; i <= hi; ++i) {
      double prod = 1.0;
      for (int j = 0; j < k; ++j) prod *= scale * rng.next_double();
      if (prod <= lambda) ++hits;
    }
    hits_per_block[b] = hits;
  });

  std::uint64_t hits = 0;
  for (std::uint64_t h : hits_per_block) hits += h;

  double box_volume = std::pow(scale, k);
  double p = static_cast<double>(hits) / static_cast<double>(samples);
  MonteCarloEstimate est;
  est.hits = hits;
  est.samples = samples;
  est.estimate = box_volume * p;
  est.std_error = box_volume * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  return est;
}

}  // namespace multcount
