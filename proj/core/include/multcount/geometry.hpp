#pragma once

#include <cstdint>

namespace multcount {

enum class Box { Unit, Half };  // [0,1]^k vs [0,1/2]^k

struct ProductRegion {
  int k = 1;
  double lambda = 1.0;
  Box box = Box::Unit;
};

// Volume of {x in [0,1]^k : x_1...x_k <= lambda}:
// 1 for lambda >= 1, else lambda * sum_{s=0}^{k-1} (-log lambda)^s / s!.
// The sum is built by iterative term updates, stable for k up to ~50.
// Throws std::domain_error for lambda <= 0 or k < 1.
double unit_box_product_volume(int k, double lambda);

// Volume of {x in [0,1/2]^k : x_1...x_k <= lambda}, via the exact rescaling
// 2^-k * unit_box_product_volume(k, 2^k lambda) (same code path, so the
// scaling identity holds bit for bit).
double half_box_product_volume(int k, double lambda);

// Measure of {x in [0,1]^k : prod_i min(x_i, 1-x_i) <= t}: the per-n hit
// probability of the multiplicative counting condition at threshold t.
// Equals 2^k * half_box_product_volume(k, t) for t > 0; 0 for t <= 0.
double nearest_product_measure(int k, double t);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;  // binomial standard error, scaled by box volume
  std::uint64_t hits = 0;
  std::uint64_t samples = 0;
};

// Uniform sampling in the region's box, indicator x_1...x_k <= lambda.
// Batched with per-batch seeds derived from `seed`, so the estimate is
// bit-identical for any thread count.
MonteCarloEstimate monte_carlo_volume(const ProductRegion& region, std::uint64_t samples,
                                      std::uint64_t seed, int threads = 1);

}  // namespace multcount
