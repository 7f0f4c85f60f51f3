#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "multcount/fixed_point.hpp"

namespace multcount {

enum class RecordMetric {
  LittlewoodProduct,  // records of n ||n a|| ||n b||, strictly decreasing
  ExponentRatio,      // records of -log(prod dists)/log n, strictly increasing
};

// Record trail of a streaming scan: values strictly improve along the trail
// (decreasing for LittlewoodProduct, increasing for ExponentRatio) and n is
// strictly increasing. Values are kept in long double, the precision of the
// scan itself.
struct RecordTrail {
  RecordMetric metric = RecordMetric::LittlewoodProduct;
  struct Entry {
    std::uint64_t n = 0;
    long double value = 0.0L;
  };
  std::vector<Entry> entries;
};

// Streaming scan of n ||n alpha|| ||n beta|| over n <= N, keeping strict
// minima. Distances are exact; the product is accumulated in extended
// precision.
RecordTrail littlewood_records(Frac64 alpha, Frac64 beta, std::uint64_t n_max);

struct ExponentEstimate {
  double value = 0.0;        // max over the scan of -log(prod dists)/log n
  bool zero_product = false; // some n had an exactly zero product; value is +inf
  std::uint64_t argmax = 0;  // n of the final record (0 when none)
  RecordTrail trail;         // ExponentRatio records
};

// Lower-bound estimator for the multiplicative exponent: the supremum is an
// infinitely-often notion, so any finite scan gives a lower bound. n_min is
// a burn-in that suppresses small-n noise in the ratio.
ExponentEstimate multiplicative_exponent_estimate(std::span<const Frac64> alpha,
                                                  std::uint64_t n_max,
                                                  std::uint64_t n_min = 100);

}  // namespace multcount
