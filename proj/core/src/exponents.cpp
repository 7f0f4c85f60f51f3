#include "multcount/exponents.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace multcount {

RecordTrail littlewood_records(Frac64 alpha, Frac64 beta, std::uint64_t n_max) {
  if (n_max < 1) throw std::invalid_argument("littlewood_records: N must be >= 1");
  RecordTrail trail;
  trail.metric = RecordMetric::LittlewoodProduct;
  std::uint64_t cur_a = 0, cur_b = 0;
  long double best = std::numeric_limits<long double>::infinity();
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    cur_a += alpha.raw;
    cur_b += beta.raw;
    std::uint64_t da = nearest_dist_raw(Frac64{cur_a}, Frac64{});
    std::uint64_t db = nearest_dist_raw(Frac64{cur_b}, Frac64{});
    // exact 128-bit distance product, one conversion to extended precision
    u128 prod = static_cast<u128>(da) * db;
    long double v = static_cast<long double>(prod) * static_cast<long double>(n) * 0x1p-128L;
    if (v < best) {
      best = v;
      trail.entries.push_back({n, v});
    }
  }
  return trail;
}

ExponentEstimate multiplicative_exponent_estimate(std::span<const Frac64> alpha,
                                                  std::uint64_t n_max, std::uint64_t n_min) {
  if (alpha.empty()) throw std::invalid_argument("exponent estimate: alpha must be nonempty");
  if (n_min < 2) n_min = 2;
  if (n_max <= n_min) throw std::invalid_argument("exponent estimate: need N > n_min");

  ExponentEstimate est;
  est.trail.metric = RecordMetric::ExponentRatio;
  std::size_t d = alpha.size();
  std::vector<std::uint64_t> cur(d, 0);
  double best = -std::numeric_limits<double>::infinity();

  // d = 1 fast filter: a new record needs dist < n^-best, so distances above
  // a per-octave bound cannot qualify. Recomputed when n crosses a power of
  // two or the record improves.
  std::uint64_t coarse = ~0ULL;
  int octave = -1;
  auto refresh_coarse = [&](std::uint64_t n) {
    if (best <= 0.0) {
      coarse = ~0ULL;
      return;
    }
    double bits = 64.0 - best * std::log2(static_cast<double>(n));
    coarse = bits >= 64.0 ? ~0ULL : (bits <= 0.0 ? 0 : static_cast<std::uint64_t>(std::ceil(std::exp2(bits))));
  };

  for (std::uint64_t n = 1; n <= n_max; ++n) {
    for (std::size_t i = 0; i < d; ++i) cur[i] += alpha[i].raw;
    if (n < n_min) continue;

    if (d == 1) {
      std::uint64_t dist = nearest_dist_raw(Frac64{cur[0]}, Frac64{});
      if (dist == 0) {
        est.zero_product = true;
        est.argmax = n;
        est.value = std::numeric_limits<double>::infinity();
        est.trail.entries.push_back({n, std::numeric_limits<long double>::infinity()});
        return est;
      }
      int oct = 63 - static_cast<int>(__builtin_clzll(n));
      if (oct != octave) {
        octave = oct;
        // threshold for the smallest n in the octave bounds the whole octave
        refresh_coarse(std::uint64_t{1} << oct);
      }
      if (dist >= coarse) continue;
      double w = -(std::log2(static_cast<double>(dist)) - 64.0) /
                 std::log2(static_cast<double>(n));
      if (w > best) {
        best = w;
        est.argmax = n;
        est.trail.entries.push_back({n, static_cast<long double>(w)});
        refresh_coarse(std::uint64_t{1} << octave);
      }
      continue;
    }

    double log2_prod = 0.0;
    bool zero = false;
    for (std::size_t i = 0; i < d; ++i) {
      std::uint64_t dist = nearest_dist_raw(Frac64{cur[i]}, Frac64{});
      if (dist == 0) {
        zero = true;
        break;
      }
      log2_prod += std::log2(static_cast<double>(dist));
    }
    if (zero) {
      est.zero_product = true;
      est.argmax = n;
      est.value = std::numeric_limits<double>::infinity();
      est.trail.entries.push_back({n, std::numeric_limits<long double>::infinity()});
      return est;
    }
    double w = -(log2_prod - 64.0 * static_cast<double>(d)) / std::log2(static_cast<double>(n));
    if (w > best) {
      best = w;
      est.argmax = n;
      est.trail.entries.push_back({n, static_cast<long double>(w)});
    }
  }
  est.value = best;
  return est;
}

}  // namespace multcount
