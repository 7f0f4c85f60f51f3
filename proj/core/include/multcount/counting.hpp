#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "multcount/fixed_point.hpp"
#include "multcount/psi.hpp"

namespace multcount {

enum class CountMode {
  Simultaneous,           // max_i ||n a_i - g_i|| < psi(n)
  Multiplicative,         // prod_i ||n a_i - g_i|| < psi(n)
  MultiplicativeUniform,  // prod_i ||n a_i - g_i|| < psi(N)
  CoprimePairs,           // coprime (a, n), |alpha - a/n| <= psi(n)/n
  RelaxedPairs,           // prod_{i<k} ||n a_i - g_i|| * |n a_k - a| < psi(n)
};

const char* to_string(CountMode mode);
CountMode count_mode_from_string(const std::string& s);

struct CountQuery {
  std::vector<Frac64> alpha;
  std::vector<Frac64> gamma;  // empty means all zero; else size must match alpha
  std::uint64_t n_max = 0;
  ApproxFunction psi = ApproxFunction::constant(0.0);
  CountMode mode = CountMode::Simultaneous;

  std::size_t k() const { return alpha.size(); }
  Frac64 gamma_at(std::size_t i) const { return gamma.empty() ? Frac64{} : gamma[i]; }

  // k >= 1; CoprimePairs needs k = 1; the multiplicative modes and
  // RelaxedPairs need k >= 2; RelaxedPairs needs gamma_k = 0.
  // Throws std::invalid_argument.
  void validate() const;
};

struct CountOptions {
  int threads = 1;
  // Witness capture runs the serial path and stores hits up to witness_cap.
  bool capture_witnesses = false;
  std::size_t witness_cap = 100000;
};

struct CountResult {
  std::uint64_t count = 0;
  std::vector<std::uint64_t> witnesses;  // hit n, modes counting single n
  std::vector<std::pair<std::uint64_t, std::int64_t>> pair_witnesses;  // (n, a)
  bool witnesses_truncated = false;
  // RelaxedPairs: some n had psi(n)/P(n) > 2N (degenerate rational fibre);
  // the search radius was clamped to 2N there.
  bool cap_exceeded = false;
};

// Streaming counters, O(k) work per n via one wrapping add per coordinate.
// The count is exact: strict thresholds compare integer distance raws against
// psi(n) without rounding (k = 2 products exactly in 128 bits; k >= 3 in
// log2 space on exact raws converted once).
CountResult count(const CountQuery& q, const CountOptions& opts = {});

CountResult count_simultaneous(const CountQuery& q, const CountOptions& opts = {});
CountResult count_multiplicative(const CountQuery& q, const CountOptions& opts = {});
CountResult count_multiplicative_uniform(const CountQuery& q, const CountOptions& opts = {});
CountResult count_coprime_pairs(const CountQuery& q, const CountOptions& opts = {});
CountResult count_relaxed_pairs(const CountQuery& q, const CountOptions& opts = {});

// Cumulative counts at each checkpoint (ascending; the last defines the scan
// range). One pass; parallel blocks merge by integer sum, so the result is
// independent of thread count.
std::vector<std::uint64_t> count_at_checkpoints(const CountQuery& q,
                                                std::span<const std::uint64_t> checkpoints,
                                                int threads = 1);

}  // namespace multcount
