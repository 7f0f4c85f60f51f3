#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "multcount/psi.hpp"

namespace multcount {

enum class PredictorKind {
  Simultaneous,      // sum (2 psi(n))^k
  Multiplicative,    // (1/(k-1)!) sum psi(n) (-log(2^k psi(n)))^{k-1}
  MultiplicativeLog, // sum psi(n) (log n)^{k-1}
  CoprimeWeighted,   // sum 2 (phi(n)/n) psi(n)
  VolumeSum,         // sum of exact per-n hit measures
  VolumeUniform,     // N * per-n hit measure at threshold psi(N)
};

const char* to_string(PredictorKind kind);

// sum_{n<=N} (2 psi(n))^k, compensated.
double simultaneous_sum(std::uint64_t n_max, int k, const ApproxFunction& psi);

struct MultiplicativeSum {
  double value = 0.0;
  // Some term had psi(n) > 2^-k; such terms are summed literally (they may be
  // negative) and the result is flagged as outside the derivation regime of
  // the closed form.
  bool outside_regime = false;
};

// (1/(k-1)!) sum_{n<=N} psi(n) (-log(2^k psi(n)))^{k-1}, natural log, with
// the x(-log x)^d := 0 convention at psi(n) = 0. k = 1 reduces to sum psi(n).
MultiplicativeSum multiplicative_sum(std::uint64_t n_max, int k, const ApproxFunction& psi);

// sum_{n<=N} psi(n) (log n)^{k-1}; the n = 1 term vanishes.
double multiplicative_log_sum(std::uint64_t n_max, int k, const ApproxFunction& psi);

// sum_{n<=N} 2 (phi(n)/n) psi(n); phi(n)/n is one exact-integer division per
// term. phi must cover [0, n_max].
double coprime_weighted_sum(std::uint64_t n_max, const ApproxFunction& psi,
                            std::span<const std::uint32_t> phi);

// sum_{n<=N} measure{x in [0,1]^k : prod min(x_i,1-x_i) <= psi(n)}: the exact
// mean of the multiplicative count over uniform alpha.
double volume_sum(std::uint64_t n_max, int k, const ApproxFunction& psi);

// Same heuristic with the threshold frozen at psi(N).
double volume_sum_uniform(std::uint64_t n_max, int k, const ApproxFunction& psi);

// One streaming pass with values recorded at each checkpoint.
class PredictorSeries {
 public:
  PredictorSeries(PredictorKind kind, int k, ApproxFunction psi);

  // checkpoints ascending. CoprimeWeighted needs phi covering the last one.
  std::vector<double> at_checkpoints(std::span<const std::uint64_t> checkpoints,
                                     std::span<const std::uint32_t> phi = {});

  PredictorKind kind() const { return kind_; }
  int k() const { return k_; }
  bool outside_regime() const { return outside_regime_; }
  const std::map<std::uint64_t, double>& partial_sums() const { return partial_sums_; }

 private:
  PredictorKind kind_;
  int k_;
  ApproxFunction psi_;
  bool outside_regime_ = false;
  std::map<std::uint64_t, double> partial_sums_;
};

}  // namespace multcount
