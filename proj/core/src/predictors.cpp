#include "multcount/predictors.hpp"

#include <cmath>
#include <stdexcept>

#include "multcount/geometry.hpp"
#include "multcount/summation.hpp"

namespace multcount {
namespace {

double int_pow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

double factorial(int m) {
  double f = 1.0;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

}  // namespace

const char* to_string(PredictorKind kind) {
  switch (kind) {
    case PredictorKind::Simultaneous: return "simultaneous";
    case PredictorKind::Multiplicative: return "multiplicative";
    case PredictorKind::MultiplicativeLog: return "multiplicative_log";
    case PredictorKind::CoprimeWeighted: return "coprime_weighted";
    case PredictorKind::VolumeSum: return "volume_sum";
    case PredictorKind::VolumeUniform: return "volume_uniform";
  }
  return "?";
}

double simultaneous_sum(std::uint64_t n_max, int k, const ApproxFunction& psi) {
  if (k < 1) throw std::invalid_argument("simultaneous_sum: k must be >= 1");
  KahanSum sum;
  for (std::uint64_t n = 1; n <= n_max; ++n) sum.add(int_pow(2.0 * psi(n), k));
  return sum.value();
}

MultiplicativeSum multiplicative_sum(std::uint64_t n_max, int k, const ApproxFunction& psi) {
  if (k < 1) throw std::invalid_argument("multiplicative_sum: k must be >= 1");
  double inv_fact = 1.0 / factorial(k - 1);
  KahanSum sum;
  MultiplicativeSum out;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    double v = psi(n);
    if (v == 0.0) continue;  // x (-log x)^d -> 0 at x = 0
    double scaled = std::ldexp(v, k);
    if (scaled > 1.0) out.outside_regime = true;
    sum.add(inv_fact * v * int_pow(-std::log(scaled), k - 1));
  }
  out.value = sum.value();
  return out;
}

double multiplicative_log_sum(std::uint64_t n_max, int k, const ApproxFunction& psi) {
  if (k < 1) throw std::invalid_argument("multiplicative_log_sum: k must be >= 1");
  KahanSum sum;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    if (n == 1) {
      if (k == 1) sum.add(psi(1));  // (log 1)^0 = 1; the term vanishes for k >= 2
      continue;
    }
    sum.add(psi(n) * int_pow(std::log(static_cast<double>(n)), k - 1));
  }
  return sum.value();
}

double coprime_weighted_sum(std::uint64_t n_max, const ApproxFunction& psi,
                            std::span<const std::uint32_t> phi) {
  if (phi.size() < n_max + 1) throw std::invalid_argument("coprime_weighted_sum: phi table too short");
  KahanSum sum;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    double ratio = static_cast<double>(phi[n]) / static_cast<double>(n);
    sum.add(2.0 * ratio * psi(n));
  }
  return sum.value();
}

double volume_sum(std::uint64_t n_max, int k, const ApproxFunction& psi) {
  if (k < 1) throw std::invalid_argument("volume_sum: k must be >= 1");
  KahanSum sum;
  for (std::uint64_t n = 1; n <= n_max; ++n) sum.add(nearest_product_measure(k, psi(n)));
  return sum.value();
}

double volume_sum_uniform(std::uint64_t n_max, int k, const ApproxFunction& psi) {
  if (k < 1) throw std::invalid_argument("volume_sum_uniform: k must be >= 1");
  if (n_max == 0) return 0.0;
  return static_cast<double>(n_max) * nearest_product_measure(k, psi(n_max));
}

PredictorSeries::PredictorSeries(PredictorKind kind, int k, ApproxFunction psi)
    : kind_(kind), k_(k), psi_(std::move(psi)) {
  if (k < 1) throw std::invalid_argument("PredictorSeries: k must be >= 1");
}

std::vector<double> PredictorSeries::at_checkpoints(std::span<const std::uint64_t> checkpoints,
                                                    std::span<const std::uint32_t> phi) {
  std::vector<double> out;
  out.reserve(checkpoints.size());
  if (checkpoints.empty()) return out;
  if (checkpoints.front() < 1) {
    throw std::invalid_argument("PredictorSeries: checkpoints must be >= 1");
  }
  for (std::size_t i = 1; i < checkpoints.size(); ++i) {
    if (checkpoints[i] <= checkpoints[i - 1]) {
      throw std::invalid_argument("PredictorSeries: checkpoints must be strictly increasing");
    }
  }
  std::uint64_t last = checkpoints.back();

  // VolumeUniform is not a running sum; each checkpoint re-freezes psi(N).
  if (kind_ == PredictorKind::VolumeUniform) {
    for (std::uint64_t n : checkpoints) {
      double v = volume_sum_uniform(n, k_, psi_);
      partial_sums_[n] = v;
      out.push_back(v);
    }
    return out;
  }

  if (kind_ == PredictorKind::CoprimeWeighted && phi.size() < last + 1) {
    throw std::invalid_argument("PredictorSeries: phi table too short");
  }

  double inv_fact = 1.0 / factorial(k_ - 1);
  KahanSum sum;
  std::size_t next = 0;
  for (std::uint64_t n = 1; n <= last; ++n) {
    double term = 0.0;
    double v = psi_(n);
    switch (kind_) {
      case PredictorKind::Simultaneous:
        term = int_pow(2.0 * v, k_);
        break;
      case PredictorKind::Multiplicative:
        if (v > 0.0) {
          double scaled = std::ldexp(v, k_);
          if (scaled > 1.0) outside_regime_ = true;
          term = inv_fact * v * int_pow(-std::log(scaled), k_ - 1);
        }
        break;
      case PredictorKind::MultiplicativeLog:
        term = n == 1 ? (k_ == 1 ? v : 0.0)
                      : v * int_pow(std::log(static_cast<double>(n)), k_ - 1);
        break;
      case PredictorKind::CoprimeWeighted:
        term = 2.0 * (static_cast<double>(phi[n]) / static_cast<double>(n)) * v;
        break;
      case PredictorKind::VolumeSum:
        term = nearest_product_measure(k_, v);
        break;
      case PredictorKind::VolumeUniform:
        break;  // handled above
    }
    sum.add(term);
    while (next < checkpoints.size() && n == checkpoints[next]) {
      partial_sums_[n] = sum.value();
      out.push_back(sum.value());
      ++next;
    }
  }
  return out;
}

}  // namespace multcount
