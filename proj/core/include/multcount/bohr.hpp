#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "multcount/fixed_point.hpp"
#include "multcount/psi.hpp"

namespace multcount {

// Inhomogeneous Bohr set B(N; delta) = {n in Z : |n| <= N,
// ||n alpha_i - gamma_i|| <= delta_i for all i}. Membership is non-strict and
// decided in exact integer arithmetic.
struct BohrSetSpec {
  std::uint64_t n_max = 0;
  std::vector<Frac64> alpha;   // length k-1
  std::vector<Frac64> gamma;   // empty = zeros, else same length
  std::vector<double> delta;   // each in (0, 1/2]

  Frac64 gamma_at(std::size_t i) const { return gamma.empty() ? Frac64{} : gamma[i]; }
  void validate() const;  // throws std::invalid_argument
};

struct EpsilonChoice {
  double epsilon = 0.0;
  double w = 0.0;
  double kappa = 0.0;
  int k = 0;
};

// Extremal epsilon with 10 k sqrt(eps) = m, where m is
// min(1/w - (k-2)/(k-1), kappa) halved until it lies in (0,1).
// Throws std::domain_error when w >= (k-1)/(k-2) (never for k = 2) or
// kappa <= 0 or w <= 0.
EpsilonChoice select_epsilon(int k, double w, double kappa);

// Members of B(N; delta), ascending, including negatives and 0.
std::vector<std::int64_t> enumerate_bohr_set(const BohrSetSpec& spec);

std::uint64_t bohr_set_count(const BohrSetSpec& spec);

struct BohrDensity {
  std::uint64_t count = 0;
  double normalized_ratio = 0.0;  // count / (delta_1...delta_{k-1} N)
  double expected = 0.0;          // (2N+1) prod_i min(2 delta_i, 1)
};

BohrDensity bohr_density(const BohrSetSpec& spec);

// Members of the Bohr set restricted to [N^sqrt(eps), N] (positive side).
std::vector<std::int64_t> bohr_set_hat(const BohrSetSpec& spec, double epsilon);

// The restricted index set {n in [1, N] : ||n alpha_i - gamma_i|| >=
// n^-sqrt(eps) for all i}. Ties count as members. n = 1 never qualifies
// (threshold 1 exceeds the maximal distance 1/2); for epsilon small enough
// that N < 2^(1/sqrt(eps)) the set is empty, since the threshold stays
// above 1/2 over the whole range.
bool separated_member(std::span<const Frac64> alpha, std::span<const Frac64> gamma,
                      double epsilon, std::uint64_t n);

std::vector<std::uint64_t> separated_set(std::span<const Frac64> alpha,
                                         std::span<const Frac64> gamma, double epsilon,
                                         std::uint64_t n_max);

// sum over separated n <= N of phi(n) psi(n) / (n * prod_i ||n a_i - g_i||),
// each term's distance product taken in log2 space on exact raws and
// exponentiated once per term; compensated outer sum. phi covers [0, N].
double separated_weight_sum(std::span<const Frac64> alpha, std::span<const Frac64> gamma,
                            const ApproxFunction& psi, double epsilon, std::uint64_t n_max,
                            std::span<const std::uint32_t> phi);

// All (k-1)-tuples (2^-j_1, ..., 2^-j_{k-1}) with each 2^-j in
// [N^-sqrt(eps), 1/2]. per_axis is floor(sqrt(eps) * log2 N); the grid has
// per_axis^(k-1) cells. n_max >= 4.
struct DyadicGrid {
  int per_axis = 0;
  std::vector<std::vector<double>> cells;
};

DyadicGrid dyadic_delta_grid(std::uint64_t n_max, int k, double epsilon);

}  // namespace multcount
