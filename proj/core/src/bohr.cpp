#include "multcount/bohr.hpp"

#include <cmath>
#include <stdexcept>

#include "multcount/summation.hpp"

namespace multcount {

void BohrSetSpec::validate() const {
  if (alpha.empty()) throw std::invalid_argument("bohr: alpha must have length >= 1");
  if (!gamma.empty() && gamma.size() != alpha.size()) {
    throw std::invalid_argument("bohr: gamma length must match alpha");
  }
  if (delta.size() != alpha.size()) {
    throw std::invalid_argument("bohr: delta length must match alpha");
  }
  for (double d : delta) {
    if (!(d > 0.0 && d <= 0.5)) throw std::invalid_argument("bohr: delta must lie in (0, 1/2]");
  }
  if (n_max < 1) throw std::invalid_argument("bohr: N must be >= 1");
}

EpsilonChoice select_epsilon(int k, double w, double kappa) {
  if (k < 2) throw std::domain_error("select_epsilon: k must be >= 2");
  if (!(w > 0.0)) throw std::domain_error("select_epsilon: w must be > 0");
  if (!(kappa > 0.0)) throw std::domain_error("select_epsilon: kappa must be > 0");
  // 1/w - (k-2)/(k-1) must be positive, i.e. w < (k-1)/(k-2); for k = 2 the
  // right side is infinite and any positive w passes.
  double slack = 1.0 / w - static_cast<double>(k - 2) / static_cast<double>(k - 1);
  if (!(slack > 0.0)) {
    throw std::domain_error("select_epsilon: fibre hypothesis violated (w too large)");
  }
  double m = std::min(slack, kappa);
  while (m >= 1.0) m *= 0.5;  // membership in (0,1)
  double root = m / (10.0 * static_cast<double>(k));
  return EpsilonChoice{root * root, w, kappa, k};
}

namespace {

struct DeltaBounds {
  // d <= delta * 2^64 iff d <= floor(delta * 2^64); delta <= 1/2 keeps the
  // scale below 2^63.
  std::vector<std::uint64_t> bound;

  explicit DeltaBounds(const BohrSetSpec& spec) {
    bound.reserve(spec.delta.size());
    for (double d : spec.delta) {
      bound.push_back(static_cast<std::uint64_t>(std::ldexp(d, 64)));
    }
  }
};

bool bohr_member(const BohrSetSpec& spec, const DeltaBounds& b, std::int64_t n) {
  for (std::size_t i = 0; i < spec.alpha.size(); ++i) {
    std::uint64_t d = nearest_dist_raw(frac_mul_signed(n, spec.alpha[i]), spec.gamma_at(i));
    if (d > b.bound[i]) return false;
  }
  return true;
}

}  // namespace

std::vector<std::int64_t> enumerate_bohr_set(const BohrSetSpec& spec) {
  spec.validate();
  DeltaBounds b(spec);
  std::vector<std::int64_t> out;
  auto n_max = static_cast<std::int64_t>(spec.n_max);
  for (std::int64_t n = -n_max; n <= n_max; ++n) {
    if (bohr_member(spec, b, n)) out.push_back(n);
  }
  return out;
}

std::uint64_t bohr_set_count(const BohrSetSpec& spec) {
  spec.validate();
  DeltaBounds b(spec);
  std::uint64_t count = 0;
  auto n_max = static_cast<std::int64_t>(spec.n_max);
  for (std::int64_t n = -n_max; n <= n_max; ++n) {
    if (bohr_member(spec, b, n)) ++count;
  }
  return count;
}

BohrDensity bohr_density(const BohrSetSpec& spec) {
  BohrDensity out;
  out.count = bohr_set_count(spec);
  double denom = static_cast<double>(spec.n_max);
  double expected = 2.0 * static_cast<double>(spec.n_max) + 1.0;
  for (double d : spec.delta) {
    denom *= d;
    expected *= std::min(2.0 * d, 1.0);
  }
  out.normalized_ratio = static_cast<double>(out.count) / denom;
  out.expected = expected;
  return out;
}

std::vector<std::int64_t> bohr_set_hat(const BohrSetSpec& spec, double epsilon) {
  spec.validate();
  if (!(epsilon > 0.0)) throw std::domain_error("bohr_set_hat: epsilon must be > 0");
  DeltaBounds b(spec);
  double cut = std::pow(static_cast<double>(spec.n_max), std::sqrt(epsilon));
  auto lo = static_cast<std::int64_t>(std::ceil(cut));
  std::vector<std::int64_t> out;
  for (std::int64_t n = lo; n <= static_cast<std::int64_t>(spec.n_max); ++n) {
    if (bohr_member(spec, b, n)) out.push_back(n);
  }
  return out;
}

bool separated_member(std::span<const Frac64> alpha, std::span<const Frac64> gamma,
                      double epsilon, std::uint64_t n) {
  if (n == 0) return false;
  double root = std::sqrt(epsilon);
  double threshold = std::pow(static_cast<double>(n), -root);
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    Frac64 shift = gamma.empty() ? Frac64{} : gamma[i];
    std::uint64_t d = nearest_dist_raw(frac_mul(n, alpha[i]), shift);
    double dist = std::ldexp(static_cast<double>(d), -64);
    if (!(dist >= threshold)) return false;  // ties are members
  }
  return true;
}

std::vector<std::uint64_t> separated_set(std::span<const Frac64> alpha,
                                         std::span<const Frac64> gamma, double epsilon,
                                         std::uint64_t n_max) {
  if (alpha.empty()) throw std::invalid_argument("separated_set: alpha must be nonempty");
  if (!(epsilon > 0.0)) throw std::domain_error("separated_set: epsilon must be > 0");
  double root = std::sqrt(epsilon);
  std::vector<std::uint64_t> cur(alpha.size(), 0);
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    double threshold = std::pow(static_cast<double>(n), -root);
    bool member = true;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      cur[i] += alpha[i].raw;
      std::uint64_t d = nearest_dist_raw(Frac64{cur[i]}, gamma.empty() ? Frac64{} : gamma[i]);
      if (member) {
        double dist = std::ldexp(static_cast<double>(d), -64);
        if (!(dist >= threshold)) member = false;
      }
    }
    if (member) out.push_back(n);
  }
  return out;
}

double separated_weight_sum(std::span<const Frac64> alpha, std::span<const Frac64> gamma,
                            const ApproxFunction& psi, double epsilon, std::uint64_t n_max,
                            std::span<const std::uint32_t> phi) {
  if (alpha.empty()) throw std::invalid_argument("separated_weight_sum: alpha must be nonempty");
  if (!(epsilon > 0.0)) throw std::domain_error("separated_weight_sum: epsilon must be > 0");
  if (phi.size() < n_max + 1) throw std::invalid_argument("separated_weight_sum: phi table too short");
  double root = std::sqrt(epsilon);
  std::size_t kf = alpha.size();
  std::vector<std::uint64_t> cur(kf, 0);
  KahanSum sum;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    double threshold = std::pow(static_cast<double>(n), -root);
    bool member = true;
    double log2_product = 0.0;
    for (std::size_t i = 0; i < kf; ++i) {
      cur[i] += alpha[i].raw;
      std::uint64_t d = nearest_dist_raw(Frac64{cur[i]}, gamma.empty() ? Frac64{} : gamma[i]);
      if (member) {
        double dist = std::ldexp(static_cast<double>(d), -64);
        if (!(dist >= threshold)) {
          member = false;
        } else {
          log2_product += std::log2(static_cast<double>(d));
        }
      }
    }
    if (!member) continue;
    // members exclude zero distances by definition, so the product is positive
    double inv_product = std::exp2(64.0 * static_cast<double>(kf) - log2_product);
    double term = static_cast<double>(phi[n]) * psi(n) / static_cast<double>(n) * inv_product;
    sum.add(term);
  }
  return sum.value();
}

DyadicGrid dyadic_delta_grid(std::uint64_t n_max, int k, double epsilon) {
  if (n_max < 4) throw std::invalid_argument("dyadic_delta_grid: N must be >= 4");
  if (k < 2) throw std::invalid_argument("dyadic_delta_grid: k must be >= 2");
  if (!(epsilon > 0.0)) throw std::domain_error("dyadic_delta_grid: epsilon must be > 0");
  DyadicGrid grid;
  // 2^-j in [N^-sqrt(eps), 1/2] iff 1 <= j <= sqrt(eps) log2 N
  grid.per_axis = static_cast<int>(std::floor(std::sqrt(epsilon) *
                                              std::log2(static_cast<double>(n_max))));
  int axes = k - 1;
  if (grid.per_axis < 1) return grid;
  std::uint64_t total = 1;
  for (int i = 0; i < axes; ++i) total *= static_cast<std::uint64_t>(grid.per_axis);
  grid.cells.reserve(total);
  std::vector<int> j(axes, 1);
  for (;;) {
    std::vector<double> cell(axes);
    for (int i = 0; i < axes; ++i) cell[i] = std::ldexp(1.0, -j[i]);
    grid.cells.push_back(std::move(cell));
    int axis = axes - 1;
    while (axis >= 0) {
      if (++j[axis] <= grid.per_axis) break;
      j[axis] = 1;
      --axis;
    }
    if (axis < 0) break;
  }
  return grid;
}

}  // namespace multcount
