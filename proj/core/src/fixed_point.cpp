#include "multcount/fixed_point.hpp"

#include <stdexcept>

namespace multcount {
namespace {

struct U256 {
  u128 hi = 0;
  u128 lo = 0;
};

U256 mul_u128(u128 a, u128 b) {
  u128 a_lo = static_cast<std::uint64_t>(a);
  u128 a_hi = a >> 64;
  u128 b_lo = static_cast<std::uint64_t>(b);
  u128 b_hi = b >> 64;

  u128 ll = a_lo * b_lo;
  u128 lh = a_lo * b_hi;
  u128 hl = a_hi * b_lo;
  u128 hh = a_hi * b_hi;

  u128 mid = (ll >> 64) + static_cast<std::uint64_t>(lh) + static_cast<std::uint64_t>(hl);
  U256 r;
  r.lo = (mid << 64) | static_cast<std::uint64_t>(ll);
  r.hi = hh + (lh >> 64) + (hl >> 64) + (mid >> 64);
  return r;
}

bool le_u256(const U256& a, const U256& b) {
  return a.hi != b.hi ? a.hi < b.hi : a.lo <= b.lo;
}

std::uint64_t isqrt_u64(std::uint64_t m) {
  if (m == 0) return 0;
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(m)));
  while (r > 0 && r > m / r) --r;
  while ((r + 1) <= m / (r + 1)) ++r;
  return r;
}

}  // namespace

Frac64 Frac64::from_real(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("Frac64::from_real: non-finite input");
  double ipart;
  double f = std::modf(x, &ipart);  // exact, carries the sign of x
  if (f == 0.0) return Frac64{0};
  if (f > 0.0) {
    // Scaling by 2^64 is exact; truncation is the floor for positive values.
    return Frac64{static_cast<std::uint64_t>(std::ldexp(f, 64))};
  }
  // frac(x) = 1 - g with g = -f in (0,1):
  // floor((1-g) 2^64) = 2^64 - ceil(g 2^64).
  double t = std::ldexp(-f, 64);
  auto fl = static_cast<std::uint64_t>(t);
  bool integral = (t == std::floor(t));
  return Frac64{integral ? (0 - fl) : (0 - fl - 1)};
}

Frac64 Frac64::from_ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw std::invalid_argument("Frac64::from_ratio: zero denominator");
  u128 scaled = static_cast<u128>(num % den) << 64;
  return Frac64{static_cast<std::uint64_t>(scaled / den)};
}

Frac64 Frac64::sqrt_frac(std::uint64_t m) {
  // floor(sqrt(m) * 2^64) - floor(sqrt(m)) * 2^64, found by binary search on
  // the fractional raw; the 130-bit squares are compared in 256 bits.
  std::uint64_t a = isqrt_u64(m);
  U256 target;
  target.hi = m;
  target.lo = 0;
  u128 base = static_cast<u128>(a) << 64;
  std::uint64_t lo = 0, hi = ~0ULL;
  // invariant: (base + lo)^2 <= m 2^128; search the largest such offset
  while (lo < hi) {
    std::uint64_t d = hi - lo;
    std::uint64_t mid = lo + d / 2 + (d & 1);  // ceil midpoint, no overflow
    u128 cand = base + mid;
    if (le_u256(mul_u128(cand, cand), target)) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return Frac64{lo};
}

Frac64 Frac64::golden() {
  // (sqrt(5) - 1) / 2: with R = floor(sqrt(5) 2^64) = 2^65 + f, the floor of
  // (R - 2^64 + theta)/2 is (2^64 + f) >> 1 for either parity of f.
  std::uint64_t f = sqrt_frac(5).raw;
  return Frac64{0x8000000000000000ULL + (f >> 1)};
}

}  // namespace multcount
