#pragma once

#include <cmath>
#include <cstdint>

namespace multcount {

using u128 = unsigned __int128;

// 64-bit fixed-point fractional part: value = raw / 2^64 in [0, 1).
//
// Multiplying raw by an integer with wraparound is exactly multiplication of
// the represented value modulo 1, so every ||n*alpha - gamma|| computed below
// is exact for the representative. The only rounding anywhere is the final
// conversion of a distance to double, and the threshold comparison helpers
// at the bottom of this header avoid even that.
struct Frac64 {
  std::uint64_t raw = 0;

  constexpr Frac64() = default;
  constexpr explicit Frac64(std::uint64_t r) : raw(r) {}

  // floor(frac(x) * 2^64) / 2^64. Exact for the value of the double x itself;
  // counts computed downstream are exact for this dyadic representative, not
  // for whatever real x was rounded from. Throws std::invalid_argument on
  // non-finite input.
  static Frac64 from_real(double x);

  // floor((num mod den) * 2^64 / den) / 2^64, exact. den must be nonzero.
  static Frac64 from_ratio(std::uint64_t num, std::uint64_t den);

  // floor(frac(sqrt(m)) * 2^64), exact via a 256-bit integer square root.
  // Perfect squares give raw 0.
  static Frac64 sqrt_frac(std::uint64_t m);

  // frac((sqrt(5) - 1) / 2) to full precision: raw 0x9e3779b97f4a7c15.
  static Frac64 golden();

  double value() const { return std::ldexp(static_cast<double>(raw), -64); }

  friend constexpr bool operator==(Frac64 a, Frac64 b) { return a.raw == b.raw; }
  friend constexpr bool operator!=(Frac64 a, Frac64 b) { return a.raw != b.raw; }
};

// n * a mod 1, exact.
constexpr Frac64 frac_mul(std::uint64_t n, Frac64 a) {
  return Frac64{n * a.raw};
}

// Signed variant; two's-complement wraparound gives n * raw mod 2^64 for
// negative n as well.
constexpr Frac64 frac_mul_signed(std::int64_t n, Frac64 a) {
  return Frac64{static_cast<std::uint64_t>(n) * a.raw};
}

// a + b mod 1, exact. Streaming loops use this to advance n -> n + 1.
constexpr Frac64 frac_add(Frac64 a, Frac64 b) {
  return Frac64{a.raw + b.raw};
}

// Distance to the nearest integer of (a - shift), as a count of 2^-64 units:
// min(d, 2^64 - d) where d = a.raw - shift.raw. At most 2^63.
constexpr std::uint64_t nearest_dist_raw(Frac64 a, Frac64 shift) {
  std::uint64_t d = a.raw - shift.raw;
  std::uint64_t nd = 0 - d;
  return d < nd ? d : nd;
}

// ||x|| = min over integers m of |x - m|, always in [0, 1/2].
struct NearestDist {
  double value = 0.0;
};

inline NearestDist dist_nearest(Frac64 a, Frac64 shift = Frac64{}) {
  return NearestDist{std::ldexp(static_cast<double>(nearest_dist_raw(a, shift)), -64)};
}

// Exact comparisons of an integer against a real threshold. Strict and
// non-strict counting predicates go through these so they never depend on
// rounding the integer side to double.

// v < t
inline bool lt_threshold(std::uint64_t v, double t) {
  if (!(t > 0.0)) return false;
  if (t >= 0x1p64) return true;
  auto fl = std::floor(t);
  auto trunc = static_cast<std::uint64_t>(t);
  return fl == t ? v < trunc : v <= trunc;
}

// v <= t
inline bool le_threshold(std::uint64_t v, double t) {
  if (!(t >= 0.0)) return false;
  if (t >= 0x1p64) return true;
  return v <= static_cast<std::uint64_t>(t);
}

// v < t for 128-bit v (products of two distance raws).
inline bool lt_threshold_u128(u128 v, double t) {
  if (!(t > 0.0)) return false;
  if (t >= 0x1p128) return true;
  auto fl = std::floor(t);
  auto trunc = static_cast<u128>(t);
  return fl == t ? v < trunc : v <= trunc;
}

}  // namespace multcount
