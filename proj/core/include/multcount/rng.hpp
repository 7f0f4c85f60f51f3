#pragma once

#include <cstdint>

namespace multcount {

// splitmix64 (Steele/Lea/Vigna). Counter-based, so seeding and splitting are
// trivial; the algorithm id travels in output metadata so any run can be
// reproduced bit for bit.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Deterministic seed for child stream `index` (trial, batch, ...). Children
  // are decoupled from the parent sequence, so trial results do not depend on
  // scheduling.
  static std::uint64_t child_seed(std::uint64_t root, std::uint64_t index) {
    SplitMix64 g(root ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    g.next();
    return g.next();
  }

 private:
  std::uint64_t state_;
};

inline constexpr const char* kPrngId = "splitmix64";

}  // namespace multcount
