#include "multcount/sieve.hpp"

#include <stdexcept>

namespace multcount {

std::vector<std::uint32_t> euler_phi_sieve(std::uint64_t n, std::uint64_t budget_bytes) {
  if (n >= (1ull << 32)) {
    throw std::length_error("euler_phi_sieve: n exceeds 32-bit sieve range");
  }
  // phi array + smallest-prime bookkeeping, roughly 9 bytes per entry.
  if ((n + 1) * 9 > budget_bytes) {
    throw std::length_error("euler_phi_sieve: memory budget exceeded");
  }
  std::vector<std::uint32_t> phi(n + 1, 0);
  if (n >= 1) phi[1] = 1;
  std::vector<std::uint32_t> primes;
  primes.reserve(n > 16 ? static_cast<std::size_t>(n / 8) : 8);
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (phi[i] == 0) {
      phi[i] = static_cast<std::uint32_t>(i - 1);
      primes.push_back(static_cast<std::uint32_t>(i));
    }
    for (std::uint32_t p : primes) {
      std::uint64_t ip = i * p;
      if (ip > n) break;
      if (i % p == 0) {
        phi[ip] = phi[i] * p;
        break;
      }
      phi[ip] = phi[i] * (p - 1);
    }
  }
  return phi;
}

}  // namespace multcount
