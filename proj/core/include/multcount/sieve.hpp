#pragma once

#include <cstdint>
#include <vector>

namespace multcount {

// Euler totients phi(0..n) by linear sieve; phi(0) = 0, phi(1) = 1.
// Throws std::length_error when the working set would exceed budget_bytes.
std::vector<std::uint32_t> euler_phi_sieve(std::uint64_t n,
                                           std::uint64_t budget_bytes = (1ull << 31));

}  // namespace multcount
