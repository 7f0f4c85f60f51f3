#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace multcount {

// Explicit request wins, then MULTCOUNT_THREADS, then hardware concurrency.
int resolve_threads(int requested);

// Fixed block length independent of worker count, so per-block results can be
// merged in block order and the merged output never depends on how many
// threads ran.
inline constexpr std::uint64_t kBlockLen = 1u << 20;

inline std::uint64_t block_count(std::uint64_t lo, std::uint64_t hi) {
  return hi < lo ? 0 : (hi - lo + 1 + kBlockLen - 1) / kBlockLen;
}

// fn(block_index, block_lo, block_hi) over [lo, hi]; distinct blocks may run
// concurrently.
template <class Fn>
void for_each_block(std::uint64_t lo, std::uint64_t hi, int threads, Fn&& fn) {
  std::uint64_t nblocks = block_count(lo, hi);
  if (nblocks == 0) return;
  auto run_block = [&](std::uint64_t b) {
    std::uint64_t blo = lo + b * kBlockLen;
    std::uint64_t bhi = std::min(hi, blo + (kBlockLen - 1));
    fn(b, blo, bhi);
  };
  if (threads <= 1 || nblocks == 1) {
    for (std::uint64_t b = 0; b < nblocks; ++b) run_block(b);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::uint64_t b = next.fetch_add(1, std::memory_order_relaxed);
      if (b >= nblocks) return;
      run_block(b);
    }
  };
  std::vector<std::thread> pool;
  std::uint64_t n = std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), nblocks);
  pool.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

}  // namespace multcount
