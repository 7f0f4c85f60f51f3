#include "multcount/counting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "multcount/parallel.hpp"

namespace multcount {

const char* to_string(CountMode mode) {
  switch (mode) {
    case CountMode::Simultaneous: return "simultaneous";
    case CountMode::Multiplicative: return "multiplicative";
    case CountMode::MultiplicativeUniform: return "uniform";
    case CountMode::CoprimePairs: return "coprime";
    case CountMode::RelaxedPairs: return "relaxed";
  }
  return "?";
}

CountMode count_mode_from_string(const std::string& s) {
  if (s == "simultaneous") return CountMode::Simultaneous;
  if (s == "multiplicative") return CountMode::Multiplicative;
  if (s == "uniform") return CountMode::MultiplicativeUniform;
  if (s == "coprime") return CountMode::CoprimePairs;
  if (s == "relaxed") return CountMode::RelaxedPairs;
  throw std::invalid_argument("unknown count mode '" + s + "'");
}

void CountQuery::validate() const {
  if (alpha.empty()) throw std::invalid_argument("count: alpha must have length >= 1");
  if (!gamma.empty() && gamma.size() != alpha.size()) {
    throw std::invalid_argument("count: gamma length must match alpha");
  }
  if (n_max < 1) throw std::invalid_argument("count: N must be >= 1");
  if (psi.family() == PsiFamily::Table && psi.table_size() < n_max) {
    throw std::invalid_argument("count: psi table does not cover [1, N]");
  }
  switch (mode) {
    case CountMode::Simultaneous:
      break;
    case CountMode::Multiplicative:
    case CountMode::MultiplicativeUniform:
      if (alpha.size() < 2) throw std::invalid_argument("count: multiplicative modes need k >= 2");
      break;
    case CountMode::CoprimePairs:
      if (alpha.size() != 1) throw std::invalid_argument("count: coprime mode needs k = 1");
      break;
    case CountMode::RelaxedPairs:
      if (alpha.size() < 2) throw std::invalid_argument("count: relaxed mode needs k >= 2");
      if (!gamma.empty() && gamma.back().raw != 0)
        throw std::invalid_argument("count: relaxed mode requires gamma_k = 0");
      break;
  }
}

namespace {

// Witness sink used by the serial paths only.
struct Sink {
  std::vector<std::uint64_t>* single = nullptr;
  std::vector<std::pair<std::uint64_t, std::int64_t>>* pairs = nullptr;
  std::size_t cap = 0;
  bool truncated = false;

  void hit(std::uint64_t n) {
    if (!single) return;
    if (single->size() < cap) single->push_back(n);
    else truncated = true;
  }
  void hit_pair(std::uint64_t n, std::int64_t a) {
    if (!pairs) return;
    if (pairs->size() < cap) pairs->emplace_back(n, a);
    else truncated = true;
  }
};

// Per-n strict threshold state for psi(n) * 2^64: d < t with the
// integer/non-integer split hoisted out of the coordinate loop.
struct Strict64 {
  std::uint64_t trunc = 0;
  bool integral = false;
  bool positive = false;

  void set(double psi_n) {
    positive = psi_n > 0.0;
    if (!positive) return;
    double t = std::ldexp(psi_n, 64);  // psi <= 1/2 keeps this below 2^63
    trunc = static_cast<std::uint64_t>(t);
    integral = std::floor(t) == t;
  }
  bool lt(std::uint64_t d) const { return integral ? d < trunc : d <= trunc; }
};

struct Strict128 {
  u128 trunc = 0;
  bool integral = false;
  bool positive = false;

  void set(double psi_n) {
    positive = psi_n > 0.0;
    if (!positive) return;
    double t = std::ldexp(psi_n, 128);
    trunc = static_cast<u128>(t);
    integral = std::floor(t) == t;
  }
  bool lt(u128 p) const { return integral ? p < trunc : p <= trunc; }
};

struct Coords {
  std::vector<std::uint64_t> step;
  std::vector<std::uint64_t> shift;

  explicit Coords(const CountQuery& q) {
    std::size_t k = q.alpha.size();
    step.resize(k);
    shift.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
      step[i] = q.alpha[i].raw;
      shift[i] = q.gamma_at(i).raw;
    }
  }
};

std::uint64_t block_simultaneous(const CountQuery& q, const Coords& c, std::uint64_t lo,
                                 std::uint64_t hi, Sink* sink) {
  std::size_t k = c.step.size();
  std::vector<std::uint64_t> cur(k);
  for (std::size_t i = 0; i < k; ++i) cur[i] = (lo - 1) * c.step[i];
  std::uint64_t count = 0;
  Strict64 th;
  for (std::uint64_t n = lo; n <= hi; ++n) {
    for (std::size_t i = 0; i < k; ++i) cur[i] += c.step[i];
    th.set(q.psi(n));
    if (!th.positive) continue;
    bool ok = true;
    for (std::size_t i = 0; i < k; ++i) {
      std::uint64_t d = cur[i] - c.shift[i];
      std::uint64_t nd = 0 - d;
      if (!th.lt(d < nd ? d : nd)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      ++count;
      if (sink) sink->hit(n);
    }
  }
  return count;
}

// Product predicate shared by the multiplicative and relaxed kernels so the
// relaxed-pairs dominance over the multiplicative count is structural.
// k = 2: exact in 128 bits. k >= 3: log2 on exact raws, one conversion each,
// summed in coordinate order.
inline bool product_lt_2(std::uint64_t d0, std::uint64_t d1, const Strict128& th) {
  return th.positive && th.lt(static_cast<u128>(d0) * d1);
}

inline bool product_lt_k(const std::uint64_t* dists, std::size_t k, double psi_n,
                         double log2_psi_n) {
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    if (dists[i] == 0) return psi_n > 0.0;
    s += std::log2(static_cast<double>(dists[i]));
  }
  return s < log2_psi_n + 64.0 * static_cast<double>(k);
}

template <bool Uniform>
std::uint64_t block_multiplicative(const CountQuery& q, const Coords& c, std::uint64_t lo,
                                   std::uint64_t hi, Sink* sink) {
  std::size_t k = c.step.size();
  std::vector<std::uint64_t> cur(k), dist(k);
  for (std::size_t i = 0; i < k; ++i) cur[i] = (lo - 1) * c.step[i];
  std::uint64_t count = 0;

  double psi_fixed = Uniform ? q.psi(q.n_max) : 0.0;
  Strict128 th;
  double log2_psi = 0.0;
  if (Uniform) {
    th.set(psi_fixed);
    log2_psi = psi_fixed > 0.0 ? std::log2(psi_fixed) : 0.0;
  }

  if (k == 2) {
    for (std::uint64_t n = lo; n <= hi; ++n) {
      cur[0] += c.step[0];
      cur[1] += c.step[1];
      if (!Uniform) th.set(q.psi(n));
      if (!th.positive) continue;
      std::uint64_t d0 = cur[0] - c.shift[0];
      std::uint64_t nd0 = 0 - d0;
      d0 = d0 < nd0 ? d0 : nd0;
      std::uint64_t d1 = cur[1] - c.shift[1];
      std::uint64_t nd1 = 0 - d1;
      d1 = d1 < nd1 ? d1 : nd1;
      if (th.lt(static_cast<u128>(d0) * d1)) {
        ++count;
        if (sink) sink->hit(n);
      }
    }
    return count;
  }

  for (std::uint64_t n = lo; n <= hi; ++n) {
    for (std::size_t i = 0; i < k; ++i) cur[i] += c.step[i];
    double psi_n = Uniform ? psi_fixed : q.psi(n);
    if (!(psi_n > 0.0)) continue;
    double lp = Uniform ? log2_psi : std::log2(psi_n);
    for (std::size_t i = 0; i < k; ++i) {
      std::uint64_t d = cur[i] - c.shift[i];
      std::uint64_t nd = 0 - d;
      dist[i] = d < nd ? d : nd;
    }
    if (product_lt_k(dist.data(), k, psi_n, lp)) {
      ++count;
      if (sink) sink->hit(n);
    }
  }
  return count;
}

std::uint64_t block_coprime(const CountQuery& q, const Coords& c, std::uint64_t lo,
                            std::uint64_t hi, Sink* sink) {
  std::uint64_t step = c.step[0];
  std::uint64_t frac = (lo - 1) * step;
  std::uint64_t floor_a =
      static_cast<std::uint64_t>((static_cast<u128>(lo - 1) * step) >> 64);
  std::uint64_t count = 0;
  for (std::uint64_t n = lo; n <= hi; ++n) {
    std::uint64_t prev = frac;
    frac += step;
    if (frac < prev) ++floor_a;  // carry into the integer part
    double t = std::ldexp(q.psi(n), 64);
    auto bound = static_cast<std::uint64_t>(t);  // d <= t iff d <= floor(t)
    if (frac <= bound) {
      if (std::gcd(floor_a, n) == 1) {
        ++count;
        if (sink) sink->hit_pair(n, static_cast<std::int64_t>(floor_a));
      }
    }
    if (frac != 0 && (0 - frac) <= bound) {
      if (std::gcd(floor_a + 1, n) == 1) {
        ++count;
        if (sink) sink->hit_pair(n, static_cast<std::int64_t>(floor_a + 1));
      }
    }
  }
  return count;
}

std::uint64_t block_relaxed(const CountQuery& q, const Coords& c, std::uint64_t lo,
                            std::uint64_t hi, Sink* sink, bool* cap_exceeded) {
  std::size_t k = c.step.size();
  std::size_t kf = k - 1;  // fibre coordinates entering the product
  std::vector<std::uint64_t> cur(k), dist(kf);
  for (std::size_t i = 0; i < k; ++i) cur[i] = (lo - 1) * c.step[i];
  std::uint64_t floor_a =
      static_cast<std::uint64_t>((static_cast<u128>(lo - 1) * c.step[kf]) >> 64);

  const double radius_max = 2.0 * static_cast<double>(q.n_max);
  std::uint64_t count = 0;
  Strict128 th;

  for (std::uint64_t n = lo; n <= hi; ++n) {
    std::uint64_t prev = cur[kf];
    for (std::size_t i = 0; i < k; ++i) cur[i] += c.step[i];
    if (cur[kf] < prev) ++floor_a;

    double psi_n = q.psi(n);
    if (!(psi_n > 0.0)) continue;

    bool zero_product = false;
    for (std::size_t i = 0; i < kf; ++i) {
      std::uint64_t d = cur[i] - c.shift[i];
      std::uint64_t nd = 0 - d;
      dist[i] = d < nd ? d : nd;
      if (dist[i] == 0) zero_product = true;
    }

    std::uint64_t frac = cur[kf];
    double f = std::ldexp(static_cast<double>(frac), -64);

    // radius psi(n) / prod_i dist_i, in units of 1
    double radius;
    if (zero_product) {
      radius = std::numeric_limits<double>::infinity();
    } else if (kf == 1) {
      radius = std::ldexp(psi_n, 64) / static_cast<double>(dist[0]);
    } else {
      double s = 0.0;
      for (std::size_t i = 0; i < kf; ++i) s += std::log2(static_cast<double>(dist[i]));
      radius = std::exp2(std::log2(psi_n) - s + 64.0 * static_cast<double>(kf));
    }

    std::uint64_t local = 0;
    if (!(radius <= radius_max)) {
      // Degenerate fibre: clamp the search radius and flag it.
      *cap_exceeded = true;
      double r = radius_max;
      double x = r - f;
      if (x > 0.0) local += static_cast<std::uint64_t>(std::ceil(x));
      double y = r - (1.0 - f);
      if (y > 0.0) local += static_cast<std::uint64_t>(std::ceil(y));
      if (sink && local > 0) {
        std::uint64_t down = x > 0.0 ? static_cast<std::uint64_t>(std::ceil(x)) : 0;
        for (std::uint64_t j = 0; j < local; ++j) {
          bool below = j < down;
          std::int64_t a = below ? static_cast<std::int64_t>(floor_a) - static_cast<std::int64_t>(j)
                                 : static_cast<std::int64_t>(floor_a) + 1 +
                                       static_cast<std::int64_t>(j - down);
          sink->hit_pair(n, a);
        }
      }
      count += local;
      continue;
    }

    // Nearest candidates decided with the same exact product predicate as the
    // multiplicative counter; outer candidates by the radius formula.
    bool hit_floor, hit_ceil;
    if (zero_product) {
      hit_floor = true;  // psi_n > 0 already checked
      hit_ceil = frac != 0;
    } else if (kf == 1) {
      th.set(psi_n);
      hit_floor = product_lt_2(dist[0], frac, th);
      hit_ceil = frac != 0 && product_lt_2(dist[0], 0 - frac, th);
    } else {
      double lp = std::log2(psi_n);
      std::vector<std::uint64_t> with_last(dist);
      with_last.push_back(frac);
      hit_floor = product_lt_k(with_last.data(), k, psi_n, lp);
      with_last.back() = 0 - frac;
      hit_ceil = frac != 0 && product_lt_k(with_last.data(), k, psi_n, lp);
    }

    if (hit_floor) {
      ++local;
      if (sink) sink->hit_pair(n, static_cast<std::int64_t>(floor_a));
    }
    double x = radius - f;
    if (x > 1.0) {
      auto extra = static_cast<std::uint64_t>(std::ceil(x)) - 1;
      if (sink) {
        for (std::uint64_t j = 1; j <= extra; ++j) {
          sink->hit_pair(n, static_cast<std::int64_t>(floor_a) - static_cast<std::int64_t>(j));
        }
      }
      local += extra;
    }
    if (frac != 0) {
      if (hit_ceil) {
        ++local;
        if (sink) sink->hit_pair(n, static_cast<std::int64_t>(floor_a) + 1);
      }
      double y = radius - (1.0 - f);
      if (y > 1.0) {
        auto extra = static_cast<std::uint64_t>(std::ceil(y)) - 1;
        if (sink) {
          for (std::uint64_t j = 1; j <= extra; ++j) {
            sink->hit_pair(n, static_cast<std::int64_t>(floor_a) + 1 + static_cast<std::int64_t>(j));
          }
        }
        local += extra;
      }
    } else {
      // frac = 0: the upper side starts at distance exactly 1; count it by
      // the radius formula so nothing at distance 1 is missed.
      double y = radius - 1.0;
      if (y > 0.0) {
        auto extra = static_cast<std::uint64_t>(std::ceil(y));
        if (sink) {
          for (std::uint64_t j = 0; j < extra; ++j) {
            sink->hit_pair(n, static_cast<std::int64_t>(floor_a) + 1 + static_cast<std::int64_t>(j));
          }
        }
        local += extra;
      }
    }
    count += local;
  }
  return count;
}

std::uint64_t run_block(const CountQuery& q, const Coords& c, std::uint64_t lo, std::uint64_t hi,
                        Sink* sink, bool* cap_exceeded) {
  switch (q.mode) {
    case CountMode::Simultaneous:
      return block_simultaneous(q, c, lo, hi, sink);
    case CountMode::Multiplicative:
      return block_multiplicative<false>(q, c, lo, hi, sink);
    case CountMode::MultiplicativeUniform:
      return block_multiplicative<true>(q, c, lo, hi, sink);
    case CountMode::CoprimePairs:
      return block_coprime(q, c, lo, hi, sink);
    case CountMode::RelaxedPairs:
      return block_relaxed(q, c, lo, hi, sink, cap_exceeded);
  }
  return 0;
}

}  // namespace

CountResult count(const CountQuery& q, const CountOptions& opts) {
  q.validate();
  Coords coords(q);
  CountResult result;

  if (opts.capture_witnesses) {
    Sink sink;
    sink.cap = opts.witness_cap;
    if (q.mode == CountMode::CoprimePairs || q.mode == CountMode::RelaxedPairs) {
      sink.pairs = &result.pair_witnesses;
    } else {
      sink.single = &result.witnesses;
    }
    bool cap = false;
    result.count = run_block(q, coords, 1, q.n_max, &sink, &cap);
    result.cap_exceeded = cap;
    result.witnesses_truncated = sink.truncated;
    return result;
  }

  int threads = resolve_threads(opts.threads);
  std::uint64_t nblocks = block_count(1, q.n_max);
  std::vector<std::uint64_t> per_block(nblocks, 0);
  std::vector<std::uint8_t> cap_flags(nblocks, 0);
  for_each_block(1, q.n_max, threads, [&](std::uint64_t b, std::uint64_t lo, std::uint64_t hi) {
    bool cap = false;
    per_block[b] = run_block(q, coords, lo, hi, nullptr, &cap);
    cap_flags[b] = cap ? 1 : 0;
  });
  for (std::uint64_t b = 0; b < nblocks; ++b) {
    result.count += per_block[b];
    if (cap_flags[b]) result.cap_exceeded = true;
  }
  return result;
}

namespace {

CountResult count_mode_checked(const CountQuery& q, CountMode expected, const CountOptions& opts) {
  if (q.mode != expected) {
    throw std::invalid_argument(std::string("count: query mode is not ") + to_string(expected));
  }
  return count(q, opts);
}

}  // namespace

CountResult count_simultaneous(const CountQuery& q, const CountOptions& opts) {
  return count_mode_checked(q, CountMode::Simultaneous, opts);
}
CountResult count_multiplicative(const CountQuery& q, const CountOptions& opts) {
  return count_mode_checked(q, CountMode::Multiplicative, opts);
}
CountResult count_multiplicative_uniform(const CountQuery& q, const CountOptions& opts) {
  return count_mode_checked(q, CountMode::MultiplicativeUniform, opts);
}
CountResult count_coprime_pairs(const CountQuery& q, const CountOptions& opts) {
  return count_mode_checked(q, CountMode::CoprimePairs, opts);
}
CountResult count_relaxed_pairs(const CountQuery& q, const CountOptions& opts) {
  return count_mode_checked(q, CountMode::RelaxedPairs, opts);
}

std::vector<std::uint64_t> count_at_checkpoints(const CountQuery& q,
                                                std::span<const std::uint64_t> checkpoints,
                                                int threads) {
  q.validate();
  if (checkpoints.empty()) return {};
  if (checkpoints.front() < 1) throw std::invalid_argument("checkpoints must be >= 1");
  for (std::size_t i = 1; i < checkpoints.size(); ++i) {
    if (checkpoints[i] <= checkpoints[i - 1]) {
      throw std::invalid_argument("checkpoints must be strictly increasing");
    }
  }
  if (checkpoints.back() != q.n_max) {
    throw std::invalid_argument("last checkpoint must equal N");
  }

  Coords coords(q);
  int t = resolve_threads(threads);
  std::vector<std::uint64_t> out;
  out.reserve(checkpoints.size());
  std::uint64_t cumulative = 0;
  std::uint64_t lo = 1;
  for (std::uint64_t ck : checkpoints) {
    std::uint64_t nblocks = block_count(lo, ck);
    std::vector<std::uint64_t> per_block(nblocks, 0);
    for_each_block(lo, ck, t, [&](std::uint64_t b, std::uint64_t blo, std::uint64_t bhi) {
      bool cap = false;
      per_block[b] = run_block(q, coords, blo, bhi, nullptr, &cap);
    });
    for (std::uint64_t v : per_block) cumulative += v;
    out.push_back(cumulative);
    lo = ck + 1;
  }
  return out;
}

}  // namespace multcount
