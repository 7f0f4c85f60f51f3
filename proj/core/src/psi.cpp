#include "multcount/psi.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "multcount/sieve.hpp"
#include "multcount/summation.hpp"

namespace multcount {
namespace {

constexpr double kHalf = 0.5;

double clamp_half(double v) {
  if (!(v > 0.0)) return 0.0;  // negatives and NaN clamp to 0
  return v > kHalf ? kHalf : v;
}

std::vector<double> split_params(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) throw std::invalid_argument("psi spec: empty parameter");
    std::size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("psi spec: bad number '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

std::string shortest(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string canonical_spec(PsiFamily family, double c, double kappa, double a,
                           const std::vector<double>& table) {
  switch (family) {
    case PsiFamily::Constant:
      return "constant:" + shortest(c);
    case PsiFamily::PowerLog:
      return "powerlog:" + shortest(c) + "," + shortest(kappa) + "," + shortest(a);
    case PsiFamily::Table: {
      std::string s = "table:";
      for (std::size_t i = 0; i < table.size(); ++i) {
        if (i) s += ',';
        s += shortest(table[i]);
      }
      return s;
    }
  }
  return {};
}

}  // namespace

ApproxFunction ApproxFunction::constant(double c) {
  if (!(c >= 0.0 && c <= kHalf)) {
    throw std::invalid_argument("ApproxFunction::constant: c must lie in [0, 1/2]");
  }
  ApproxFunction f;
  f.family_ = PsiFamily::Constant;
  f.c_ = c;
  f.spec_ = canonical_spec(f.family_, c, 0, 0, {});
  f.derive_flags();
  return f;
}

ApproxFunction ApproxFunction::power_log(double c, double kappa, double a) {
  if (!(c > 0.0)) throw std::invalid_argument("ApproxFunction::power_log: c must be > 0");
  if (!(kappa >= 0.0)) throw std::invalid_argument("ApproxFunction::power_log: kappa must be >= 0");
  if (!std::isfinite(a)) throw std::invalid_argument("ApproxFunction::power_log: a must be finite");
  ApproxFunction f;
  f.family_ = PsiFamily::PowerLog;
  f.c_ = c;
  f.kappa_ = kappa;
  f.a_ = a;
  f.spec_ = canonical_spec(f.family_, c, kappa, a, {});
  f.derive_flags();
  return f;
}

ApproxFunction ApproxFunction::table(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("ApproxFunction::table: empty table");
  for (double& v : values) v = clamp_half(v);
  ApproxFunction f;
  f.family_ = PsiFamily::Table;
  f.table_ = std::move(values);
  f.spec_ = canonical_spec(f.family_, 0, 0, 0, f.table_);
  f.derive_flags();
  return f;
}

ApproxFunction ApproxFunction::parse(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("psi spec: expected family:params");
  std::string family = spec.substr(0, colon);
  auto params = split_params(spec.substr(colon + 1));
  if (family == "constant") {
    if (params.size() != 1) throw std::invalid_argument("psi spec: constant takes one parameter");
    return constant(params[0]);
  }
  if (family == "powerlog") {
    if (params.size() != 3) throw std::invalid_argument("psi spec: powerlog takes c,kappa,a");
    return power_log(params[0], params[1], params[2]);
  }
  if (family == "table") {
    return table(std::move(params));
  }
  throw std::invalid_argument("psi spec: unknown family '" + family + "'");
}

double ApproxFunction::eval_raw(std::uint64_t n) const {
  if (n == 0) throw std::invalid_argument("psi: n must be >= 1");
  switch (family_) {
    case PsiFamily::Constant:
      return c_;
    case PsiFamily::PowerLog: {
      double v = c_;
      if (kappa_ != 0.0) {
        v *= kappa_ == 1.0 ? 1.0 / static_cast<double>(n)
                           : std::pow(static_cast<double>(n), -kappa_);
      }
      if (a_ != 0.0) v *= std::pow(std::log(static_cast<double>(n) + 1.0), -a_);
      return v;
    }
    case PsiFamily::Table:
      if (n > table_.size()) throw std::out_of_range("psi table: n past end of table");
      return table_[n - 1];
  }
  return 0.0;
}

double ApproxFunction::operator()(std::uint64_t n) const { return clamp_half(eval_raw(n)); }

bool ApproxFunction::clamped_at(std::uint64_t n) const {
  double raw = eval_raw(n);
  return raw != clamp_half(raw);
}

void ApproxFunction::derive_flags() {
  switch (family_) {
    case PsiFamily::Constant:
      non_increasing_ = true;
      vanishing_ = (c_ == 0.0);
      return;
    case PsiFamily::PowerLog: {
      vanishing_ = kappa_ > 0.0 || (kappa_ == 0.0 && a_ > 0.0);
      // Scan the head, where clamping and the log factor interact; past the
      // scan the sign of the derivative is decided by (kappa, a).
      bool ok = true;
      double prev = (*this)(1);
      for (std::uint64_t n = 2; n <= 10000; ++n) {
        double cur = (*this)(n);
        if (cur > prev) {
          ok = false;
          break;
        }
        prev = cur;
      }
      bool tail_monotone;
      if (kappa_ == 0.0) {
        tail_monotone = a_ >= 0.0;
      } else if (a_ >= 0.0) {
        tail_monotone = true;
      } else {
        // c n^-kappa log(n+1)^|a| peaks near exp(|a|/kappa); only certify
        // when the peak lies inside the scanned head.
        tail_monotone = std::exp(-a_ / kappa_) < 9000.0;
      }
      non_increasing_ = ok && tail_monotone;
      return;
    }
    case PsiFamily::Table: {
      non_increasing_ = true;
      for (std::size_t i = 1; i < table_.size(); ++i) {
        if (table_[i] > table_[i - 1]) {
          non_increasing_ = false;
          break;
        }
      }
      vanishing_ = table_.back() == 0.0;
      return;
    }
  }
}

ApproxFunction& ApproxFunction::declare_power_bound(double kappa) {
  power_bound_kappa_ = kappa;
  return *this;
}

bool ApproxFunction::power_bounded(double kappa, std::uint64_t scan_to,
                                   std::uint64_t* clamp_note) const {
  if (!(kappa > 0.0)) return false;
  std::uint64_t limit = scan_to;
  if (family_ == PsiFamily::Table) limit = std::min<std::uint64_t>(limit, table_.size());
  for (std::uint64_t n = 1; n <= limit; ++n) {
    double bound = std::pow(static_cast<double>(n), -kappa);
    double v = (*this)(n);
    if (!(v < bound)) return false;
    if (clamp_note && *clamp_note == 0 && clamped_at(n) && !(eval_raw(n) < bound)) {
      *clamp_note = n;  // the clamp, not the formula, kept the bound
    }
  }
  // Tail sign beyond the scan.
  if (family_ == PsiFamily::Constant && c_ > 0.0) return false;
  if (family_ == PsiFamily::PowerLog) {
    if (kappa_ < kappa) return false;
    if (kappa_ == kappa) {
      if (a_ < 0.0) return false;
      if (a_ == 0.0 && !(c_ < 1.0)) return false;
    }
  }
  return true;
}

const char* to_string(HypothesisSet set) {
  switch (set) {
    case HypothesisSet::ZeroOneSimultaneous: return "zero_one_simultaneous";
    case HypothesisSet::ZeroOneMultiplicative: return "zero_one_multiplicative";
    case HypothesisSet::SimultaneousCounting: return "simultaneous_counting";
    case HypothesisSet::MultiplicativeCounting: return "multiplicative_counting";
    case HypothesisSet::InhomogeneousCounting: return "inhomogeneous_counting";
    case HypothesisSet::FibreCounting: return "fibre_counting";
    case HypothesisSet::CoprimeCounting: return "coprime_counting";
  }
  return "?";
}

bool HypothesisReport::all_hold() const {
  for (const auto& c : checks) {
    if (c.status != CheckStatus::Holds) return false;
  }
  return true;
}

std::string HypothesisReport::summary_line() const {
  std::string s = to_string(set);
  for (const auto& c : checks) {
    s += ' ';
    s += c.name;
    s += '=';
    s += c.status == CheckStatus::Holds ? "holds"
         : c.status == CheckStatus::Fails ? "fails"
                                          : "unknown";
  }
  return s;
}

namespace {

// Probe partial sums S(probe/10) and S(probe) of a per-n series and decide
// divergence by relative growth over the last decade.
template <class Term>
void probe_series(HypothesisReport& report, const char* name, std::uint64_t probe_n,
                  Term term) {
  KahanSum sum;
  double at_tenth = 0.0;
  std::uint64_t tenth = probe_n / 10;
  for (std::uint64_t n = 1; n <= probe_n; ++n) {
    sum.add(term(n));
    if (n == tenth) at_tenth = sum.value();
  }
  report.series_name = name;
  report.series_value = sum.value();
  if (sum.value() <= 0.0) {
    report.series = SeriesVerdict::Converges;
    report.series_growth = 1.0;
  } else if (at_tenth <= 0.0) {
    report.series = SeriesVerdict::Inconclusive;
    report.series_growth = 0.0;
  } else {
    report.series_growth = sum.value() / at_tenth;
    report.series = report.series_growth >= 1.02 ? SeriesVerdict::Diverges
                                                 : SeriesVerdict::Converges;
  }
  HypothesisCheck check;
  check.name = std::string(name) + "_unbounded";
  check.status = report.series == SeriesVerdict::Diverges ? CheckStatus::Holds
                : report.series == SeriesVerdict::Converges ? CheckStatus::Fails
                                                            : CheckStatus::Unknown;
  char buf[96];
  std::snprintf(buf, sizeof buf, "S(%llu)=%.6g growth=%.6g",
                static_cast<unsigned long long>(probe_n), report.series_value,
                report.series_growth);
  check.note = buf;
  report.checks.push_back(std::move(check));
}

HypothesisCheck monotone_check(const ApproxFunction& f, std::uint64_t scan_to) {
  HypothesisCheck c;
  c.name = "non_increasing";
  if (!f.non_increasing()) {
    c.status = CheckStatus::Fails;
    return c;
  }
  std::uint64_t limit = scan_to;
  if (f.family() == PsiFamily::Table) limit = std::min<std::uint64_t>(limit, f.table_size());
  double prev = f(1);
  for (std::uint64_t n = 2; n <= limit; ++n) {
    double cur = f(n);
    if (cur > prev) {
      c.status = CheckStatus::Fails;
      c.note = "increase at n=" + std::to_string(n);
      return c;
    }
    prev = cur;
  }
  c.status = CheckStatus::Holds;
  return c;
}

HypothesisCheck vanishing_check(const ApproxFunction& f) {
  HypothesisCheck c;
  c.name = "vanishing";
  c.status = f.vanishing() ? CheckStatus::Holds : CheckStatus::Fails;
  return c;
}

HypothesisCheck power_bound_check(const ApproxFunction& f, std::optional<double> kappa,
                                  std::uint64_t scan_to) {
  HypothesisCheck c;
  c.name = "power_bounded";
  if (!kappa) {
    c.status = CheckStatus::Unknown;
    c.note = "no kappa declared";
    return c;
  }
  std::uint64_t clamp_note = 0;
  bool ok = f.power_bounded(*kappa, scan_to, &clamp_note);
  c.status = ok ? CheckStatus::Holds : CheckStatus::Fails;
  char buf[80];
  std::snprintf(buf, sizeof buf, "kappa=%.6g", *kappa);
  c.note = buf;
  if (ok && clamp_note != 0) {
    c.note += "; clamp kept the bound at n=" + std::to_string(clamp_note);
  }
  return c;
}

}  // namespace

HypothesisReport classify(const ApproxFunction& f, HypothesisSet set,
                          const ClassifyOptions& opts) {
  HypothesisReport report;
  report.set = set;
  int k = opts.k;
  std::optional<double> kappa = opts.kappa ? opts.kappa : f.declared_power_bound();

  switch (set) {
    case HypothesisSet::ZeroOneSimultaneous:
      report.checks.push_back(monotone_check(f, opts.monotone_scan));
      probe_series(report, "psi_sum", opts.probe_n, [&](std::uint64_t n) { return f(n); });
      break;
    case HypothesisSet::ZeroOneMultiplicative:
      report.checks.push_back(monotone_check(f, opts.monotone_scan));
      probe_series(report, "psi_logpow_sum", opts.probe_n, [&](std::uint64_t n) {
        return f(n) * std::pow(std::log(static_cast<double>(n)), k - 1);
      });
      break;
    case HypothesisSet::SimultaneousCounting:
      report.checks.push_back(monotone_check(f, opts.monotone_scan));
      probe_series(report, "simultaneous_sum", opts.probe_n, [&](std::uint64_t n) {
        return std::pow(2.0 * f(n), k);
      });
      break;
    case HypothesisSet::MultiplicativeCounting:
      report.checks.push_back(monotone_check(f, opts.monotone_scan));
      report.checks.push_back(vanishing_check(f));
      probe_series(report, "multiplicative_sum", opts.probe_n, [&](std::uint64_t n) {
        double v = f(n);
        if (v <= 0.0) return 0.0;
        double fact = 1.0;
        for (int s = 2; s < k; ++s) fact *= s;
        return v * std::pow(-std::log(std::ldexp(v, k)), k - 1) / fact;
      });
      break;
    case HypothesisSet::InhomogeneousCounting:
    case HypothesisSet::FibreCounting:
      report.checks.push_back(monotone_check(f, opts.monotone_scan));
      report.checks.push_back(power_bound_check(f, kappa, std::min<std::uint64_t>(opts.monotone_scan, 100000)));
      probe_series(report, "multiplicative_log_sum", opts.probe_n, [&](std::uint64_t n) {
        return f(n) * std::pow(std::log(static_cast<double>(n)), k - 1);
      });
      break;
    case HypothesisSet::CoprimeCounting: {
      auto phi = euler_phi_sieve(opts.probe_n);
      probe_series(report, "coprime_weighted_sum", opts.probe_n, [&](std::uint64_t n) {
        return 2.0 * (static_cast<double>(phi[n]) / static_cast<double>(n)) * f(n);
      });
      break;
    }
  }
  return report;
}

}  // namespace multcount
