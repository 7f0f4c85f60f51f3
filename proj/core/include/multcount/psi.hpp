#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace multcount {

enum class PsiFamily { Constant, PowerLog, Table };

// Approximating function psi: N -> [0, 1/2].
//
// PowerLog(c, kappa, a) is min(1/2, c * n^-kappa * log(n+1)^-a), natural
// logs; the n+1 shift keeps n = 1 away from log 1 = 0. Values are clamped
// into [0, 1/2]; clamped_at() exposes where the clamp fired so hypothesis
// reports can mention it.
class ApproxFunction {
 public:
  // c in [0, 1/2].
  static ApproxFunction constant(double c);
  // c > 0, kappa >= 0, a arbitrary.
  static ApproxFunction power_log(double c, double kappa, double a);
  // Values clamped into [0, 1/2]; index n evaluates values[n-1].
  static ApproxFunction table(std::vector<double> values);

  // "constant:0.25", "powerlog:1,1,0", "table:0.5,0.25,...".
  static ApproxFunction parse(const std::string& spec);

  // psi(n), clamped. n >= 1; Table throws std::out_of_range past the end.
  double operator()(std::uint64_t n) const;

  // Unclamped value of the underlying formula.
  double eval_raw(std::uint64_t n) const;
  bool clamped_at(std::uint64_t n) const;

  PsiFamily family() const { return family_; }
  const std::string& spec() const { return spec_; }
  std::uint64_t table_size() const { return table_.size(); }

  // Hypothesis flags, established at construction (scan plus the family's
  // asymptotic sign for the parametric families, exact for tables).
  bool non_increasing() const { return non_increasing_; }
  bool vanishing() const { return vanishing_; }

  // Declared power bound: psi(n) < n^-kappa for all n is part of some
  // hypothesis bundles; the declared kappa rides along with the function.
  std::optional<double> declared_power_bound() const { return power_bound_kappa_; }
  ApproxFunction& declare_power_bound(double kappa);

  // Checks psi(n) < n^-kappa for n <= scan_to; `clamp_note` (if given)
  // receives the first n where only the clamp saved the bound.
  bool power_bounded(double kappa, std::uint64_t scan_to = 100000,
                     std::uint64_t* clamp_note = nullptr) const;

 private:
  ApproxFunction() = default;
  void derive_flags();

  PsiFamily family_ = PsiFamily::Constant;
  double c_ = 0.0;
  double kappa_ = 0.0;
  double a_ = 0.0;
  std::vector<double> table_;
  std::string spec_;
  bool non_increasing_ = true;
  bool vanishing_ = false;
  std::optional<double> power_bound_kappa_;
};

// Hypothesis bundles of the counting statements this library verifies, named
// by what each statement counts.
enum class HypothesisSet {
  ZeroOneSimultaneous,    // k=1 full/null dichotomy, series sum psi(n)
  ZeroOneMultiplicative,  // product form, series sum psi(n) (log n)^{k-1}
  SimultaneousCounting,   // non-increasing + sum (2 psi)^k unbounded
  MultiplicativeCounting, // non-increasing + psi -> 0 + multiplicative sum unbounded
  InhomogeneousCounting,  // non-increasing + psi(n) < n^-kappa + log-weight sum unbounded
  FibreCounting,          // same psi hypotheses as InhomogeneousCounting
  CoprimeCounting,        // coprime-weighted sum unbounded
};

const char* to_string(HypothesisSet set);

enum class CheckStatus { Holds, Fails, Unknown };
enum class SeriesVerdict { Diverges, Converges, Inconclusive };

struct HypothesisCheck {
  std::string name;
  CheckStatus status = CheckStatus::Unknown;
  std::string note;
};

struct HypothesisReport {
  HypothesisSet set = HypothesisSet::SimultaneousCounting;
  std::vector<HypothesisCheck> checks;
  std::string series_name;
  SeriesVerdict series = SeriesVerdict::Inconclusive;
  double series_value = 0.0;       // partial sum at probe_n
  double series_growth = 0.0;      // S(probe) / S(probe/10)
  bool all_hold() const;
  std::string summary_line() const;
};

struct ClassifyOptions {
  int k = 2;
  std::optional<double> kappa;        // overrides the declared power bound
  std::uint64_t probe_n = 1000000;    // partial-sum probe for "unbounded"
  std::uint64_t monotone_scan = 1000000;
};

// Which hypotheses of the given statement hold for f. "Unbounded" is decided
// empirically: diverges iff S(probe)/S(probe/10) >= 1.02 (a partial-sum
// growth probe, deliberately decidable rather than symbolic).
HypothesisReport classify(const ApproxFunction& f, HypothesisSet set,
                          const ClassifyOptions& opts = {});

}  // namespace multcount
