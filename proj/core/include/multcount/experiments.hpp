#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "multcount/counting.hpp"
#include "multcount/io.hpp"
#include "multcount/predictors.hpp"
#include "multcount/psi.hpp"

namespace multcount {

// What a batch of random-alpha trials counts, and which predictor the counts
// are compared against.
enum class StudyKind {
  Simultaneous,   // simultaneous counts vs sum (2 psi)^k, gamma = 0
  Multiplicative, // multiplicative counts vs the multiplicative sum, gamma = 0
  CoprimePairs,   // coprime pair counts vs the coprime-weighted sum, k = 1
  Inhomogeneous,  // shifted multiplicative counts vs the log-weight sum
  Fibre,          // as Inhomogeneous, but only the last coordinate is sampled
  Uniform,        // uniform-threshold counts vs the volume heuristic at psi(N)
};

const char* to_string(StudyKind kind);
StudyKind study_from_string(const std::string& s);

struct FixedFibre {
  std::vector<Frac64> alpha;  // the k-1 fixed coordinates
  double w = 1.0;             // declared multiplicative exponent of the fibre
};

struct ExperimentPlan {
  StudyKind study = StudyKind::Multiplicative;
  int k = 2;
  ApproxFunction psi = ApproxFunction::constant(0.25);
  std::vector<Frac64> gamma;             // empty = zeros; last entry forced to 0
                                         // for Inhomogeneous/Fibre
  std::vector<std::uint64_t> checkpoints;  // strictly increasing
  int trials = 1;
  std::uint64_t seed = 0;
  std::optional<FixedFibre> fibre;       // required for Fibre
  std::optional<double> kappa;           // power-bound hypothesis, Inhomogeneous/Fibre

  void validate() const;  // throws std::invalid_argument
};

struct TrialRecord {
  int trial = 0;
  std::vector<Frac64> alpha;
  struct Cell {
    std::uint64_t n_max = 0;
    std::uint64_t count = 0;
    double predictor = 0.0;
    std::optional<double> ratio;  // omitted when predictor <= 0
  };
  std::vector<Cell> cells;
};

struct CheckpointSummary {
  std::uint64_t n_max = 0;
  double predictor = 0.0;
  double median = 0.0;
  double iqr = 0.0;
  double min = 0.0;
  int omitted = 0;
};

struct PlanResult {
  StudyKind study = StudyKind::Multiplicative;
  int k = 2;
  std::string psi_spec;
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<TrialRecord> records;
  std::vector<CheckpointSummary> summaries;
  HypothesisReport hypotheses;
  bool hypotheses_ok = false;
  // Fibre plans: scan estimate of the fibre's multiplicative exponent,
  // logged next to the declared w as a sanity value.
  std::optional<double> fibre_exponent_scan;
  RunMetadata metadata;
};

// Runs the plan: per trial, sample alpha (Fibre samples only the last
// coordinate), stream the counts through all checkpoints in one pass, and
// attach the matching predictor values (computed once, they do not depend on
// the trial). Trials are independent jobs over a work queue; records land in
// per-trial slots, so output is byte-identical for any thread count.
PlanResult run_plan(const ExperimentPlan& plan, int threads = 1);

// Long-form table (trial, N, count, predictor, ratio); metadata as comment
// lines, stable column order.
void write_ratio_table_csv(std::ostream& os, const PlanResult& result);

// JSON lines: one meta object, one object per trial, one summary object.
void write_ratio_table_json(std::ostream& os, const PlanResult& result);

// Robust per-checkpoint location: median, interquartile range, minimum.
double median_of(std::vector<double> values);
double quantile_of(std::vector<double> values, double q);

}  // namespace multcount
