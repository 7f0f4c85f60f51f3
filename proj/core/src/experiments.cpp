#include "multcount/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "multcount/bohr.hpp"
#include "multcount/exponents.hpp"
#include "multcount/parallel.hpp"
#include "multcount/rng.hpp"
#include "multcount/sieve.hpp"
#include "multcount/version.hpp"

namespace multcount {

const char* to_string(StudyKind kind) {
  switch (kind) {
    case StudyKind::Simultaneous: return "simultaneous";
    case StudyKind::Multiplicative: return "multiplicative";
    case StudyKind::CoprimePairs: return "coprime";
    case StudyKind::Inhomogeneous: return "inhomogeneous";
    case StudyKind::Fibre: return "fibre";
    case StudyKind::Uniform: return "uniform";
  }
  return "?";
}

StudyKind study_from_string(const std::string& s) {
  if (s == "simultaneous") return StudyKind::Simultaneous;
  if (s == "multiplicative") return StudyKind::Multiplicative;
  if (s == "coprime") return StudyKind::CoprimePairs;
  if (s == "inhomogeneous") return StudyKind::Inhomogeneous;
  if (s == "fibre") return StudyKind::Fibre;
  if (s == "uniform") return StudyKind::Uniform;
  throw std::invalid_argument("unknown study kind '" + s + "'");
}

void ExperimentPlan::validate() const {
  if (trials < 1) throw std::invalid_argument("plan: trials must be >= 1");
  if (checkpoints.empty()) throw std::invalid_argument("plan: need at least one checkpoint");
  if (checkpoints.front() < 1) throw std::invalid_argument("plan: checkpoints must be >= 1");
  for (std::size_t i = 1; i < checkpoints.size(); ++i) {
    if (checkpoints[i] <= checkpoints[i - 1]) {
      throw std::invalid_argument("plan: checkpoints must be strictly increasing");
    }
  }
  if (study == StudyKind::CoprimePairs) {
    if (k != 1) throw std::invalid_argument("plan: coprime study needs k = 1");
  } else if (study == StudyKind::Simultaneous) {
    if (k < 1) throw std::invalid_argument("plan: k must be >= 1");
  } else {
    if (k < 2) throw std::invalid_argument("plan: this study needs k >= 2");
  }
  if (!gamma.empty() && gamma.size() != static_cast<std::size_t>(k)) {
    throw std::invalid_argument("plan: gamma length must match k");
  }
  if (study == StudyKind::Fibre) {
    if (!fibre) throw std::invalid_argument("plan: fibre study needs a fixed fibre");
    if (fibre->alpha.size() != static_cast<std::size_t>(k - 1)) {
      throw std::invalid_argument("plan: fibre must fix k-1 coordinates");
    }
    if (!kappa) throw std::invalid_argument("plan: fibre study needs kappa");
  }
  if (study == StudyKind::Inhomogeneous && !kappa) {
    throw std::invalid_argument("plan: inhomogeneous study needs kappa");
  }
  if (psi.family() == PsiFamily::Table && psi.table_size() < checkpoints.back()) {
    throw std::invalid_argument("plan: psi table does not cover the last checkpoint");
  }
}

double quantile_of(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  if (values.size() == 1) return values[0];
  double pos = q * static_cast<double>(values.size() - 1);
  auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= values.size()) return values.back();
  double frac = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[lo + 1] * frac;
}

double median_of(std::vector<double> values) { return quantile_of(std::move(values), 0.5); }

namespace {

CountMode mode_for(StudyKind study) {
  switch (study) {
    case StudyKind::Simultaneous: return CountMode::Simultaneous;
    case StudyKind::Multiplicative: return CountMode::Multiplicative;
    case StudyKind::CoprimePairs: return CountMode::CoprimePairs;
    case StudyKind::Inhomogeneous: return CountMode::Multiplicative;
    case StudyKind::Fibre: return CountMode::Multiplicative;
    case StudyKind::Uniform: return CountMode::MultiplicativeUniform;
  }
  return CountMode::Simultaneous;
}

PredictorKind predictor_for(StudyKind study) {
  switch (study) {
    case StudyKind::Simultaneous: return PredictorKind::Simultaneous;
    case StudyKind::Multiplicative: return PredictorKind::Multiplicative;
    case StudyKind::CoprimePairs: return PredictorKind::CoprimeWeighted;
    case StudyKind::Inhomogeneous: return PredictorKind::MultiplicativeLog;
    case StudyKind::Fibre: return PredictorKind::MultiplicativeLog;
    case StudyKind::Uniform: return PredictorKind::VolumeUniform;
  }
  return PredictorKind::Simultaneous;
}

HypothesisSet hypotheses_for(StudyKind study) {
  switch (study) {
    case StudyKind::Simultaneous: return HypothesisSet::SimultaneousCounting;
    case StudyKind::Multiplicative: return HypothesisSet::MultiplicativeCounting;
    case StudyKind::CoprimePairs: return HypothesisSet::CoprimeCounting;
    case StudyKind::Inhomogeneous: return HypothesisSet::InhomogeneousCounting;
    case StudyKind::Fibre: return HypothesisSet::FibreCounting;
    // The uniform companion carries no decay hypothesis of its own; gate it
    // on monotonicity plus divergence of the log-weight series.
    case StudyKind::Uniform: return HypothesisSet::ZeroOneMultiplicative;
  }
  return HypothesisSet::SimultaneousCounting;
}

}  // namespace

PlanResult run_plan(const ExperimentPlan& plan, int threads) {
  plan.validate();

  PlanResult result;
  result.study = plan.study;
  result.k = plan.k;
  result.psi_spec = plan.psi.spec();
  result.trials = plan.trials;
  result.seed = plan.seed;

  // gamma, with the last coordinate forced to 0 for the shifted studies
  std::vector<Frac64> gamma = plan.gamma;
  if ((plan.study == StudyKind::Inhomogeneous || plan.study == StudyKind::Fibre) &&
      !gamma.empty()) {
    gamma.back() = Frac64{};
  }

  // Hypotheses of the matching statement; failures downgrade to a warning
  // unless the caller elevates them.
  ClassifyOptions copts;
  copts.k = plan.k;
  copts.kappa = plan.kappa;
  copts.probe_n = std::min<std::uint64_t>(plan.checkpoints.back(), 1000000);
  result.hypotheses = classify(plan.psi, hypotheses_for(plan.study), copts);
  result.hypotheses_ok = result.hypotheses.all_hold();

  if (plan.study == StudyKind::Fibre) {
    // The declared w drives the epsilon hypothesis; a scan estimate of the
    // fibre's exponent is logged alongside for sanity.
    select_epsilon(plan.k, plan.fibre->w, *plan.kappa);
    auto scan = multiplicative_exponent_estimate(
        plan.fibre->alpha, std::min<std::uint64_t>(plan.checkpoints.back(), 100000), 100);
    result.fibre_exponent_scan = scan.value;
  }

  // Predictors depend only on psi, never on the trial.
  std::vector<std::uint32_t> phi;
  if (plan.study == StudyKind::CoprimePairs) {
    phi = euler_phi_sieve(plan.checkpoints.back());
  }
  PredictorSeries series(predictor_for(plan.study), plan.k, plan.psi);
  std::vector<double> predictors = series.at_checkpoints(plan.checkpoints, phi);

  result.records.resize(plan.trials);
  int nthreads = resolve_threads(threads);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      int t = next.fetch_add(1, std::memory_order_relaxed);
      if (t >= plan.trials) return;
      SplitMix64 rng(SplitMix64::child_seed(plan.seed, static_cast<std::uint64_t>(t)));

      CountQuery q;
      q.mode = mode_for(plan.study);
      q.n_max = plan.checkpoints.back();
      q.psi = plan.psi;
      q.gamma = gamma;
      q.alpha.resize(plan.k);
      if (plan.study == StudyKind::Fibre) {
        for (int i = 0; i < plan.k - 1; ++i) q.alpha[i] = plan.fibre->alpha[i];
        q.alpha[plan.k - 1] = Frac64{rng.next()};
      } else {
        for (int i = 0; i < plan.k; ++i) q.alpha[i] = Frac64{rng.next()};
      }

      auto counts = count_at_checkpoints(q, plan.checkpoints, 1);

      TrialRecord rec;
      rec.trial = t;
      rec.alpha = q.alpha;
      rec.cells.resize(plan.checkpoints.size());
      for (std::size_t i = 0; i < plan.checkpoints.size(); ++i) {
        auto& cell = rec.cells[i];
        cell.n_max = plan.checkpoints[i];
        cell.count = counts[i];
        cell.predictor = predictors[i];
        if (predictors[i] > 0.0) {
          cell.ratio = static_cast<double>(counts[i]) / predictors[i];
        }
      }
      result.records[t] = std::move(rec);
    }
  };
  if (nthreads <= 1 || plan.trials == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    int n = std::min(nthreads, plan.trials);
    pool.reserve(n);
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // Per-checkpoint robust summaries.
  result.summaries.resize(plan.checkpoints.size());
  for (std::size_t i = 0; i < plan.checkpoints.size(); ++i) {
    auto& s = result.summaries[i];
    s.n_max = plan.checkpoints[i];
    s.predictor = predictors[i];
    std::vector<double> ratios;
    ratios.reserve(result.records.size());
    for (const auto& rec : result.records) {
      if (rec.cells[i].ratio) ratios.push_back(*rec.cells[i].ratio);
      else ++s.omitted;
    }
    if (!ratios.empty()) {
      s.median = median_of(ratios);
      s.iqr = quantile_of(ratios, 0.75) - quantile_of(ratios, 0.25);
      s.min = *std::min_element(ratios.begin(), ratios.end());
    }
  }

  result.metadata.version = kVersion;
  result.metadata.build = build_id();
  result.metadata.prng = kPrngId;
  result.metadata.seed = plan.seed;
  result.metadata.extra.emplace_back("study", to_string(plan.study));
  result.metadata.extra.emplace_back("k", std::to_string(plan.k));
  result.metadata.extra.emplace_back("psi", plan.psi.spec());
  result.metadata.extra.emplace_back("trials", std::to_string(plan.trials));
  return result;
}

void write_ratio_table_csv(std::ostream& os, const PlanResult& result) {
  write_metadata_comments(os, result.metadata);
  os << "trial,N,count,predictor,ratio\n";
  for (const auto& rec : result.records) {
    for (const auto& cell : rec.cells) {
      os << rec.trial << ',' << cell.n_max << ',' << cell.count << ','
         << format_double(cell.predictor) << ',';
      if (cell.ratio) os << format_double(*cell.ratio);
      os << '\n';
    }
  }
}

void write_ratio_table_json(std::ostream& os, const PlanResult& result) {
  os << "{\"meta\":{\"version\":\"" << result.metadata.version << "\",\"build\":\""
     << result.metadata.build << "\",\"prng\":\"" << result.metadata.prng
     << "\",\"seed\":" << result.metadata.seed << ",\"study\":\"" << to_string(result.study)
     << "\",\"k\":" << result.k << ",\"psi\":\"" << result.psi_spec
     << "\",\"trials\":" << result.trials << "}}\n";
  for (const auto& rec : result.records) {
    os << "{\"trial\":" << rec.trial << ",\"alpha\":[";
    for (std::size_t i = 0; i < rec.alpha.size(); ++i) {
      if (i) os << ',';
      os << '"' << to_hex(rec.alpha[i].raw) << '"';
    }
    os << "],\"cells\":[";
    for (std::size_t i = 0; i < rec.cells.size(); ++i) {
      const auto& cell = rec.cells[i];
      if (i) os << ',';
      os << "{\"N\":" << cell.n_max << ",\"count\":" << cell.count
         << ",\"predictor\":" << format_double(cell.predictor);
      if (cell.ratio) os << ",\"ratio\":" << format_double(*cell.ratio);
      os << '}';
    }
    os << "]}\n";
  }
  os << "{\"summary\":[";
  for (std::size_t i = 0; i < result.summaries.size(); ++i) {
    const auto& s = result.summaries[i];
    if (i) os << ',';
    os << "{\"N\":" << s.n_max << ",\"predictor\":" << format_double(s.predictor)
       << ",\"median\":" << format_double(s.median) << ",\"iqr\":" << format_double(s.iqr)
       << ",\"min\":" << format_double(s.min) << ",\"omitted\":" << s.omitted << '}';
  }
  os << "]}\n";
}

}  // namespace multcount
