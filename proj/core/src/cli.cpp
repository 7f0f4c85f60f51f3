#include "multcount/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "multcount/bohr.hpp"
#include "multcount/counting.hpp"
#include "multcount/experiments.hpp"
#include "multcount/exponents.hpp"
#include "multcount/geometry.hpp"
#include "multcount/io.hpp"
#include "multcount/parallel.hpp"
#include "multcount/predictors.hpp"
#include "multcount/rng.hpp"
#include "multcount/sieve.hpp"
#include "multcount/version.hpp"

namespace multcount {
namespace {

using nlohmann::json;

Frac64 parse_alpha_token(const std::string& tok) {
  if (tok == "golden") return Frac64::golden();
  if (tok.rfind("sqrt", 0) == 0 && tok.size() > 4) {
    return Frac64::sqrt_frac(std::stoull(tok.substr(4)));
  }
  if (tok.rfind("0x", 0) == 0 || tok.rfind("0X", 0) == 0) {
    return Frac64{std::stoull(tok.substr(2), nullptr, 16)};
  }
  return Frac64::from_real(std::stod(tok));
}

std::vector<Frac64> parse_alpha_list(const std::string& list) {
  std::vector<Frac64> out;
  std::stringstream ss(list);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) throw std::invalid_argument("empty alpha entry");
    out.push_back(parse_alpha_token(tok));
  }
  if (out.empty()) throw std::invalid_argument("empty alpha list");
  return out;
}

std::vector<double> parse_double_list(const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

std::vector<std::uint64_t> parse_u64_list(const std::string& list) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(list);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoull(tok));
  return out;
}

// Output goes to --out when given, else stdout.
struct OutStream {
  std::ofstream file;
  std::ostream* os = &std::cout;

  explicit OutStream(const std::string& path) {
    if (!path.empty()) {
      file.open(path, std::ios::binary);
      if (!file) throw std::runtime_error("cannot open output file: " + path);
      os = &file;
    }
  }
  std::ostream& get() { return *os; }
};

RunMetadata base_metadata(std::uint64_t seed) {
  RunMetadata meta;
  meta.version = kVersion;
  meta.build = build_id();
  meta.prng = kPrngId;
  meta.seed = seed;
  return meta;
}

int cmd_count(const std::string& mode_str, const std::string& alpha_str,
              const std::string& gamma_str, const std::string& psi_str, std::uint64_t n_max,
              int k, int threads, bool witnesses, const std::string& out_path) {
  CountQuery q;
  q.mode = count_mode_from_string(mode_str);
  q.alpha = parse_alpha_list(alpha_str);
  if (k > 0 && static_cast<std::size_t>(k) != q.alpha.size()) {
    throw std::invalid_argument("--k does not match the alpha list length");
  }
  if (!gamma_str.empty()) q.gamma = parse_alpha_list(gamma_str);
  q.psi = ApproxFunction::parse(psi_str);
  q.n_max = n_max;

  CountOptions opts;
  opts.threads = resolve_threads(threads);
  opts.capture_witnesses = witnesses;

  auto start = std::chrono::steady_clock::now();
  CountResult res = count(q, opts);
  double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json j;
  j["mode"] = to_string(q.mode);
  j["k"] = q.alpha.size();
  j["N"] = q.n_max;
  j["count"] = res.count;
  j["elapsed"] = elapsed;
  if (res.cap_exceeded) j["cap_exceeded"] = true;
  if (witnesses) {
    if (!res.pair_witnesses.empty() || q.mode == CountMode::CoprimePairs ||
        q.mode == CountMode::RelaxedPairs) {
      json w = json::array();
      for (auto [n, a] : res.pair_witnesses) w.push_back({n, a});
      j["witnesses"] = std::move(w);
    } else {
      j["witnesses"] = res.witnesses;
    }
    j["witnesses_truncated"] = res.witnesses_truncated;
  }
  OutStream out(out_path);
  out.get() << j.dump() << "\n";
  return 0;
}

int cmd_predict(const std::string& kind_str, int k, const std::string& psi_str,
                const std::string& checkpoints_str, const std::string& out_path) {
  PredictorKind kind;
  if (kind_str == "simultaneous") kind = PredictorKind::Simultaneous;
  else if (kind_str == "multiplicative") kind = PredictorKind::Multiplicative;
  else if (kind_str == "multiplicative_log") kind = PredictorKind::MultiplicativeLog;
  else if (kind_str == "coprime_weighted") kind = PredictorKind::CoprimeWeighted;
  else if (kind_str == "volume_sum") kind = PredictorKind::VolumeSum;
  else if (kind_str == "volume_uniform") kind = PredictorKind::VolumeUniform;
  else throw std::invalid_argument("unknown predictor kind '" + kind_str + "'");

  auto checkpoints = parse_u64_list(checkpoints_str);
  auto psi = ApproxFunction::parse(psi_str);
  std::vector<std::uint32_t> phi;
  if (kind == PredictorKind::CoprimeWeighted) phi = euler_phi_sieve(checkpoints.back());

  PredictorSeries series(kind, k, psi);
  auto values = series.at_checkpoints(checkpoints, phi);

  OutStream out(out_path);
  auto meta = base_metadata(0);
  meta.extra.emplace_back("psi", psi.spec());
  meta.extra.emplace_back("k", std::to_string(k));
  if (series.outside_regime()) meta.extra.emplace_back("outside_regime", "true");
  write_metadata_comments(out.get(), meta);
  out.get() << "N,kind,value\n";
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    out.get() << checkpoints[i] << ',' << to_string(kind) << ',' << format_double(values[i])
              << "\n";
  }
  return 0;
}

int cmd_volume(int k, double lambda, const std::string& box_str, std::uint64_t samples,
               std::uint64_t seed, int threads, const std::string& out_path) {
  ProductRegion region;
  region.k = k;
  region.lambda = lambda;
  if (box_str == "unit") region.box = Box::Unit;
  else if (box_str == "half") region.box = Box::Half;
  else throw std::invalid_argument("box must be unit or half");

  double exact = region.box == Box::Unit ? unit_box_product_volume(k, lambda)
                                         : half_box_product_volume(k, lambda);
  auto mc = monte_carlo_volume(region, samples, seed, resolve_threads(threads));

  OutStream out(out_path);
  auto meta = base_metadata(seed);
  meta.extra.emplace_back("box", box_str);
  write_metadata_comments(out.get(), meta);
  out.get() << "k,lambda,exact,mc_estimate,mc_stderr,samples,seed\n";
  out.get() << k << ',' << format_double(lambda) << ',' << format_double(exact) << ','
            << format_double(mc.estimate) << ',' << format_double(mc.std_error) << ',' << samples
            << ',' << seed << "\n";
  return 0;
}

int cmd_bohr(const std::string& alpha_str, const std::string& gamma_str,
             const std::string& delta_str, std::uint64_t n_max, double epsilon, bool list_members,
             bool with_cells, int k_for_cells, const std::string& psi_str,
             const std::string& out_path) {
  BohrSetSpec spec;
  spec.alpha = parse_alpha_list(alpha_str);
  if (!gamma_str.empty()) spec.gamma = parse_alpha_list(gamma_str);
  spec.delta = parse_double_list(delta_str);
  spec.n_max = n_max;

  auto density = bohr_density(spec);

  json j;
  j["N"] = n_max;
  j["count"] = density.count;
  j["normalized_ratio"] = density.normalized_ratio;
  j["expected"] = density.expected;
  if (list_members) {
    j["members"] = enumerate_bohr_set(spec);
  }
  if (epsilon > 0.0) {
    j["epsilon"] = epsilon;
    auto separated = separated_set(spec.alpha, spec.gamma, epsilon, n_max);
    j["separated_count"] = separated.size();
    j["separated_density"] =
        static_cast<double>(separated.size()) / static_cast<double>(n_max);
    if (!psi_str.empty()) {
      auto psi = ApproxFunction::parse(psi_str);
      auto phi = euler_phi_sieve(n_max);
      j["separated_weight_sum"] =
          separated_weight_sum(spec.alpha, spec.gamma, psi, epsilon, n_max, phi);
    }
    if (with_cells) {
      auto grid = dyadic_delta_grid(n_max, k_for_cells, epsilon);
      j["dyadic_per_axis"] = grid.per_axis;
      j["dyadic_cell_count"] = grid.cells.size();
      j["dyadic_cells"] = grid.cells;
    }
  }
  OutStream out(out_path);
  out.get() << j.dump() << "\n";
  return 0;
}

int cmd_exponent(const std::string& alpha_str, std::uint64_t n_max, std::uint64_t n_min,
                 const std::string& metric, const std::string& out_path) {
  auto alpha = parse_alpha_list(alpha_str);
  OutStream out(out_path);
  auto meta = base_metadata(0);
  meta.extra.emplace_back("metric", metric);

  if (metric == "littlewood") {
    if (alpha.size() != 2) {
      throw std::invalid_argument("littlewood metric needs exactly two alpha entries");
    }
    auto trail = littlewood_records(alpha[0], alpha[1], n_max);
    write_metadata_comments(out.get(), meta);
    out.get() << "n,value\n";
    for (const auto& e : trail.entries) {
      out.get() << e.n << ',' << format_long_double(e.value) << "\n";
    }
    return 0;
  }
  if (metric != "exponent") throw std::invalid_argument("metric must be exponent or littlewood");

  auto est = multiplicative_exponent_estimate(alpha, n_max, n_min);
  meta.extra.emplace_back("estimate", format_double(est.value));
  if (est.zero_product) meta.extra.emplace_back("zero_product", "true");
  write_metadata_comments(out.get(), meta);
  out.get() << "n,value\n";
  for (const auto& e : est.trail.entries) {
    out.get() << e.n << ',' << format_long_double(e.value) << "\n";
  }
  return 0;
}

int cmd_experiment(const std::string& study_str, int k, const std::string& psi_str,
                   const std::string& gamma_str, const std::string& checkpoints_str, int trials,
                   std::uint64_t seed, const std::string& fibre_str, double fibre_w, double kappa,
                   int threads, const std::string& format, bool strict,
                   const std::string& out_path) {
  ExperimentPlan plan;
  plan.study = study_from_string(study_str);
  plan.k = k;
  plan.psi = ApproxFunction::parse(psi_str);
  if (!gamma_str.empty()) plan.gamma = parse_alpha_list(gamma_str);
  plan.checkpoints = parse_u64_list(checkpoints_str);
  plan.trials = trials;
  plan.seed = seed;
  if (!fibre_str.empty()) {
    plan.fibre = FixedFibre{parse_alpha_list(fibre_str), fibre_w};
  }
  if (kappa > 0.0) plan.kappa = kappa;

  PlanResult result = run_plan(plan, resolve_threads(threads));

  OutStream out(out_path);
  if (format == "json") write_ratio_table_json(out.get(), result);
  else write_ratio_table_csv(out.get(), result);

  std::ostream& log = out_path.empty() ? std::cerr : std::cout;
  log << "hypotheses: " << result.hypotheses.summary_line() << "\n";
  if (result.fibre_exponent_scan) {
    log << "fibre exponent scan: " << format_double(*result.fibre_exponent_scan)
        << " (declared w=" << format_double(plan.fibre->w) << ")\n";
  }
  for (const auto& s : result.summaries) {
    log << "N=" << s.n_max << " predictor=" << format_double(s.predictor)
        << " median=" << format_double(s.median) << " iqr=" << format_double(s.iqr)
        << " min=" << format_double(s.min);
    if (s.omitted) log << " omitted=" << s.omitted;
    log << "\n";
  }
  if (!result.hypotheses_ok) {
    log << "warning: hypothesis checks failed for this plan\n";
    if (strict) return 2;
  }
  return 0;
}

int cmd_selfcheck() {
  int failures = 0;
  auto check = [&](const char* name, bool ok) {
    std::printf("[%s] %s\n", ok ? "ok" : "FAIL", name);
    if (!ok) ++failures;
  };

  // totient sieve vs direct gcd counting
  {
    auto phi = euler_phi_sieve(2000);
    bool ok = true;
    for (std::uint64_t n = 1; n <= 2000 && ok; ++n) {
      std::uint32_t direct = 0;
      for (std::uint64_t m = 1; m <= n; ++m) {
        if (std::gcd(m, n) == 1) ++direct;
      }
      ok = phi[n] == direct;
    }
    check("totient sieve matches direct count to 2000", ok);
  }

  // streaming counters vs direct per-n recomputation
  {
    SplitMix64 rng(0xC0FFEE);
    bool ok = true;
    for (int trial = 0; trial < 3 && ok; ++trial) {
      CountQuery q;
      q.mode = CountMode::Multiplicative;
      q.alpha = {Frac64{rng.next()}, Frac64{rng.next()}};
      q.psi = ApproxFunction::power_log(0.5, 1.0, 0.0);
      q.n_max = 5000;
      std::uint64_t direct = 0;
      for (std::uint64_t n = 1; n <= q.n_max; ++n) {
        std::uint64_t d0 = nearest_dist_raw(frac_mul(n, q.alpha[0]), Frac64{});
        std::uint64_t d1 = nearest_dist_raw(frac_mul(n, q.alpha[1]), Frac64{});
        if (lt_threshold_u128(static_cast<u128>(d0) * d1, std::ldexp(q.psi(n), 128))) ++direct;
      }
      ok = count(q).count == direct;
    }
    check("multiplicative counter matches direct recomputation", ok);
  }

  // volume closed form vs Monte Carlo
  {
    auto mc = monte_carlo_volume({2, 0.5, Box::Unit}, 200000, 99, 1);
    double exact = unit_box_product_volume(2, 0.5);
    check("unit box volume within 4 sigma of Monte Carlo",
          std::fabs(mc.estimate - exact) <= 4.0 * mc.std_error);
  }

  // determinism across thread counts
  {
    ExperimentPlan plan;
    plan.study = StudyKind::Simultaneous;
    plan.k = 1;
    plan.psi = ApproxFunction::constant(0.25);
    plan.checkpoints = {1000, 10000};
    plan.trials = 6;
    plan.seed = 4242;
    std::ostringstream a, b;
    write_ratio_table_csv(a, run_plan(plan, 1));
    write_ratio_table_csv(b, run_plan(plan, 4));
    check("experiment output identical for 1 and 4 threads", a.str() == b.str());
  }

  std::printf("%s\n", failures == 0 ? "selfcheck passed" : "selfcheck FAILED");
  return failures == 0 ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Exact counting of simultaneous, multiplicative and coprime rational "
               "approximations, with asymptotic predictors and seeded experiments"};
  app.set_version_flag("--version", std::string(kVersion) + " build=" + build_id());
  app.set_config("--config");
  app.require_subcommand(1);

  std::string out_path, format = "csv";
  int threads = 0;

  // count
  auto* count_cmd = app.add_subcommand("count", "Run one exact counting query");
  std::string c_mode = "simultaneous", c_alpha, c_gamma, c_psi = "constant:0.25";
  std::uint64_t c_n = 1000;
  int c_k = 0;
  bool c_witnesses = false;
  count_cmd->add_option("--mode", c_mode, "simultaneous|multiplicative|uniform|coprime|relaxed");
  count_cmd->add_option("--k", c_k, "dimension (checked against the alpha list)");
  count_cmd->add_option("--alpha", c_alpha, "comma list: hex raw, decimal, golden, sqrtM")
      ->required();
  count_cmd->add_option("--gamma", c_gamma, "shift vector, same formats");
  count_cmd->add_option("--psi", c_psi, "approximating function family:params");
  count_cmd->add_option("--N", c_n, "count n = 1..N")->required();
  count_cmd->add_flag("--witnesses", c_witnesses, "record hit witnesses (serial path)");

  // predict
  auto* predict_cmd = app.add_subcommand("predict", "Evaluate a predictor series");
  std::string p_kind = "simultaneous", p_psi = "constant:0.25", p_checkpoints = "1000";
  int p_k = 1;
  predict_cmd->add_option("--kind", p_kind,
                          "simultaneous|multiplicative|multiplicative_log|coprime_weighted|"
                          "volume_sum|volume_uniform");
  predict_cmd->add_option("--k", p_k, "dimension");
  predict_cmd->add_option("--psi", p_psi, "approximating function");
  predict_cmd->add_option("--N", p_checkpoints, "checkpoint list, ascending");

  // volume
  auto* volume_cmd = app.add_subcommand("volume", "Exact and Monte Carlo product-region volume");
  int v_k = 2;
  double v_lambda = 0.5;
  std::string v_box = "unit";
  std::uint64_t v_samples = 1000000, v_seed = 0;
  volume_cmd->add_option("--k", v_k, "dimension");
  volume_cmd->add_option("--lambda", v_lambda, "product threshold")->required();
  volume_cmd->add_option("--box", v_box, "unit|half");
  volume_cmd->add_option("--samples", v_samples, "Monte Carlo samples");
  volume_cmd->add_option("--seed", v_seed, "Monte Carlo seed");

  // bohr
  auto* bohr_cmd = app.add_subcommand("bohr", "Bohr set counts, separated sets, dyadic grids");
  std::string b_alpha, b_gamma, b_delta = "0.25", b_psi;
  std::uint64_t b_n = 1000;
  double b_epsilon = 0.0;
  bool b_list = false, b_cells = false;
  int b_k = 2;
  bohr_cmd->add_option("--alpha", b_alpha, "k-1 fibre coordinates")->required();
  bohr_cmd->add_option("--gamma", b_gamma, "shifts");
  bohr_cmd->add_option("--delta", b_delta, "widths, comma list in (0,1/2]");
  bohr_cmd->add_option("--N", b_n, "range |n| <= N")->required();
  bohr_cmd->add_option("--epsilon", b_epsilon, "separation parameter (enables separated set)");
  bohr_cmd->add_option("--psi", b_psi, "with --epsilon: also emit the separated weight sum");
  bohr_cmd->add_option("--cells-k", b_k, "dimension for the dyadic grid");
  bohr_cmd->add_flag("--list", b_list, "include the member list");
  bohr_cmd->add_flag("--cells", b_cells, "include dyadic grid sizes");

  // exponent
  auto* exp_cmd = app.add_subcommand("exponent", "Multiplicative exponent and record trails");
  std::string e_alpha, e_metric = "exponent";
  std::uint64_t e_n = 1000000, e_nmin = 100;
  exp_cmd->add_option("--alpha", e_alpha, "coordinates")->required();
  exp_cmd->add_option("--N", e_n, "scan bound");
  exp_cmd->add_option("--nmin", e_nmin, "burn-in for the exponent ratio");
  exp_cmd->add_option("--metric", e_metric, "exponent|littlewood");

  // experiment
  auto* exper_cmd = app.add_subcommand("experiment", "Seeded random-alpha trial batches");
  std::string x_study = "multiplicative", x_psi = "powerlog:1,1,0", x_gamma, x_fibre;
  std::string x_checkpoints = "100000,1000000";
  int x_k = 2, x_trials = 10;
  std::uint64_t x_seed = 0;
  double x_fibre_w = 1.0, x_kappa = 0.0;
  bool x_strict = false;
  exper_cmd->add_option("--study", x_study,
                        "simultaneous|multiplicative|coprime|inhomogeneous|fibre|uniform");
  exper_cmd->add_option("--k", x_k, "dimension");
  exper_cmd->add_option("--psi", x_psi, "approximating function");
  exper_cmd->add_option("--gamma", x_gamma, "shift vector");
  exper_cmd->add_option("--checkpoints", x_checkpoints, "ascending count checkpoints");
  exper_cmd->add_option("--trials", x_trials, "number of sampled alpha");
  exper_cmd->add_option("--seed", x_seed, "root seed");
  exper_cmd->add_option("--fibre", x_fibre, "fixed fibre coordinates (fibre study)");
  exper_cmd->add_option("--fibre-w", x_fibre_w, "declared multiplicative exponent of the fibre");
  exper_cmd->add_option("--kappa", x_kappa, "power bound hypothesis");
  exper_cmd->add_flag("--strict", x_strict, "exit 2 when hypothesis checks fail");

  // selfcheck
  auto* self_cmd = app.add_subcommand("selfcheck", "Run the built-in oracle suite");

  app.add_option("--out", out_path, "output file (default stdout)");
  app.add_option("--format", format, "csv|json (experiment output)");
  app.add_option("--threads", threads, "worker threads (0 = MULTCOUNT_THREADS or hardware)");
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {  // --help, --version
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (count_cmd->parsed()) {
      return cmd_count(c_mode, c_alpha, c_gamma, c_psi, c_n, c_k, threads, c_witnesses, out_path);
    }
    if (predict_cmd->parsed()) {
      return cmd_predict(p_kind, p_k, p_psi, p_checkpoints, out_path);
    }
    if (volume_cmd->parsed()) {
      return cmd_volume(v_k, v_lambda, v_box, v_samples, v_seed, threads, out_path);
    }
    if (bohr_cmd->parsed()) {
      return cmd_bohr(b_alpha, b_gamma, b_delta, b_n, b_epsilon, b_list, b_cells, b_k, b_psi,
                      out_path);
    }
    if (exp_cmd->parsed()) {
      return cmd_exponent(e_alpha, e_n, e_nmin, e_metric, out_path);
    }
    if (exper_cmd->parsed()) {
      return cmd_experiment(x_study, x_k, x_psi, x_gamma, x_checkpoints, x_trials, x_seed,
                            x_fibre, x_fibre_w, x_kappa, threads, format, x_strict, out_path);
    }
    if (self_cmd->parsed()) {
      return cmd_selfcheck();
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace multcount
