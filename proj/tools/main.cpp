// Command-line front end: closed-form measurement bounds, Monte Carlo
// error-rate sweeps, empirical bound verification, and the paired-curve
// dataset behind the headline figure.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ompsd/bounds.hpp"
#include "ompsd/ensembles.hpp"
#include "ompsd/errors.hpp"
#include "ompsd/montecarlo.hpp"
#include "ompsd/rng.hpp"
#include "ompsd/serialize.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;

std::string fmt(const char* spec, double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), spec, value);
  return buffer;
}

/// Sends content to --out (atomically) when set, else to stdout.
void emit(const std::optional<std::string>& out_path, const std::string& content) {
  if (out_path) {
    ompsd::write_file_atomic(*out_path, content);
  } else {
    std::cout << content;
  }
}

// ---------------------------------------------------------------- bounds --

struct BoundsArgs {
  std::int64_t n = 0;
  std::int64_t k = 0;
  double eps = 0.1;
  std::optional<double> g;
  double gaussian_c = 11.0;
  std::optional<std::int64_t> m;  // evaluate the detection-probability bound here
  std::string format = "text";
  bool as_json = false;
  std::optional<std::string> out;
};

struct BoundRow {
  std::string name;
  std::optional<double> g;
  ompsd::RequiredM m;
};

int run_bounds(const BoundsArgs& args) {
  const double gopt = ompsd::g_opt(args.n, args.k, args.eps);

  std::vector<BoundRow> rows;
  rows.push_back({"rpr_gopt", gopt, ompsd::required_m_rpr(args.n, args.k, args.eps, gopt)});
  if (args.g) {
    rows.push_back({"rpr_user", *args.g,
                    ompsd::required_m_rpr(args.n, args.k, args.eps, *args.g)});
  }
  const std::string gaussian_name = "gaussian_c" + fmt("%g", args.gaussian_c);
  rows.push_back({gaussian_name, std::nullopt,
                  ompsd::required_m_gaussian(args.n, args.k, args.eps, args.gaussian_c)});
  const double rip_real = ompsd::required_m_rip(args.n, args.k);
  ompsd::RequiredM rip;
  rip.real = rip_real;
  rip.ceil = static_cast<std::int64_t>(std::ceil(rip_real));
  rip.round = static_cast<std::int64_t>(std::llround(rip_real));
  rows.push_back({"rip", std::nullopt, rip});

  std::optional<ompsd::SsdBound> ssd;
  if (args.m) {
    ompsd::BoundInputs inputs;
    inputs.measurements = *args.m;
    inputs.dimension = args.n;
    inputs.sparsity = args.k;
    inputs.eps = args.eps;
    inputs.g = args.g.value_or(gopt);
    if (const auto warning = inputs.regime_warning()) {
      std::cerr << "warning: " << *warning << "\n";
    }
    ssd = ompsd::ssd_prob_bound(inputs);
  }

  std::ostringstream body;
  if (args.as_json || args.format == "json") {
    json j;
    j["N"] = args.n;
    j["K"] = args.k;
    j["eps"] = args.eps;
    j["g_opt"] = gopt;
    j["rows"] = json::array();
    for (const BoundRow& row : rows) {
      json jr;
      jr["bound"] = row.name;
      jr["g"] = row.g ? json(*row.g) : json(nullptr);
      jr["m_real"] = row.m.real;
      jr["m_ceil"] = row.m.ceil;
      jr["m_round"] = row.m.round;
      j["rows"].push_back(jr);
    }
    if (ssd) {
      j["ssd"] = {{"m", *args.m}, {"value", ssd->value}, {"vacuous", ssd->vacuous}};
    }
    body << j.dump(2) << "\n";
  } else if (args.format == "csv") {
    body << "bound,g,m_real,m_ceil,m_round\n";
    for (const BoundRow& row : rows) {
      body << row.name << ',' << (row.g ? ompsd::format_double(*row.g) : "") << ','
           << ompsd::format_double(row.m.real) << ',' << row.m.ceil << ','
           << row.m.round << '\n';
    }
  } else if (args.format == "text") {
    body << "g_opt = " << fmt("%.4f", gopt) << "\n\n";
    char line[128];
    std::snprintf(line, sizeof(line), "%-14s %10s %12s %8s %8s\n", "bound", "g",
                  "m_real", "m_ceil", "m_round");
    body << line;
    for (const BoundRow& row : rows) {
      const std::string g_text = row.g ? fmt("%.4f", *row.g) : "-";
      std::snprintf(line, sizeof(line), "%-14s %10s %12.4f %8lld %8lld\n",
                    row.name.c_str(), g_text.c_str(), row.m.real,
                    static_cast<long long>(row.m.ceil),
                    static_cast<long long>(row.m.round));
      body << line;
    }
    if (ssd) {
      std::snprintf(line, sizeof(line),
                    "\ndetection probability bound at M=%lld: %.6f%s\n",
                    static_cast<long long>(*args.m), ssd->value,
                    ssd->vacuous ? " (vacuous)" : "");
      body << line;
    }
  } else {
    std::cerr << "unknown format: " << args.format << "\n";
    return kExitUsage;
  }

  emit(args.out, body.str());
  return kExitOk;
}

// -------------------------------------------------------------- simulate --

struct SimulateArgs {
  std::int64_t n = 200;
  std::int64_t k = 2;
  std::vector<std::int64_t> m_values;
  std::string ensemble = "rpr";
  std::int64_t trials = 10000;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string format = "csv";
  bool as_json = false;
  bool trace = false;
  bool one_based = false;
  std::optional<std::string> out;
};

int run_simulate(const SimulateArgs& args) {
  const ompsd::Ensemble ensemble = ompsd::ensemble_from_string(args.ensemble);

  if (args.trace) {
    // Trace mode replays trial 0 of the first sweep point and dumps the
    // full per-iteration record instead of aggregate statistics.
    const std::int64_t m = args.m_values.front();
    const std::uint64_t trial_seed =
        ompsd::derive_seed(args.seed, static_cast<std::uint64_t>(m), 0);
    const ompsd::TrialRecord record =
        ompsd::run_trial_traced(args.n, args.k, m, ensemble, trial_seed);
    const std::int64_t base = args.one_based ? 1 : 0;
    json j;
    j["m"] = m;
    j["N"] = args.n;
    j["K"] = args.k;
    j["ensemble"] = args.ensemble;
    j["trial_seed"] = trial_seed;
    j["success"] = record.success;
    json support = json::array();
    for (const ompsd::Index idx : record.true_support) {
      support.push_back(idx + base);
    }
    j["true_support"] = support;
    if (!record.error.empty()) {
      j["error"] = record.error;
    }
    j["trace"] = ompsd::trace_to_json(record.trace, args.one_based);
    emit(args.out, j.dump(2) + "\n");
    return kExitOk;
  }

  ompsd::SweepConfig config;
  config.dimension = args.n;
  config.sparsity = args.k;
  config.m_values = args.m_values;
  config.trials = args.trials;
  config.base_seed = args.seed;
  config.ensemble = ensemble;
  const std::vector<ompsd::TrialBatchResult> rows =
      ompsd::sweep_error_rate(config, args.threads);

  std::ostringstream body;
  if (args.as_json || args.format == "json") {
    json j = ompsd::sweep_to_json(rows, ensemble);
    j["N"] = args.n;
    j["K"] = args.k;
    j["seed"] = args.seed;
    j["trials"] = args.trials;
    body << j.dump(2) << "\n";
  } else if (args.format == "csv") {
    ompsd::write_sweep_csv(body, rows, ensemble);
  } else {
    std::cerr << "unknown format: " << args.format << "\n";
    return kExitUsage;
  }
  emit(args.out, body.str());
  return kExitOk;
}

// --------------------------------------------------------------- figure1 --

struct Figure1Args {
  std::int64_t n = 200;
  std::int64_t k = 2;
  double eps = 0.1;
  std::int64_t m_min = 10;
  std::int64_t m_max = 200;
  std::int64_t m_step = 10;
  std::int64_t trials = 10000;
  std::uint64_t seed = 0;
  int threads = 0;
  double gaussian_c = 11.0;
  bool real_gaussian = false;
  std::string out_dir = ".";
};

int run_figure1(const Figure1Args& args) {
  if (args.m_step < 1 || args.m_max < args.m_min) {
    std::cerr << "invalid m range\n";
    return kExitUsage;
  }
  std::vector<std::int64_t> m_values;
  for (std::int64_t m = args.m_min; m <= args.m_max; m += args.m_step) {
    m_values.push_back(m);
  }

  const ompsd::Ensemble gaussian_kind = args.real_gaussian
                                            ? ompsd::Ensemble::real_gaussian
                                            : ompsd::Ensemble::complex_gaussian;

  ompsd::SweepConfig config;
  config.dimension = args.n;
  config.sparsity = args.k;
  config.m_values = m_values;
  config.trials = args.trials;
  config.base_seed = args.seed;

  // Compute everything before writing anything, so an error cannot leave
  // a partial dataset behind.
  config.ensemble = ompsd::Ensemble::rpr;
  const auto rpr_rows = ompsd::sweep_error_rate(config, args.threads);
  config.ensemble = gaussian_kind;
  const auto gaussian_rows = ompsd::sweep_error_rate(config, args.threads);

  const double gopt = ompsd::g_opt(args.n, args.k, args.eps);
  const ompsd::RequiredM m_rpr = ompsd::required_m_rpr(args.n, args.k, args.eps, gopt);
  const ompsd::RequiredM m_gauss =
      ompsd::required_m_gaussian(args.n, args.k, args.eps, args.gaussian_c);

  std::ostringstream rpr_csv;
  ompsd::write_sweep_csv(rpr_csv, rpr_rows, ompsd::Ensemble::rpr);
  std::ostringstream gaussian_csv;
  ompsd::write_sweep_csv(gaussian_csv, gaussian_rows, gaussian_kind);

  json lines;
  lines["N"] = args.n;
  lines["K"] = args.k;
  lines["eps"] = args.eps;
  lines["g_opt"] = gopt;
  lines["m_min_rpr"] = m_rpr.ceil;
  lines["m_min_rpr_round"] = m_rpr.round;
  lines["m_min_rpr_real"] = m_rpr.real;
  lines["m_min_gaussian"] = m_gauss.ceil;
  lines["m_min_gaussian_real"] = m_gauss.real;
  lines["gaussian_c"] = args.gaussian_c;
  lines["gaussian_ensemble"] = ompsd::to_string(gaussian_kind);
  lines["trials"] = args.trials;
  lines["seed"] = args.seed;

  namespace fs = std::filesystem;
  fs::create_directories(args.out_dir);
  const std::string rpr_path = (fs::path(args.out_dir) / "figure1_rpr.csv").string();
  const std::string gaussian_path =
      (fs::path(args.out_dir) / "figure1_gaussian.csv").string();
  const std::string lines_path =
      (fs::path(args.out_dir) / "figure1_lines.json").string();

  std::vector<std::string> written;
  try {
    ompsd::write_file_atomic(rpr_path, rpr_csv.str());
    written.push_back(rpr_path);
    ompsd::write_file_atomic(gaussian_path, gaussian_csv.str());
    written.push_back(gaussian_path);
    ompsd::write_file_atomic(lines_path, lines.dump(2) + "\n");
  } catch (...) {
    for (const std::string& path : written) {
      std::remove(path.c_str());
    }
    throw;
  }

  std::cout << "wrote " << rpr_path << "\n"
            << "wrote " << gaussian_path << "\n"
            << "wrote " << lines_path << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- verify --

struct VerifyArgs {
  std::int64_t m = 0;
  std::int64_t n = 0;
  std::string ensemble = "rpr";
  std::int64_t samples = 0;  // 0 = per-suite default
  int delta_count = 32;
  double delta_max = 1.0;
  std::vector<double> gs;
  int k_max = 4;
  std::uint64_t seed = 0;
  bool as_json = false;
  std::optional<std::string> out;
};

std::vector<double> scaled_delta_grid(int count, double max) {
  if (!(max > 0.0)) {
    throw ompsd::DomainError("delta grid maximum must be positive");
  }
  std::vector<double> grid = ompsd::default_delta_grid(count);
  for (double& d : grid) {
    d *= max;
  }
  return grid;
}

int report_bound_check(const std::vector<ompsd::BoundCheckPoint>& points,
                       std::size_t g_count, const char* suite,
                       const VerifyArgs& args) {
  std::size_t ok_count = 0;
  for (const ompsd::BoundCheckPoint& point : points) {
    ok_count += point.ok ? 1 : 0;
  }
  const bool pass = ok_count == points.size();

  if (args.out) {
    std::ostringstream csv;
    ompsd::write_bound_check_csv(csv, points, g_count);
    ompsd::write_file_atomic(*args.out, csv.str());
  }
  if (args.as_json) {
    json j;
    j["suite"] = suite;
    j["points"] = ompsd::bound_check_to_json(points);
    j["pass"] = pass;
    std::cout << j.dump(2) << "\n";
  } else {
    for (const ompsd::BoundCheckPoint& point : points) {
      std::printf("delta=%.4f g=%-6.2f empirical=%.6f bound=%.6f %s\n",
                  point.delta, point.g, point.empirical, point.bound,
                  point.ok ? "ok" : "VIOLATION");
    }
    std::printf("%s: %zu/%zu grid points within 3-sigma slack — %s\n", suite,
                ok_count, points.size(), pass ? "PASS" : "FAIL");
  }
  return pass ? kExitOk : kExitVerifyFail;
}

int run_verify_tail(VerifyArgs args) {
  if (args.samples == 0) args.samples = 100000;
  if (args.gs.empty()) args.gs = {2.1, 3.0, 5.0, 10.0};
  const auto deltas = scaled_delta_grid(args.delta_count, args.delta_max);
  const auto points =
      ompsd::verify_tail_bound(args.m, args.samples, deltas, args.gs, args.seed);
  return report_bound_check(points, args.gs.size(), "tail", args);
}

int run_verify_coherence(VerifyArgs args) {
  if (args.samples == 0) args.samples = 2000;
  if (args.gs.empty()) args.gs = {2.1, 3.0, 5.0, 10.0};
  const ompsd::Ensemble ensemble = ompsd::ensemble_from_string(args.ensemble);
  const auto deltas = scaled_delta_grid(args.delta_count, args.delta_max);
  const auto points = ompsd::verify_coherence_cdf(args.m, args.n, ensemble,
                                                  args.samples, deltas, args.gs,
                                                  args.seed);
  return report_bound_check(points, args.gs.size(), "coherence", args);
}

int run_verify_moments(VerifyArgs args) {
  if (args.samples == 0) args.samples = 200000;
  const auto rows =
      ompsd::verify_lemma1_moments(args.m, args.k_max, args.samples, args.seed);

  // Pass requires: no inequality violation anywhere, and the k = 0, 1
  // anchors flagged as equalities.
  bool pass = true;
  for (const ompsd::MomentRow& row : rows) {
    if (row.verdict == ompsd::MomentVerdict::violation) pass = false;
    if (row.k <= 1 && row.verdict != ompsd::MomentVerdict::equality) pass = false;
  }

  if (args.out) {
    const json j = ompsd::moment_table_to_json(rows);
    ompsd::write_file_atomic(*args.out, j.dump(2) + "\n");
  }
  if (args.as_json) {
    json j;
    j["suite"] = "moments";
    j["rows"] = ompsd::moment_table_to_json(rows);
    j["pass"] = pass;
    std::cout << j.dump(2) << "\n";
  } else {
    for (const ompsd::MomentRow& row : rows) {
      std::printf("k=%d phase=%.8g (se %.2g) sign=%.8g%s verdict=%s\n", row.k,
                  row.phase_moment, row.phase_stderr, row.bernoulli_moment,
                  row.bernoulli_exact ? " [exact]" : "",
                  ompsd::to_string(row.verdict));
    }
    std::printf("moments: %s\n", pass ? "PASS" : "FAIL");
  }
  return pass ? kExitOk : kExitVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse support detection with random phase-rotated measurements:"
               " closed-form bounds, Monte Carlo verification, figure data"};
  app.require_subcommand(1);

  BoundsArgs bounds_args;
  CLI::App* bounds_cmd =
      app.add_subcommand("bounds", "Closed-form required-measurement bounds");
  bounds_cmd->add_option("-N,--dimension", bounds_args.n, "Signal dimension N")
      ->required();
  bounds_cmd->add_option("-K,--sparsity", bounds_args.k, "Sparsity K")->required();
  bounds_cmd->add_option("--eps", bounds_args.eps, "Target failure probability");
  bounds_cmd->add_option("-g", bounds_args.g, "Additional user-chosen g > 2 row");
  bounds_cmd->add_option("--gaussian-c", bounds_args.gaussian_c,
                         "Gaussian baseline constant C");
  bounds_cmd->add_option("-M,--measurements", bounds_args.m,
                         "Also evaluate the detection-probability bound at this M");
  bounds_cmd->add_option("--format", bounds_args.format, "text, csv, or json");
  bounds_cmd->add_flag("--json", bounds_args.as_json, "Shorthand for --format json");
  bounds_cmd->add_option("--out", bounds_args.out, "Write output to this path");

  SimulateArgs sim_args;
  CLI::App* sim_cmd =
      app.add_subcommand("simulate", "Monte Carlo support-detection error sweep");
  sim_cmd->add_option("-N,--dimension", sim_args.n, "Signal dimension N");
  sim_cmd->add_option("-K,--sparsity", sim_args.k, "Sparsity K");
  sim_cmd->add_option("-M,--measurements", sim_args.m_values,
                      "Measurement counts to sweep (repeatable)")
      ->required();
  sim_cmd->add_option("--ensemble", sim_args.ensemble,
                      "rpr, bernoulli, complex_gaussian, real_gaussian, dft");
  sim_cmd->add_option("--trials", sim_args.trials, "Trials per sweep point");
  sim_cmd->add_option("--seed", sim_args.seed, "Base seed");
  sim_cmd->add_option("--threads", sim_args.threads,
                      "Worker count (0 = hardware)");
  sim_cmd->add_option("--format", sim_args.format, "csv or json");
  sim_cmd->add_flag("--json", sim_args.as_json, "Shorthand for --format json");
  sim_cmd->add_flag("--trace", sim_args.trace,
                    "Dump the solver trace of trial 0 at the first M instead");
  sim_cmd->add_flag("--one-based", sim_args.one_based,
                    "Report indices 1-based in trace output");
  sim_cmd->add_option("--out", sim_args.out, "Write output to this path");

  Figure1Args fig_args;
  CLI::App* fig_cmd = app.add_subcommand(
      "figure1", "Error-rate curves for both ensembles plus guarantee lines");
  fig_cmd->add_option("-N,--dimension", fig_args.n, "Signal dimension N");
  fig_cmd->add_option("-K,--sparsity", fig_args.k, "Sparsity K");
  fig_cmd->add_option("--eps", fig_args.eps, "Target failure probability");
  fig_cmd->add_option("--m-min", fig_args.m_min, "Smallest measurement count");
  fig_cmd->add_option("--m-max", fig_args.m_max, "Largest measurement count");
  fig_cmd->add_option("--m-step", fig_args.m_step, "Measurement count step");
  fig_cmd->add_option("--trials", fig_args.trials, "Trials per sweep point");
  fig_cmd->add_option("--seed", fig_args.seed, "Base seed");
  fig_cmd->add_option("--threads", fig_args.threads, "Worker count (0 = hardware)");
  fig_cmd->add_option("--gaussian-c", fig_args.gaussian_c,
                      "Gaussian baseline constant C");
  fig_cmd->add_flag("--real-gaussian", fig_args.real_gaussian,
                    "Use real instead of complex Gaussian for the second curve");
  fig_cmd->add_option("--out", fig_args.out_dir, "Output directory");

  VerifyArgs tail_args, coh_args, mom_args;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "Empirical checks of the analytic bounds");
  verify_cmd->require_subcommand(1);

  CLI::App* tail_cmd = verify_cmd->add_subcommand(
      "tail", "Inner-product tail probability vs its analytic bound");
  tail_cmd->add_option("-M,--measurements", tail_args.m, "Vector length M")
      ->required();
  tail_cmd->add_option("--samples,--trials", tail_args.samples,
                       "Sample count (default 100000)");
  tail_cmd->add_option("--delta-count", tail_args.delta_count, "Grid points");
  tail_cmd->add_option("--delta-max", tail_args.delta_max, "Grid upper end");
  tail_cmd->add_option("-g", tail_args.gs, "g grid values (repeatable)");
  tail_cmd->add_option("--seed", tail_args.seed, "Base seed");
  tail_cmd->add_flag("--json", tail_args.as_json, "JSON report");
  tail_cmd->add_option("--out", tail_args.out, "Write grid CSV to this path");

  CLI::App* coh_cmd = verify_cmd->add_subcommand(
      "coherence", "Coherence CDF vs its analytic lower bound");
  coh_cmd->add_option("-M,--measurements", coh_args.m, "Matrix rows M")->required();
  coh_cmd->add_option("-N,--dimension", coh_args.n, "Matrix columns N")->required();
  coh_cmd->add_option("--ensemble", coh_args.ensemble, "rpr or bernoulli");
  coh_cmd->add_option("--samples,--trials", coh_args.samples,
                      "Matrix count (default 2000)");
  coh_cmd->add_option("--delta-count", coh_args.delta_count, "Grid points");
  coh_cmd->add_option("--delta-max", coh_args.delta_max, "Grid upper end");
  coh_cmd->add_option("-g", coh_args.gs, "g grid values (repeatable)");
  coh_cmd->add_option("--seed", coh_args.seed, "Base seed");
  coh_cmd->add_flag("--json", coh_args.as_json, "JSON report");
  coh_cmd->add_option("--out", coh_args.out, "Write grid CSV to this path");

  CLI::App* mom_cmd = verify_cmd->add_subcommand(
      "moments", "Even-moment ordering of phase vs sign inner products");
  mom_cmd->add_option("-M,--measurements", mom_args.m, "Vector length M")
      ->required();
  mom_cmd->add_option("--kmax", mom_args.k_max, "Largest moment order");
  mom_cmd->add_option("--samples,--trials", mom_args.samples,
                      "Sample count (default 200000)");
  mom_cmd->add_option("--seed", mom_args.seed, "Base seed");
  mom_cmd->add_flag("--json", mom_args.as_json, "JSON report");
  mom_cmd->add_option("--out", mom_args.out, "Write moment table to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the one-line diagnostic
    return kExitUsage;
  }

  try {
    if (bounds_cmd->parsed()) return run_bounds(bounds_args);
    if (sim_cmd->parsed()) return run_simulate(sim_args);
    if (fig_cmd->parsed()) return run_figure1(fig_args);
    if (verify_cmd->parsed()) {
      if (tail_cmd->parsed()) return run_verify_tail(tail_args);
      if (coh_cmd->parsed()) return run_verify_coherence(coh_args);
      if (mom_cmd->parsed()) return run_verify_moments(mom_args);
    }
  } catch (const ompsd::DomainError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const ompsd::DimensionError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitVerifyFail;
  }
  return kExitUsage;
}
