#pragma once

// Command line front end with three subcommands:
//   simulate    write a benchmark series as CSV
//   estimate    run an estimator over directions of an input series
//   experiment  run a JSON-configured Monte Carlo study
// Exit codes: 0 ok, 1 usage/config error, 2 data error, 3 empty cells.

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "mei/config.hpp"
#include "mei/csv.hpp"
#include "mei/errors.hpp"
#include "mei/estimators.hpp"
#include "mei/experiment.hpp"
#include "mei/series.hpp"
#include "mei/simulate.hpp"
#include "mei/version.hpp"

namespace mei {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitEmptyCells = 3;

namespace cli_detail {

struct UsageError : Error {
  using Error::Error;
};

inline std::vector<double> parse_real_list(const std::string& text,
                                           const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    double v = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end)
      throw UsageError(what + ": cannot parse '" + cell + "' as a real");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError(what + " must not be empty");
  return out;
}

inline HomogeneousNorm parse_norm(const std::string& text) {
  if (text == "const1") return HomogeneousNorm::constant_one_diagnostic();
  const auto vals = parse_real_list(text, "--L");
  if (vals.size() != 2)
    throw UsageError("--L expects 'c,a' (two reals) or 'const1'");
  return HomogeneousNorm::power(vals[0], vals[1]);
}

inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("MEI_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

// Output goes to the named file, or to stdout for "-"/empty.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_)
        throw UsageError("cannot open output file '" + path + "'");
      use_file_ = true;
    }
  }
  std::ostream& stream() { return use_file_ ? file_ : std::cout; }

 private:
  std::ofstream file_;
  bool use_file_ = false;
};

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CsvError("cannot open input file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace cli_detail

// --- simulate ---------------------------------------------------------------

struct SimulateOptions {
  std::string process;  // iid | arch | ar1
  std::size_t n = 2000;
  std::uint64_t seed = 1;
  std::string out;  // empty = stdout
  ArchParams arch;
  double rho = 0.5;
  std::optional<double> rho1, rho2;
  double alpha = 0.5;
  std::optional<std::uint64_t> burnin;
};

inline int cmd_simulate(const SimulateOptions& opt) {
  std::ostringstream param_desc;
  MultivariateSeries series = [&] {
    if (opt.process == "iid") {
      param_desc << "process: iid n=" << opt.n;
      return simulate_iid_exp(opt.n, Seed{opt.seed});
    }
    if (opt.process == "arch") {
      ArchParams p = opt.arch;
      if (opt.burnin) p.burnin = static_cast<std::size_t>(*opt.burnin);
      param_desc << "process: arch eta=(" << fmt_real(p.eta1) << ","
                 << fmt_real(p.eta2) << ") lambda=(" << fmt_real(p.lambda1)
                 << "," << fmt_real(p.lambda2) << ") burnin=" << p.burnin
                 << " n=" << opt.n;
      return simulate_arch(opt.n, p, Seed{opt.seed});
    }
    const double r1 = opt.rho1.value_or(opt.rho);
    const double r2 = opt.rho2.value_or(opt.rho);
    Ar1Params p(r1, r2, opt.alpha);
    if (opt.burnin) p.burnin = static_cast<std::size_t>(*opt.burnin);
    param_desc << "process: ar1 rho=(" << fmt_real(r1) << "," << fmt_real(r2)
               << ") alpha=" << fmt_real(opt.alpha) << " burnin=" << p.burnin
               << " n=" << opt.n;
    return simulate_ar1(opt.n, p, Seed{opt.seed});
  }();

  CsvMetadata meta;
  meta.seed = std::to_string(opt.seed);
  meta.config_hash = hex64(fnv1a64(param_desc.str()));
  meta.extra.push_back(param_desc.str());

  cli_detail::OutputTarget target(opt.out);
  write_series_csv(target.stream(), series, meta);
  std::cerr << "rng: " << kRngId << "\nseed: " << opt.seed << "\n";
  return kExitOk;
}

// --- estimate ---------------------------------------------------------------

struct EstimateOptions {
  std::string in;
  int est = 2;
  std::size_t kn = 0;
  std::string tau;      // comma list; empty if --angles used
  unsigned angles = 0;  // 0 if --tau used
  std::string L = "1,1";
  double kappa = 1.0;
  double sigma = 0.5;
  double phi = 1.5;
  std::size_t quad_points = 64;
  std::string out;  // empty = stdout
};

inline int cmd_estimate(const EstimateOptions& opt) {
  std::istringstream csv_in(cli_detail::read_text_file(opt.in));
  const SeriesCsv parsed = read_series_csv(csv_in);
  const MultivariateSeries series = parsed.series();
  const std::size_t n = series.rows();
  const std::size_t d = series.cols();

  if (opt.kn == 0 || opt.kn >= n)
    throw cli_detail::UsageError("--kn must satisfy 1 <= k_n < n (n = " +
                                 std::to_string(n) + ")");
  const BlockScheme scheme = BlockScheme::for_series(n, opt.kn);
  if (n > scheme.n_used())
    std::cerr << "note: dropped " << (n - scheme.n_used())
              << " trailing observations (n_used = " << scheme.n_used()
              << ")\n";

  const HomogeneousNorm norm = cli_detail::parse_norm(opt.L);

  std::vector<Direction> directions;
  if (!opt.tau.empty()) {
    const auto vals = cli_detail::parse_real_list(opt.tau, "--tau");
    if (vals.size() != d)
      throw cli_detail::UsageError(
          "--tau has " + std::to_string(vals.size()) +
          " components but the series has " + std::to_string(d) + " columns");
    directions.emplace_back(vals);
  } else {
    if (d != 2)
      throw cli_detail::UsageError("--angles needs a 2-column series");
    for (const auto& [phi, tau] : angle_grid(opt.angles))
      directions.push_back(tau);
  }

  std::ostringstream config_desc;
  config_desc << "est=" << opt.est << " kn=" << opt.kn << " L=" << opt.L
              << " kappa=" << fmt_real(opt.kappa) << " sigma="
              << fmt_real(opt.sigma) << " phi=" << fmt_real(opt.phi)
              << " quad=" << opt.quad_points << " tau=" << opt.tau
              << " angles=" << opt.angles;
  CsvMetadata meta;
  meta.config_hash = hex64(fnv1a64(config_desc.str()));
  meta.extra.push_back("estimate " + config_desc.str());

  cli_detail::OutputTarget target(opt.out);
  std::ostream& os = target.stream();
  write_metadata(os, meta);
  for (std::size_t i = 0; i < d; ++i) os << "tau" << (i + 1) << ",";
  os << "theta_hat,H_hat,neg_log_Htilde_hat,k_n,r_n,error\n";

  for (const Direction& tau : directions) {
    for (std::size_t i = 0; i < d; ++i) os << fmt_real(tau[i]) << ",";
    std::string error_name;
    try {
      if (opt.est == 1) {
        const EstimatorReport rep = theta1(series, tau, scheme, norm);
        os << fmt_real(rep.theta_hat) << "," << fmt_real(rep.H_hat) << ","
           << fmt_real(rep.neg_log_Htilde_hat);
      } else if (opt.est == 2) {
        const EstimatorReport rep = theta2(series, tau, opt.kappa, scheme);
        os << fmt_real(rep.theta_hat) << "," << fmt_real(rep.H_hat) << ","
           << fmt_real(rep.neg_log_Htilde_hat);
      } else {
        const double t = theta3(series, tau, opt.sigma, opt.phi, scheme,
                                opt.quad_points);
        os << fmt_real(t) << ",,";
      }
    } catch (const AllBlocksExceed&) {
      error_name = "AllBlocksExceed";
    } catch (const NoExceedances&) {
      error_name = "NoExceedances";
    } catch (const LevelTooDeep&) {
      error_name = "LevelTooDeep";
    } catch (const InvalidRank&) {
      error_name = "InvalidRank";
    }
    if (!error_name.empty()) os << ",,";
    os << "," << scheme.k_n << "," << scheme.r_n << "," << error_name << "\n";
  }
  return kExitOk;
}

// --- experiment -------------------------------------------------------------

inline int cmd_experiment(const std::string& config_path,
                          const std::string& out_override, unsigned threads,
                          std::ostream& log) {
  std::string config_text;
  try {
    config_text = cli_detail::read_text_file(config_path);
  } catch (const CsvError& e) {
    throw ConfigError(e.what());
  }
  const RunConfig rc = parse_run_config(config_text);
  const std::string out_path = out_override.empty() ? rc.output : out_override;

  const unsigned n_threads = cli_detail::resolve_threads(threads);
  const MonteCarloResult result = run_monte_carlo(rc.experiment, n_threads);

  CsvMetadata meta;
  meta.seed = std::to_string(rc.experiment.base_seed.value);
  meta.config_hash = hex64(fnv1a64(config_text));
  meta.extra.push_back("config-file: " + config_path);

  std::ofstream os(out_path, std::ios::binary);
  if (!os)
    throw cli_detail::UsageError("cannot open output file '" + out_path + "'");
  write_experiment_csv(os, result.rows, meta);

  log << "wrote " << result.rows.size() << " rows to " << out_path << "\n";
  if (!result.empty_cells.empty()) {
    for (const auto& diag : result.empty_cells)
      log << "empty cell: " << diag << "\n";
    return kExitEmptyCells;
  }
  return kExitOk;
}

// --- dispatch ---------------------------------------------------------------

inline int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Block-declustering estimation of the multivariate extremal "
               "index function of a stationary series"};
  app.set_version_flag("--version", std::string("mei ") + kVersion);
  app.require_subcommand(1);

  // simulate
  SimulateOptions sim;
  auto* simulate_cmd =
      app.add_subcommand("simulate", "Generate a benchmark series as CSV");
  simulate_cmd->require_subcommand(1);
  const auto add_common_sim = [&](CLI::App* sub) {
    sub->add_option("--n", sim.n, "Series length")->required();
    sub->add_option("--seed", sim.seed, "RNG seed");
    sub->add_option("--out", sim.out, "Output CSV path (default stdout)");
  };
  auto* sim_iid = simulate_cmd->add_subcommand(
      "iid", "Independent bivariate standard exponentials");
  add_common_sim(sim_iid);
  auto* sim_arch = simulate_cmd->add_subcommand(
      "arch", "Bivariate squared-ARCH recursion");
  add_common_sim(sim_arch);
  double eta_shared = 2e-5;
  sim_arch->add_option("--eta", eta_shared, "Shared intercept eta");
  sim_arch->add_option("--lambda1", sim.arch.lambda1, "Component 1 slope");
  sim_arch->add_option("--lambda2", sim.arch.lambda2, "Component 2 slope");
  std::uint64_t burnin_opt = 0;
  auto* arch_burnin =
      sim_arch->add_option("--burnin", burnin_opt, "Burn-in steps");
  auto* sim_ar1 = simulate_cmd->add_subcommand(
      "ar1", "Bivariate AR(1) with logistic max-stable innovations");
  add_common_sim(sim_ar1);
  sim_ar1->add_option("--rho", sim.rho, "Shared autoregression coefficient");
  double rho1_opt = 0.0, rho2_opt = 0.0;
  auto* ar1_rho1 = sim_ar1->add_option("--rho1", rho1_opt, "Component 1 rho");
  auto* ar1_rho2 = sim_ar1->add_option("--rho2", rho2_opt, "Component 2 rho");
  sim_ar1->add_option("--alpha", sim.alpha,
                      "Logistic dependence in (0,1], 1 = independent");
  auto* ar1_burnin =
      sim_ar1->add_option("--burnin", burnin_opt, "Burn-in steps");

  // estimate
  EstimateOptions est;
  auto* estimate_cmd = app.add_subcommand(
      "estimate", "Estimate the extremal index function of a CSV series");
  estimate_cmd->add_option("--in", est.in, "Input series CSV")->required();
  estimate_cmd->add_option("--est", est.est, "Estimator: 1, 2 or 3")
      ->required()
      ->check(CLI::Range(1, 3));
  estimate_cmd->add_option("--kn", est.kn, "Number of blocks k_n")->required();
  auto* tau_opt = estimate_cmd->add_option(
      "--tau", est.tau, "Direction as comma-separated components");
  auto* angles_opt = estimate_cmd->add_option(
      "--angles", est.angles, "Evaluate on K directions (cos,sin)(k pi/22)");
  tau_opt->excludes(angles_opt);
  auto* L_opt = estimate_cmd->add_option(
      "--L", est.L, "Norm for estimator 1: 'c,a' or 'const1'");
  auto* kappa_opt =
      estimate_cmd->add_option("--kappa", est.kappa, "Level for estimator 2");
  auto* sigma_opt = estimate_cmd->add_option(
      "--sigma", est.sigma, "Ray lower end for estimator 3");
  auto* phi_opt =
      estimate_cmd->add_option("--phi", est.phi, "Ray upper end for estimator 3");
  auto* quad_opt = estimate_cmd->add_option(
      "--quad", est.quad_points, "Quadrature nodes for estimator 3");
  estimate_cmd->add_option("--out", est.out, "Output CSV path (default stdout)");

  // experiment
  std::string config_path;
  std::string experiment_out;
  unsigned threads = 0;
  auto* experiment_cmd = app.add_subcommand(
      "experiment", "Run a JSON-configured Monte Carlo study");
  experiment_cmd->add_option("config", config_path, "Run configuration JSON")
      ->required();
  experiment_cmd->add_option("--out", experiment_out,
                             "Override the configured output path");
  experiment_cmd->add_option(
      "--threads", threads,
      "Worker threads (default: MEI_THREADS or hardware)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (simulate_cmd->parsed()) {
      if (sim_iid->parsed()) sim.process = "iid";
      if (sim_arch->parsed()) {
        sim.process = "arch";
        sim.arch.eta1 = eta_shared;
        sim.arch.eta2 = eta_shared;
        if (arch_burnin->count() > 0) sim.burnin = burnin_opt;
      }
      if (sim_ar1->parsed()) {
        sim.process = "ar1";
        if (ar1_rho1->count() > 0) sim.rho1 = rho1_opt;
        if (ar1_rho2->count() > 0) sim.rho2 = rho2_opt;
        if (ar1_burnin->count() > 0) sim.burnin = burnin_opt;
      }
      return cmd_simulate(sim);
    }
    if (estimate_cmd->parsed()) {
      if (tau_opt->count() == 0 && angles_opt->count() == 0)
        throw cli_detail::UsageError("one of --tau or --angles is required");
      if (angles_opt->count() > 0) est.tau.clear();
      if (est.est != 1 && L_opt->count() > 0)
        throw cli_detail::UsageError("--L applies to estimator 1 only");
      if (est.est != 2 && kappa_opt->count() > 0)
        throw cli_detail::UsageError("--kappa applies to estimator 2 only");
      if (est.est != 3 &&
          (sigma_opt->count() > 0 || phi_opt->count() > 0 ||
           quad_opt->count() > 0))
        throw cli_detail::UsageError(
            "--sigma/--phi/--quad apply to estimator 3 only");
      return cmd_estimate(est);
    }
    return cmd_experiment(config_path, experiment_out, threads, std::cerr);
  } catch (const cli_detail::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CsvError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace mei
