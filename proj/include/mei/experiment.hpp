#pragma once

// Monte Carlo benchmarking harness: run an estimator grid
// (block count x estimator variant x direction) over replicated simulations
// of a benchmark process and summarize bias, RMSE, sample variance and,
// where the asymptotic variance is known, the variance ratio.
//
// Replication r always uses seed base_seed + r and every (replication, cell)
// estimate lands in a preassigned slot, so results are identical for any
// worker-thread count.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "mei/errors.hpp"
#include "mei/estimators.hpp"
#include "mei/oracles.hpp"
#include "mei/series.hpp"
#include "mei/simulate.hpp"

namespace mei {

// One estimator variant of the grid. id selects which parameters matter:
// 1 uses L, 2 uses kappa, 3 uses the ray [sigma, phi] with quad_points nodes.
struct EstimatorSpec {
  int id = 2;
  HomogeneousNorm L = HomogeneousNorm::power(1.0, 1.0);
  double kappa = 1.0;
  double sigma = 0.5;
  double phi = 1.5;
  std::size_t quad_points = 64;

  void validate() const {
    if (id < 1 || id > 3)
      throw ConfigError("estimator id must be 1, 2 or 3");
    if (id == 2 && !(kappa > 0.0))
      throw ConfigError("estimator 2 needs kappa > 0");
    if (id == 3 && !(sigma > 0.0 && phi > sigma && quad_points >= 2))
      throw ConfigError("estimator 3 needs 0 < sigma < phi and >= 2 nodes");
  }

  std::string label() const {
    const auto num = [](double v) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%g", v);
      std::string s(buf);
      for (char& ch : s)
        if (ch == '.') ch = 'p';
      return s;
    };
    switch (id) {
      case 1:
        return L.is_power() ? "theta1_L" + num(L.c()) + "_" + num(L.a())
                            : "theta1_Lconst1";
      case 2:
        return "theta2_k" + num(kappa);
      default:
        return "theta3_" + num(sigma) + "_" + num(phi);
    }
  }
};

// Benchmark process choice plus its simulation parameters and the matching
// ground truth.
struct ProcessSpec {
  ProcessKind kind = ProcessKind::IidExp;
  ArchParams arch;
  Ar1Params ar1;
  // Per-component extremal indexes used by the ARCH oracle; the defaults
  // belong to lambda = (0.7, 0.3).
  double arch_theta_comp1 = 0.579;
  double arch_theta_comp2 = 0.887;

  std::string name() const {
    switch (kind) {
      case ProcessKind::IidExp:
        return "iid";
      case ProcessKind::Arch:
        return "arch";
      case ProcessKind::Ar1:
        return "ar1";
    }
    return "?";
  }

  ProcessOracle oracle() const {
    switch (kind) {
      case ProcessKind::IidExp:
        return ProcessOracle::iid_exp();
      case ProcessKind::Arch:
        return ProcessOracle::arch(arch_theta_comp1, arch_theta_comp2);
      case ProcessKind::Ar1:
        return ProcessOracle::ar1(ar1.rho1, ar1.rho2, LogisticTail(ar1.alpha));
    }
    throw std::logic_error("unreachable");
  }

  MultivariateSeries simulate(std::size_t n, Seed seed) const {
    switch (kind) {
      case ProcessKind::IidExp:
        return simulate_iid_exp(n, seed);
      case ProcessKind::Arch:
        return simulate_arch(n, arch, seed);
      case ProcessKind::Ar1:
        return simulate_ar1(n, ar1, seed);
    }
    throw std::logic_error("unreachable");
  }
};

struct ExperimentConfig {
  ProcessSpec process;
  std::size_t n = 2000;
  std::size_t replications = 500;
  std::vector<std::size_t> kn_grid;
  std::vector<EstimatorSpec> estimators;
  std::size_t angle_count = 10;
  Seed base_seed;

  void validate() const {
    if (n == 0) throw ConfigError("need n >= 1");
    if (replications == 0) throw ConfigError("need replications >= 1");
    if (kn_grid.empty()) throw ConfigError("kn_grid must not be empty");
    for (std::size_t k : kn_grid) {
      if (k == 0 || k > n)
        throw ConfigError("every k_n must satisfy 1 <= k_n <= n");
      if (n / k < 2)
        throw ConfigError("k_n = " + std::to_string(k) +
                          " leaves blocks shorter than 2 (r_n = floor(n/k_n))");
    }
    if (estimators.empty()) throw ConfigError("estimator list must not be empty");
    for (const auto& e : estimators) e.validate();
    if (angle_count == 0) throw ConfigError("need at least one angle");
    if (angle_count > 11)
      throw ConfigError("angle grid uses tau = (cos, sin)(k*pi/22); beyond "
                        "k = 11 the first component turns negative");
  }
};

// Unit directions tau_k = (cos(k pi / 22), sin(k pi / 22)), k = 1..count.
inline std::vector<std::pair<double, Direction>> angle_grid(
    std::size_t count) {
  if (count == 0 || count > 11)
    throw std::invalid_argument("angle count must lie in 1..11");
  std::vector<std::pair<double, Direction>> out;
  out.reserve(count);
  for (std::size_t k = 1; k <= count; ++k) {
    const double phi =
        static_cast<double>(k) * std::numbers::pi / 22.0;
    out.emplace_back(phi, Direction({std::cos(phi), std::sin(phi)}));
  }
  return out;
}

// Summary of one (process, estimator, k_n, angle) cell.
struct ResultRow {
  std::string process;
  std::string estimator;
  std::size_t k_n = 0;
  std::size_t r_n = 0;
  std::size_t angle = 0;  // 1-based index into the angle grid
  double phi = 0.0;
  double tau1 = 0.0;
  double tau2 = 0.0;
  double theta_true = 0.0;
  double mean = std::numeric_limits<double>::quiet_NaN();
  double bias = std::numeric_limits<double>::quiet_NaN();
  double rmse = std::numeric_limits<double>::quiet_NaN();
  double sample_variance = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> variance_ratio;
  std::size_t failures = 0;
  std::size_t successes = 0;
};

struct MonteCarloResult {
  std::vector<ResultRow> rows;
  // One diagnostic line per cell whose every replication failed.
  std::vector<std::string> empty_cells;
};

// Sample variance scaled to the per-block normalization, against the known
// asymptotic variance.
inline double variance_ratio(double sample_variance, std::size_t k_n,
                             double asym_var) {
  if (!(asym_var > 0.0))
    throw InvalidVariance("asymptotic variance must be positive");
  return static_cast<double>(k_n) * sample_variance / asym_var;
}

namespace detail {

struct Cell {
  std::size_t k_n;
  std::size_t r_n;
  const EstimatorSpec* est;
  std::size_t angle_index;  // 0-based
};

enum : std::uint8_t {
  kOk = 0,
  kAllBlocksExceed = 1,
  kNoExceedances = 2,
  kLevelTooDeep = 3,
  kOtherError = 4
};

inline const char* status_name(std::uint8_t s) {
  switch (s) {
    case kAllBlocksExceed:
      return "AllBlocksExceed";
    case kNoExceedances:
      return "NoExceedances";
    case kLevelTooDeep:
      return "LevelTooDeep";
    default:
      return "Error";
  }
}

inline double run_cell(const MultivariateSeries& series, const Cell& cell,
                       const Direction& tau) {
  const BlockScheme scheme(cell.k_n, cell.r_n);
  switch (cell.est->id) {
    case 1:
      return theta1(series, tau, scheme, cell.est->L).theta_hat;
    case 2:
      return theta2(series, tau, cell.est->kappa, scheme).theta_hat;
    default:
      return theta3(series, tau, cell.est->sigma, cell.est->phi, scheme,
                    cell.est->quad_points);
  }
}

}  // namespace detail

inline MonteCarloResult run_monte_carlo(const ExperimentConfig& cfg,
                                        unsigned threads = 1) {
  cfg.validate();
  const auto grid = angle_grid(cfg.angle_count);
  const ProcessOracle oracle = cfg.process.oracle();

  std::vector<double> theta_true;
  theta_true.reserve(grid.size());
  for (const auto& [phi, tau] : grid) theta_true.push_back(oracle.theta(tau));

  // Row order of the output table: k_n, then estimator, then angle.
  std::vector<detail::Cell> cells;
  for (std::size_t k : cfg.kn_grid)
    for (const auto& est : cfg.estimators)
      for (std::size_t a = 0; a < grid.size(); ++a)
        cells.push_back({k, cfg.n / k, &est, a});

  const std::size_t n_cells = cells.size();
  const std::size_t reps = cfg.replications;
  std::vector<double> value(reps * n_cells, 0.0);
  std::vector<std::uint8_t> status(reps * n_cells, detail::kOk);

  const auto worker = [&](std::size_t rep_begin, std::size_t rep_end) {
    for (std::size_t r = rep_begin; r < rep_end; ++r) {
      const Seed seed{cfg.base_seed.value + r};
      const MultivariateSeries series = cfg.process.simulate(cfg.n, seed);
      for (std::size_t c = 0; c < n_cells; ++c) {
        const std::size_t slot = r * n_cells + c;
        try {
          value[slot] =
              detail::run_cell(series, cells[c], grid[cells[c].angle_index].second);
        } catch (const AllBlocksExceed&) {
          status[slot] = detail::kAllBlocksExceed;
        } catch (const NoExceedances&) {
          status[slot] = detail::kNoExceedances;
        } catch (const LevelTooDeep&) {
          status[slot] = detail::kLevelTooDeep;
        } catch (const Error&) {
          status[slot] = detail::kOtherError;
        }
      }
    }
  };

  const unsigned n_workers = std::max(
      1u, std::min<unsigned>(threads, static_cast<unsigned>(reps)));
  if (n_workers == 1) {
    worker(0, reps);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    const std::size_t chunk = (reps + n_workers - 1) / n_workers;
    for (unsigned t = 0; t < n_workers; ++t) {
      const std::size_t begin = static_cast<std::size_t>(t) * chunk;
      const std::size_t end = std::min(reps, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(worker, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  MonteCarloResult out;
  out.rows.reserve(n_cells);
  const std::string process_name = cfg.process.name();

  for (std::size_t c = 0; c < n_cells; ++c) {
    const detail::Cell& cell = cells[c];
    const auto& [phi, tau] = grid[cell.angle_index];
    const double truth = theta_true[cell.angle_index];

    ResultRow row;
    row.process = process_name;
    row.estimator = cell.est->label();
    row.k_n = cell.k_n;
    row.r_n = cell.r_n;
    row.angle = cell.angle_index + 1;
    row.phi = phi;
    row.tau1 = tau[0];
    row.tau2 = tau[1];
    row.theta_true = truth;

    // Aggregate in replication order so results do not depend on threading.
    std::vector<double> xs;
    xs.reserve(reps);
    std::size_t error_histogram[5] = {0, 0, 0, 0, 0};
    for (std::size_t r = 0; r < reps; ++r) {
      const std::size_t slot = r * n_cells + c;
      if (status[slot] == detail::kOk)
        xs.push_back(value[slot]);
      else
        ++error_histogram[status[slot]];
    }
    row.successes = xs.size();
    row.failures = reps - xs.size();

    if (xs.empty()) {
      std::string diag = process_name + " " + row.estimator +
                         " k_n=" + std::to_string(cell.k_n) +
                         " angle=" + std::to_string(row.angle) + ": all " +
                         std::to_string(reps) + " replications failed (";
      bool first = true;
      for (std::uint8_t s = 1; s <= 4; ++s) {
        if (error_histogram[s] == 0) continue;
        if (!first) diag += ", ";
        diag += std::string(detail::status_name(s)) + "=" +
                std::to_string(error_histogram[s]);
        first = false;
      }
      diag += ")";
      out.empty_cells.push_back(std::move(diag));
      out.rows.push_back(std::move(row));
      continue;
    }

    const double m = static_cast<double>(xs.size());
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / m;
    double sq_err = 0.0;
    double sq_dev = 0.0;
    for (double x : xs) {
      sq_err += (x - truth) * (x - truth);
      sq_dev += (x - mean) * (x - mean);
    }
    row.mean = mean;
    row.bias = mean - truth;
    row.rmse = std::sqrt(sq_err / m);
    row.sample_variance = xs.size() > 1 ? sq_dev / (m - 1.0) : 0.0;

    if (cfg.process.kind == ProcessKind::IidExp) {
      if (cell.est->id == 1 && cell.est->L.is_power()) {
        const double av =
            asym_var_iid(EstimatorKind::Ratio, tau, cell.est->L, 1.0);
        row.variance_ratio = variance_ratio(row.sample_variance, cell.k_n, av);
      } else if (cell.est->id == 2) {
        const double av = asym_var_iid(EstimatorKind::RankBlock, tau,
                                       cell.est->L, cell.est->kappa);
        row.variance_ratio = variance_ratio(row.sample_variance, cell.k_n, av);
      }
    }

    out.rows.push_back(std::move(row));
  }

  return out;
}

}  // namespace mei
