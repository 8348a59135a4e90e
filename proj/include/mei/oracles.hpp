#pragma once

// Ground truth for the benchmark processes: stable tail dependence
// functions, extremal index values, the squared-ARCH tail exponent and the
// asymptotic variances of the estimators in the independent case.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "mei/errors.hpp"
#include "mei/estimators.hpp"
#include "mei/rng.hpp"
#include "mei/series.hpp"

namespace mei {

// Bivariate logistic dependence function
//   B(x1, x2) = (x1^(-1/alpha) + x2^(-1/alpha))^alpha,  alpha in (0, 1].
// alpha = 1 is independence, alpha -> 0 complete dependence. Infinite
// coordinates are allowed: a component at +inf contributes nothing.
class LogisticTail {
 public:
  explicit LogisticTail(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0) || !(alpha <= 1.0))
      throw std::invalid_argument("logistic dependence needs alpha in (0, 1]");
  }

  double alpha() const { return alpha_; }

  double B(double x1, double x2) const {
    if (!(x1 > 0.0) || !(x2 > 0.0))
      throw std::invalid_argument("B needs positive coordinates");
    const double s =
        std::pow(x1, -1.0 / alpha_) + std::pow(x2, -1.0 / alpha_);
    return std::pow(s, alpha_);
  }

 private:
  double alpha_;
};

// --- independent exponential benchmark ------------------------------------

inline double stable_tail_iid(const Direction& tau) {
  double s = 0.0;
  for (double t : tau.values()) s += t;
  return s;
}

inline double theta_iid(const Direction&) { return 1.0; }

// --- AR(1) with logistic max-stable innovations ----------------------------

// Series representation of the stable tail dependence function:
//   S(tau) = sum_{k>=0} ((w1 * rho1^k)^(1/alpha) + (w2 * rho2^k)^(1/alpha))^alpha
// with w_i = (1 - rho_i) * tau_i. Terms decay geometrically; summation stops
// once a term drops below tol relative to the running sum.
inline double stable_tail_ar1(const Direction& tau, double rho1, double rho2,
                              const LogisticTail& B, double tol = 1e-14) {
  if (tau.dim() != 2)
    throw std::invalid_argument("AR(1) tail function is bivariate");
  if (!(rho1 > 0.0 && rho1 < 1.0 && rho2 > 0.0 && rho2 < 1.0))
    throw std::invalid_argument("AR(1) needs rho_i in (0, 1)");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");

  const double inv_a = 1.0 / B.alpha();
  double w1 = (1.0 - rho1) * tau[0];
  double w2 = (1.0 - rho2) * tau[1];
  double sum = 0.0;
  for (std::size_t k = 0; k < 1000000; ++k) {
    const double term =
        std::pow(std::pow(w1, inv_a) + std::pow(w2, inv_a), B.alpha());
    sum += term;
    if (term < tol * sum) break;
    w1 *= rho1;
    w2 *= rho2;
  }
  return sum;
}

inline double theta_ar1(const Direction& tau, double rho1, double rho2,
                        const LogisticTail& B, double tol = 1e-14) {
  const double s = stable_tail_ar1(tau, rho1, rho2, B, tol);
  const Direction shrunk({rho1 * tau[0], rho2 * tau[1]});
  const double s_shrunk = stable_tail_ar1(shrunk, rho1, rho2, B, tol);
  return (s - s_shrunk) / s;
}

// --- squared-ARCH benchmark -------------------------------------------------

// The two components are independent, so the index function is the
// tau-weighted mean of the per-component extremal indexes.
inline double theta_arch(const Direction& tau, double theta_comp1 = 0.579,
                         double theta_comp2 = 0.887) {
  if (tau.dim() != 2)
    throw std::invalid_argument("ARCH index function is bivariate");
  if (!(theta_comp1 > 0.0 && theta_comp1 <= 1.0 && theta_comp2 > 0.0 &&
        theta_comp2 <= 1.0))
    throw std::invalid_argument("component indexes must lie in (0, 1]");
  return (theta_comp1 * tau[0] + theta_comp2 * tau[1]) / (tau[0] + tau[1]);
}

// Tail exponent of the squared-ARCH recursion: the positive root of
//   E(lambda * xi^2)^kappa = 1,  xi standard normal,
// using E xi^(2k) = 2^k Gamma(k + 1/2) / Gamma(1/2). The log-moment is
// convex, negative-sloped at zero iff lambda < 2 e^gamma, so a unique
// positive root exists exactly on that range.
inline double solve_kappa(double lambda) {
  const double upper = 2.0 * std::exp(std::numbers::egamma);
  if (!(lambda > 0.0) || !(lambda < upper))
    throw NoRoot("moment equation has a positive root only for lambda in (0, "
                 "2*exp(gamma)); got lambda=" +
                 std::to_string(lambda));

  const auto log_moment = [lambda](double k) {
    return k * std::log(2.0 * lambda) + std::lgamma(k + 0.5) -
           std::lgamma(0.5);
  };

  double lo = 1e-12;  // log-moment is negative just right of zero
  double hi = 1.0;
  while (log_moment(hi) <= 0.0) {
    hi *= 2.0;
    if (hi > 1e6) throw NoRoot("failed to bracket the moment-equation root");
  }
  for (int iter = 0; iter < 200 && hi - lo > 1e-12; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (log_moment(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Monte Carlo estimate of a per-component squared-ARCH extremal index:
//   theta = P( X * sup_{j>=1} prod_{l<=j} (lambda * xi_l^2) <= 1 ),
// with X Pareto(kappa) on [1, inf) independent of the i.i.d. standard
// normal xi_l. Paths are followed until the running product drops below
// 1e-10; recovery past that point has negligible probability because the
// log-product drifts downward.
inline double mc_theta_component_arch(double lambda, double kappa,
                                      std::size_t n_paths, Seed seed) {
  if (n_paths == 0) throw std::invalid_argument("need at least one path");
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  const double upper = 2.0 * std::exp(std::numbers::egamma);
  if (!(lambda > 0.0) || !(lambda < upper))
    throw std::invalid_argument("lambda must lie in (0, 2*exp(gamma))");

  Rng rng(seed);
  std::size_t below = 0;
  for (std::size_t p = 0; p < n_paths; ++p) {
    const double pareto = std::pow(rng.uniform(), -1.0 / kappa);
    double prod = 1.0;
    bool exceeded = false;
    for (std::size_t step = 0; step < 100000; ++step) {
      const double z = rng.normal();
      prod *= lambda * z * z;
      if (pareto * prod > 1.0) {
        exceeded = true;
        break;
      }
      if (prod < 1e-10) break;
    }
    below += !exceeded;
  }
  return static_cast<double>(below) / static_cast<double>(n_paths);
}

// --- asymptotic variances in the independent case ---------------------------

enum class EstimatorKind { Ratio = 1, RankBlock = 2 };

// (e^m - 1 - m) / m^2, series-evaluated near zero where the direct formula
// cancels catastrophically. Limit 1/2 as m -> 0+.
inline double exp_variance_shape(double m) {
  if (!(m >= 0.0)) throw std::invalid_argument("argument must be >= 0");
  if (m < 1e-4)
    return 0.5 + m / 6.0 + m * m / 24.0 + m * m * m / 120.0;
  return (std::exp(m) - 1.0 - m) / (m * m);
}

// Asymptotic variance (per block, i.e. the k_n * Var limit) of the two
// point estimators when the series is independent in time:
//   theta1: shape(M) with M = S(tau) / L(tau);
//   theta2: shape(kappa), free of tau.
inline double asym_var_iid(EstimatorKind which, const Direction& tau,
                           const HomogeneousNorm& L, double kappa) {
  if (which == EstimatorKind::Ratio) {
    if (!L.is_power())
      throw std::invalid_argument(
          "asymptotic variance needs a homogeneous power norm");
    const double m = stable_tail_iid(tau) / L(tau);
    return exp_variance_shape(m);
  }
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  return exp_variance_shape(kappa);
}

// --- bundled process truth --------------------------------------------------

enum class ProcessKind { IidExp, Arch, Ar1 };

// Extremal index function and stable tail dependence function of a
// benchmark process, for bias/RMSE accounting in experiments.
class ProcessOracle {
 public:
  static ProcessOracle iid_exp() { return ProcessOracle(ProcessKind::IidExp); }

  static ProcessOracle arch(double theta_comp1 = 0.579,
                            double theta_comp2 = 0.887) {
    ProcessOracle o(ProcessKind::Arch);
    o.arch_theta1_ = theta_comp1;
    o.arch_theta2_ = theta_comp2;
    return o;
  }

  static ProcessOracle ar1(double rho1, double rho2, LogisticTail B) {
    ProcessOracle o(ProcessKind::Ar1);
    o.rho1_ = rho1;
    o.rho2_ = rho2;
    o.alpha_ = B.alpha();
    return o;
  }

  ProcessKind kind() const { return kind_; }

  double theta(const Direction& tau) const {
    switch (kind_) {
      case ProcessKind::IidExp:
        return theta_iid(tau);
      case ProcessKind::Arch:
        return theta_arch(tau, arch_theta1_, arch_theta2_);
      case ProcessKind::Ar1:
        return theta_ar1(tau, rho1_, rho2_, LogisticTail(alpha_));
    }
    throw std::logic_error("unreachable");
  }

  double stable_tail(const Direction& tau) const {
    switch (kind_) {
      case ProcessKind::IidExp:
      case ProcessKind::Arch:  // independent components
        return stable_tail_iid(tau);
      case ProcessKind::Ar1:
        return stable_tail_ar1(tau, rho1_, rho2_, LogisticTail(alpha_));
    }
    throw std::logic_error("unreachable");
  }

 private:
  explicit ProcessOracle(ProcessKind kind) : kind_(kind) {}

  ProcessKind kind_;
  double arch_theta1_ = 0.579;
  double arch_theta2_ = 0.887;
  double rho1_ = 0.5;
  double rho2_ = 0.5;
  double alpha_ = 0.5;
};

}  // namespace mei
