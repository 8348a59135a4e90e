#pragma once

// Seeded generators for the bivariate benchmark processes. Identical seed
// and parameters give bit-identical series (see rng.hpp for the pinned
// stream). Draw order is fixed: within a time step, component 1 before
// component 2.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mei/rng.hpp"
#include "mei/series.hpp"

namespace mei {

// Squared-ARCH recursion x_{l+1} = (eta + lambda * x_l) * xi^2 per
// component, xi standard normal. lambda must stay below 2*exp(gamma) for
// stationarity.
struct ArchParams {
  double eta1 = 2e-5;
  double eta2 = 2e-5;
  double lambda1 = 0.7;
  double lambda2 = 0.3;
  std::size_t burnin = 1000;

  void validate() const {
    const double upper = 2.0 * std::exp(std::numbers::egamma);
    if (!(eta1 > 0.0) || !(eta2 > 0.0))
      throw std::invalid_argument("ARCH needs eta_i > 0");
    if (!(lambda1 > 0.0 && lambda1 < upper && lambda2 > 0.0 &&
          lambda2 < upper))
      throw std::invalid_argument(
          "ARCH needs lambda_i in (0, 2*exp(gamma)) for stationarity");
  }
};

// AR(1) recursion x_{l+1} = rho * x_l + xi_{l+1} per component, with
// innovation pairs from the bivariate logistic max-stable law (unit Frechet
// margins, dependence alpha).
struct Ar1Params {
  double rho1 = 0.5;
  double rho2 = 0.5;
  double alpha = 0.5;
  std::size_t burnin = 1000;

  Ar1Params() = default;

  // Burn-in long enough that the zero initialization has contracted below
  // 1e-12 of scale, floored at 1000 steps.
  Ar1Params(double r1, double r2, double a)
      : rho1(r1), rho2(r2), alpha(a),
        burnin(recommended_burnin(std::max(r1, r2))) {
    validate();
  }

  Ar1Params(double r1, double r2, double a, std::size_t b)
      : rho1(r1), rho2(r2), alpha(a), burnin(b) {
    validate();
  }

  static std::size_t recommended_burnin(double rho) {
    if (!(rho > 0.0 && rho < 1.0))
      throw std::invalid_argument("AR(1) needs rho in (0, 1)");
    const double steps = std::ceil(std::log(1e-12) / std::log(rho));
    return std::max<std::size_t>(1000, static_cast<std::size_t>(steps));
  }

  void validate() const {
    if (!(rho1 > 0.0 && rho1 < 1.0 && rho2 > 0.0 && rho2 < 1.0))
      throw std::invalid_argument("AR(1) needs rho_i in (0, 1)");
    if (!(alpha > 0.0 && alpha <= 1.0))
      throw std::invalid_argument("AR(1) needs alpha in (0, 1]");
  }
};

// Two independent columns of i.i.d. standard exponentials.
inline MultivariateSeries simulate_iid_exp(std::size_t n, Seed seed) {
  if (n == 0) throw std::invalid_argument("need n >= 1");
  Rng rng(seed);
  std::vector<std::vector<double>> cols(2);
  cols[0].reserve(n);
  cols[1].reserve(n);
  for (std::size_t l = 0; l < n; ++l) {
    cols[0].push_back(rng.exponential());
    cols[1].push_back(rng.exponential());
  }
  return MultivariateSeries(std::move(cols));
}

inline MultivariateSeries simulate_arch(std::size_t n, const ArchParams& p,
                                        Seed seed) {
  if (n == 0) throw std::invalid_argument("need n >= 1");
  p.validate();
  Rng rng(seed);
  std::vector<std::vector<double>> cols(2);
  cols[0].reserve(n);
  cols[1].reserve(n);
  double x1 = p.eta1;
  double x2 = p.eta2;
  for (std::size_t step = 0; step < p.burnin + n; ++step) {
    const double z1 = rng.normal();
    x1 = (p.eta1 + p.lambda1 * x1) * z1 * z1;
    const double z2 = rng.normal();
    x2 = (p.eta2 + p.lambda2 * x2) * z2 * z2;
    if (step >= p.burnin) {
      cols[0].push_back(x1);
      cols[1].push_back(x2);
    }
  }
  return MultivariateSeries(std::move(cols));
}

namespace detail {

// Positive alpha-stable variate with Laplace transform exp(-s^alpha),
// 0 < alpha < 1, via Kanter's representation:
//   S = (a(U)/W)^((1-alpha)/alpha),  U uniform on (0, pi), W exponential,
//   a(u) = sin(alpha u)^(alpha/(1-alpha)) sin((1-alpha) u) / sin(u)^(1/(1-alpha)).
inline double positive_stable(double alpha, Rng& rng) {
  const double u = rng.uniform() * std::numbers::pi;
  const double w = rng.exponential();
  const double a = std::pow(std::sin(alpha * u), alpha / (1.0 - alpha)) *
                   std::sin((1.0 - alpha) * u) /
                   std::pow(std::sin(u), 1.0 / (1.0 - alpha));
  return std::pow(a / w, (1.0 - alpha) / alpha);
}

}  // namespace detail

// One draw from the bivariate logistic max-stable law with unit Frechet
// margins: xi_i = (S / E_i)^alpha with S positive alpha-stable shared
// between the components. alpha = 1/2 uses the exact Levy form S = 1/(2 Z^2);
// alpha = 1 degenerates to independent 1/E draws.
inline std::pair<double, double> sample_logistic_frechet_pair(double alpha,
                                                              Rng& rng) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("logistic dependence needs alpha in (0, 1]");
  if (alpha == 1.0)
    return {1.0 / rng.exponential(), 1.0 / rng.exponential()};

  double s;
  if (alpha == 0.5) {
    double z = rng.normal();
    while (z == 0.0) z = rng.normal();
    s = 0.5 / (z * z);
  } else {
    s = detail::positive_stable(alpha, rng);
  }
  const double e1 = rng.exponential();
  const double e2 = rng.exponential();
  return {std::pow(s / e1, alpha), std::pow(s / e2, alpha)};
}

inline MultivariateSeries simulate_ar1(std::size_t n, const Ar1Params& p,
                                       Seed seed) {
  if (n == 0) throw std::invalid_argument("need n >= 1");
  p.validate();
  Rng rng(seed);
  std::vector<std::vector<double>> cols(2);
  cols[0].reserve(n);
  cols[1].reserve(n);
  double x1 = 0.0;
  double x2 = 0.0;
  for (std::size_t step = 0; step < p.burnin + n; ++step) {
    const auto [xi1, xi2] = sample_logistic_frechet_pair(p.alpha, rng);
    x1 = p.rho1 * x1 + xi1;
    x2 = p.rho2 * x2 + xi2;
    if (step >= p.burnin) {
      cols[0].push_back(x1);
      cols[1].push_back(x2);
    }
  }
  return MultivariateSeries(std::move(cols));
}

}  // namespace mei
