#pragma once

// Extremal index estimators over a block-declustered series.
//
// Both point estimators compare how often blocks stay free of threshold
// exceedances with how many exceedances there are overall:
//   theta1: thresholds from per-column order statistics at a direction
//           rescaled by a homogeneous norm, ratio -ln(H) / mean count;
//   theta2: thresholds on the rank/Pareto scale, -ln(zero fraction) / kappa;
//   theta3: theta1-type ratio averaged along a ray of directions.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mei/errors.hpp"
#include "mei/series.hpp"

namespace mei {

// Homogeneous-of-order-1 rescaling L_{c,a}(tau) = c * (sum_i tau_i^a)^(1/a),
// plus a constant-one diagnostic variant. The diagnostic is not homogeneous
// and exists only for finite-sample cross-checks against theta2.
class HomogeneousNorm {
 public:
  static HomogeneousNorm power(double c, double a) {
    if (!(c > 0.0) || !(a > 0.0))
      throw std::invalid_argument("power norm needs c > 0 and a > 0");
    return HomogeneousNorm(c, a);
  }

  static HomogeneousNorm constant_one_diagnostic() { return HomogeneousNorm(); }

  bool is_power() const { return is_power_; }
  double c() const { return c_; }
  double a() const { return a_; }

  double operator()(const Direction& tau) const {
    if (!is_power_) return 1.0;
    double s = 0.0;
    for (double t : tau.values()) s += std::pow(t, a_);
    return c_ * std::pow(s, 1.0 / a_);
  }

 private:
  HomogeneousNorm() = default;
  HomogeneousNorm(double c, double a) : is_power_(true), c_(c), a_(a) {}

  bool is_power_ = false;
  double c_ = 1.0;
  double a_ = 1.0;
};

struct EstimatorReport {
  double theta_hat = 0.0;
  // Fraction of exceedance-free blocks.
  double H_hat = 0.0;
  // Mean number of exceedances per block.
  double neg_log_Htilde_hat = 0.0;
  BlockScheme scheme;
  Direction direction;
};

// Zero-block fraction and mean count of a block-count vector.
inline std::pair<double, double> block_statistics(const BlockCounts& counts) {
  const std::size_t k = counts.counts.size();
  if (k == 0) throw std::invalid_argument("block statistics need k_n >= 1");
  std::size_t zero_blocks = 0;
  std::size_t total = 0;
  for (std::size_t c : counts.counts) {
    zero_blocks += (c == 0);
    total += c;
  }
  return {static_cast<double>(zero_blocks) / static_cast<double>(k),
          static_cast<double>(total) / static_cast<double>(k)};
}

namespace detail {

struct RatioEstimate {
  double theta;
  double H_hat;
  double neg_log_Htilde_hat;
};

// -ln(zero-block fraction) / (mean block count) with thresholds taken at
// the given (unnormalized) direction.
inline RatioEstimate ratio_estimate_at(const MultivariateSeries& series,
                                       const Direction& sigma,
                                       const BlockScheme& scheme) {
  const ThresholdVector u = estimate_threshold_vector(series, sigma, scheme);
  const BlockCounts counts = block_exceedance_counts(series, u, scheme);
  const auto [h_hat, mean_count] = block_statistics(counts);
  if (mean_count == 0.0)
    throw NoExceedances("no threshold exceedances in the usable sample");
  if (h_hat == 0.0)
    throw AllBlocksExceed("every block contains a threshold exceedance");
  return {-std::log(h_hat) / mean_count, h_hat, mean_count};
}

}  // namespace detail

// Ratio estimator at the norm-rescaled direction tau / L(tau).
inline EstimatorReport theta1(const MultivariateSeries& series,
                              const Direction& tau, const BlockScheme& scheme,
                              const HomogeneousNorm& L) {
  const double scale = L(tau);
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw std::invalid_argument("norm value must be positive and finite");
  const Direction sigma = tau.scaled(1.0 / scale);
  const auto r = detail::ratio_estimate_at(series, sigma, scheme);
  return {r.theta, r.H_hat, r.neg_log_Htilde_hat, scheme, tau};
}

// Rank/Pareto block estimator: threshold the weighted Pareto maxima at
// their ceil(k_n * kappa)-th largest value and take -ln(zero fraction)/kappa.
inline EstimatorReport theta2(const MultivariateSeries& series,
                              const Direction& tau, double kappa,
                              const BlockScheme& scheme) {
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw std::invalid_argument("kappa must be positive and finite");
  const std::size_t n_used = scheme.n_used();
  const std::size_t m = threshold_depth(scheme.k_n, kappa);
  if (m > n_used)
    throw LevelTooDeep("rank threshold depth " + std::to_string(m) +
                       " exceeds the " + std::to_string(n_used) +
                       " usable observations");

  const std::vector<double> z = z_series(series, tau, scheme);
  const double v_hat = order_statistic_threshold(z, m);

  BlockCounts counts;
  counts.counts.assign(scheme.k_n, 0);
  for (std::size_t j = 0; j < scheme.k_n; ++j) {
    std::size_t c = 0;
    const std::size_t begin = j * scheme.r_n;
    for (std::size_t l = begin; l < begin + scheme.r_n; ++l)
      c += (z[l] > v_hat);
    counts.counts[j] = c;
  }

  const auto [zero_fraction, mean_count] = block_statistics(counts);
  if (zero_fraction == 0.0)
    throw AllBlocksExceed("every block contains a rank-threshold exceedance");
  return {-std::log(zero_fraction) / kappa, zero_fraction, mean_count, scheme,
          tau};
}

// Trapezoid average of the unnormalized ratio estimate along the ray
// {x * tau0 : x in [sigma, phi]}. Scale-invariant in tau0 because the ray,
// not the representative, determines the integrand.
inline double theta3(const MultivariateSeries& series, const Direction& tau0,
                     double sigma, double phi, const BlockScheme& scheme,
                     std::size_t quad_points = 64) {
  if (!(sigma > 0.0) || !(phi > sigma))
    throw std::invalid_argument("need 0 < sigma < phi");
  if (quad_points < 2)
    throw std::invalid_argument("quadrature needs at least 2 nodes");

  const double h = (phi - sigma) / static_cast<double>(quad_points - 1);
  double weighted_sum = 0.0;
  for (std::size_t q = 0; q < quad_points; ++q) {
    const double x = sigma + h * static_cast<double>(q);
    double node;
    try {
      node = detail::ratio_estimate_at(series, tau0.scaled(x), scheme).theta;
    } catch (const AllBlocksExceed& e) {
      throw AllBlocksExceed(std::string(e.what()) + " at kappa=" +
                            std::to_string(x));
    } catch (const NoExceedances& e) {
      throw NoExceedances(std::string(e.what()) + " at kappa=" +
                          std::to_string(x));
    }
    const bool endpoint = (q == 0 || q + 1 == quad_points);
    weighted_sum += endpoint ? 0.5 * node : node;
  }
  return weighted_sum / static_cast<double>(quad_points - 1);
}

}  // namespace mei
