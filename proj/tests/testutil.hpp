#pragma once

// Shared helpers for the test suites: independent brute-force oracles,
// distributional test statistics and small deterministic generators.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "mei/series.hpp"

namespace testutil {

// --- brute-force oracles (independent of the library implementations) ------

// Per-block exceedance counts by the obvious double loop over rows.
inline std::vector<std::size_t> brute_block_counts(
    const mei::MultivariateSeries& s, const std::vector<double>& u,
    std::size_t k_n, std::size_t r_n) {
  std::vector<std::size_t> counts(k_n, 0);
  for (std::size_t j = 0; j < k_n; ++j)
    for (std::size_t l = j * r_n; l < (j + 1) * r_n; ++l) {
      bool exceed = false;
      for (std::size_t i = 0; i < s.cols(); ++i)
        exceed = exceed || (s.at(l, i) > u[i]);
      counts[j] += exceed;
    }
  return counts;
}

// Min-tie ascending ranks by definition: R_l = 1 + #{m : x_m < x_l}.
inline std::vector<std::size_t> brute_ranks(std::span<const double> x) {
  std::vector<std::size_t> r(x.size());
  for (std::size_t l = 0; l < x.size(); ++l) {
    std::size_t below = 0;
    for (double v : x) below += (v < x[l]);
    r[l] = below + 1;
  }
  return r;
}

// m-th largest via a full descending sort.
inline double brute_mth_largest(std::span<const double> x, std::size_t m) {
  std::vector<double> buf(x.begin(), x.end());
  std::sort(buf.begin(), buf.end(), std::greater<double>());
  return buf[m - 1];
}

// --- distributional statistics ----------------------------------------------

// Kolmogorov-Smirnov distance between a sample and a CDF.
inline double ks_statistic(std::vector<double> sample,
                           const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, (static_cast<double>(i) + 1.0) / n - f);
    d = std::max(d, f - static_cast<double>(i) / n);
  }
  return d;
}

// Hill estimate of the tail index (1 / mean log-excess) over the top
// `fraction` of the sample.
inline double hill_tail_index(std::vector<double> sample, double fraction) {
  std::sort(sample.begin(), sample.end(), std::greater<double>());
  const std::size_t k =
      static_cast<std::size_t>(fraction * static_cast<double>(sample.size()));
  double mean_log = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    mean_log += std::log(sample[i] / sample[k]);
  mean_log /= static_cast<double>(k);
  return 1.0 / mean_log;
}

inline double pearson_correlation(std::span<const double> x,
                                  std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

inline double rank_correlation(std::span<const double> x,
                               std::span<const double> y) {
  const auto rx = mei::ascending_ranks_min_ties(x);
  const auto ry = mei::ascending_ranks_min_ties(y);
  std::vector<double> dx(rx.begin(), rx.end());
  std::vector<double> dy(ry.begin(), ry.end());
  return pearson_correlation(dx, dy);
}

// Jarque-Bera statistic (informational only in this project).
inline double jarque_bera(std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  double m = 0.0;
  for (double v : x) m += v;
  m /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - m;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  const double skew = m3 / std::pow(m2, 1.5);
  const double kurt = m4 / (m2 * m2);
  return n / 6.0 * (skew * skew + (kurt - 3.0) * (kurt - 3.0) / 4.0);
}

// --- deterministic instance generators --------------------------------------

// Plain engine for test-case generation; unrelated to the library stream.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * std::generate_canonical<double, 53>(eng_);
  }
  double normal() { return normal_(eng_); }
  std::size_t index(std::size_t lo, std::size_t hi) {  // inclusive bounds
    return lo + static_cast<std::size_t>(eng_() % (hi - lo + 1));
  }
  std::mt19937_64& engine() { return eng_; }

  // Continuous (almost surely tie-free) series.
  mei::MultivariateSeries series(std::size_t n, std::size_t d) {
    std::vector<std::vector<double>> cols(d);
    for (auto& c : cols) {
      c.reserve(n);
      for (std::size_t l = 0; l < n; ++l) c.push_back(normal());
    }
    return mei::MultivariateSeries(std::move(cols));
  }

  // Integer-valued series with plenty of ties.
  mei::MultivariateSeries tied_series(std::size_t n, std::size_t d,
                                      std::size_t levels) {
    std::vector<std::vector<double>> cols(d);
    for (auto& c : cols) {
      c.reserve(n);
      for (std::size_t l = 0; l < n; ++l)
        c.push_back(static_cast<double>(index(0, levels - 1)));
    }
    return mei::MultivariateSeries(std::move(cols));
  }

 private:
  std::mt19937_64 eng_;
  std::normal_distribution<double> normal_;
};

}  // namespace testutil
