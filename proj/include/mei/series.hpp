#pragma once

// Block-declustering machinery shared by the extremal index estimators:
// series storage, block schemes, order-statistic thresholds, per-column
// ranks, the unit Pareto transform and per-block exceedance counts.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mei/errors.hpp"

namespace mei {

inline constexpr double kPlusInf = std::numeric_limits<double>::infinity();

// n observations of a d-dimensional series. Stored by column because every
// statistic below works column-wise. All entries must be finite.
class MultivariateSeries {
 public:
  explicit MultivariateSeries(std::vector<std::vector<double>> columns)
      : cols_(std::move(columns)) {
    if (cols_.empty())
      throw std::invalid_argument("series needs at least one column");
    n_ = cols_.front().size();
    if (n_ == 0) throw std::invalid_argument("series needs at least one row");
    for (const auto& c : cols_) {
      if (c.size() != n_)
        throw std::invalid_argument("series columns have unequal lengths");
      for (double v : c)
        if (!std::isfinite(v))
          throw std::invalid_argument("series entries must be finite");
    }
  }

  static MultivariateSeries from_rows(
      const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw std::invalid_argument("series needs at least one row");
    const std::size_t d = rows.front().size();
    std::vector<std::vector<double>> cols(d);
    for (auto& c : cols) c.reserve(rows.size());
    for (const auto& row : rows) {
      if (row.size() != d)
        throw std::invalid_argument("series rows have unequal lengths");
      for (std::size_t i = 0; i < d; ++i) cols[i].push_back(row[i]);
    }
    return MultivariateSeries(std::move(cols));
  }

  std::size_t rows() const { return n_; }
  std::size_t cols() const { return cols_.size(); }

  double at(std::size_t l, std::size_t i) const { return cols_[i][l]; }
  std::span<const double> column(std::size_t i) const { return cols_[i]; }

 private:
  std::vector<std::vector<double>> cols_;
  std::size_t n_ = 0;
};

// Direction tau in [0, inf)^d with at least one positive entry.
class Direction {
 public:
  explicit Direction(std::vector<double> tau) : tau_(std::move(tau)) {
    if (tau_.empty())
      throw std::invalid_argument("direction needs dimension >= 1");
    bool any_positive = false;
    for (double t : tau_) {
      if (!std::isfinite(t) || t < 0.0)
        throw std::invalid_argument("direction entries must be finite and >= 0");
      any_positive = any_positive || t > 0.0;
    }
    if (!any_positive)
      throw std::invalid_argument("direction must have a positive entry");
  }

  std::size_t dim() const { return tau_.size(); }
  double operator[](std::size_t i) const { return tau_[i]; }
  const std::vector<double>& values() const { return tau_; }

  Direction scaled(double c) const {
    if (!(c > 0.0) || !std::isfinite(c))
      throw std::invalid_argument("direction scale factor must be positive");
    std::vector<double> out(tau_);
    for (double& t : out) t *= c;
    return Direction(std::move(out));
  }

 private:
  std::vector<double> tau_;
};

// k_n blocks of length r_n. Only the first k_n * r_n observations enter any
// statistic; a trailing remainder shorter than r_n is dropped.
struct BlockScheme {
  std::size_t k_n = 0;
  std::size_t r_n = 0;

  BlockScheme(std::size_t k, std::size_t r) : k_n(k), r_n(r) {
    if (k_n == 0 || r_n == 0)
      throw std::invalid_argument("block scheme needs k_n >= 1 and r_n >= 1");
  }

  std::size_t n_used() const { return k_n * r_n; }

  // Longest scheme with k blocks that fits a series of length n.
  static BlockScheme for_series(std::size_t n, std::size_t k) {
    if (k == 0 || k > n)
      throw std::invalid_argument("block count must satisfy 1 <= k_n <= n");
    return BlockScheme(k, n / k);
  }

  bool fits(std::size_t n_rows) const { return n_used() <= n_rows; }
};

// Per-component thresholds; +inf marks components whose direction entry is
// zero (such components can never register an exceedance).
struct ThresholdVector {
  std::vector<double> u;
};

// Number of exceedance rows in each of the k_n blocks.
struct BlockCounts {
  std::vector<std::size_t> counts;
};

// 1-based ascending ranks per column over the first n_used observations,
// ties sharing the lowest rank of their run.
struct RankMatrix {
  std::size_t n_used = 0;
  std::vector<std::vector<std::size_t>> column_ranks;
};

namespace detail {

inline void require_scheme_fits(const MultivariateSeries& series,
                                const BlockScheme& scheme) {
  if (!scheme.fits(series.rows()))
    throw std::invalid_argument(
        "block scheme uses " + std::to_string(scheme.n_used()) +
        " observations but the series has only " +
        std::to_string(series.rows()));
}

inline void require_same_dim(const MultivariateSeries& series,
                             const Direction& tau) {
  if (series.cols() != tau.dim())
    throw std::invalid_argument("direction dimension does not match series");
}

}  // namespace detail

// Smallest order-statistic depth covering k_n * t threshold exceedances.
inline std::size_t threshold_depth(std::size_t k_n, double t) {
  return static_cast<std::size_t>(std::ceil(static_cast<double>(k_n) * t));
}

// m-th largest element of a column. Duplicates are kept, so with ties the
// same value can serve several depths.
inline double order_statistic_threshold(std::span<const double> column,
                                        std::size_t m) {
  if (m == 0 || m > column.size())
    throw InvalidRank("order-statistic depth " + std::to_string(m) +
                      " outside 1.." + std::to_string(column.size()));
  std::vector<double> buf(column.begin(), column.end());
  auto nth = buf.begin() + static_cast<std::ptrdiff_t>(m - 1);
  std::nth_element(buf.begin(), nth, buf.end(), std::greater<double>());
  return *nth;
}

// Per-component thresholds at direction tau: the ceil(k_n * tau_i)-th
// largest value of column i over the first k_n * r_n observations, or +inf
// where tau_i == 0.
inline ThresholdVector estimate_threshold_vector(
    const MultivariateSeries& series, const Direction& tau,
    const BlockScheme& scheme) {
  detail::require_same_dim(series, tau);
  detail::require_scheme_fits(series, scheme);
  const std::size_t n_used = scheme.n_used();
  ThresholdVector out;
  out.u.resize(tau.dim());
  for (std::size_t i = 0; i < tau.dim(); ++i) {
    if (tau[i] == 0.0) {
      out.u[i] = kPlusInf;
      continue;
    }
    const std::size_t m = threshold_depth(scheme.k_n, tau[i]);
    if (m > n_used)
      throw LevelTooDeep("threshold depth " + std::to_string(m) +
                         " for component " + std::to_string(i + 1) +
                         " exceeds the " + std::to_string(n_used) +
                         " usable observations");
    out.u[i] = order_statistic_threshold(series.column(i).first(n_used), m);
  }
  return out;
}

// Count, per block, of rows where any component strictly exceeds its
// threshold. Observations beyond k_n * r_n are ignored.
inline BlockCounts block_exceedance_counts(const MultivariateSeries& series,
                                           const ThresholdVector& u,
                                           const BlockScheme& scheme) {
  if (u.u.size() != series.cols())
    throw std::invalid_argument("threshold dimension does not match series");
  detail::require_scheme_fits(series, scheme);
  const std::size_t n_used = scheme.n_used();

  std::vector<char> exceeds(n_used, 0);
  for (std::size_t i = 0; i < series.cols(); ++i) {
    const double ui = u.u[i];
    const auto col = series.column(i);
    for (std::size_t l = 0; l < n_used; ++l)
      exceeds[l] = static_cast<char>(exceeds[l] | (col[l] > ui));
  }

  BlockCounts out;
  out.counts.assign(scheme.k_n, 0);
  for (std::size_t j = 0; j < scheme.k_n; ++j) {
    std::size_t c = 0;
    const std::size_t begin = j * scheme.r_n;
    for (std::size_t l = begin; l < begin + scheme.r_n; ++l)
      c += static_cast<std::size_t>(exceeds[l]);
    out.counts[j] = c;
  }
  return out;
}

// Ascending ranks with ties sharing the lowest rank of their run:
// R_l = 1 + #{m : x_m < x_l}.
inline std::vector<std::size_t> ascending_ranks_min_ties(
    std::span<const double> column) {
  const std::size_t n = column.size();
  if (n == 0) throw std::invalid_argument("cannot rank an empty column");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return column[a] < column[b]; });
  std::vector<std::size_t> ranks(n);
  std::size_t pos = 0;
  while (pos < n) {
    std::size_t run_end = pos;
    while (run_end + 1 < n && column[idx[run_end + 1]] == column[idx[pos]])
      ++run_end;
    for (std::size_t q = pos; q <= run_end; ++q) ranks[idx[q]] = pos + 1;
    pos = run_end + 1;
  }
  return ranks;
}

// Rank matrix over the first k_n * r_n observations of every column.
inline RankMatrix rank_matrix(const MultivariateSeries& series,
                              const BlockScheme& scheme) {
  detail::require_scheme_fits(series, scheme);
  RankMatrix out;
  out.n_used = scheme.n_used();
  out.column_ranks.reserve(series.cols());
  for (std::size_t i = 0; i < series.cols(); ++i)
    out.column_ranks.push_back(
        ascending_ranks_min_ties(series.column(i).first(out.n_used)));
  return out;
}

// Unit Pareto scale via ranks: y = n_used / (n_used + 1 - R), increasing in
// R with values in [1, n_used].
inline std::vector<double> pareto_transform(std::span<const std::size_t> ranks,
                                            std::size_t n_used) {
  if (ranks.size() != n_used)
    throw std::invalid_argument("rank vector length must equal n_used");
  std::vector<double> out(ranks.size());
  for (std::size_t l = 0; l < ranks.size(); ++l) {
    const std::size_t r = ranks[l];
    if (r == 0 || r > n_used)
      throw std::invalid_argument("rank " + std::to_string(r) +
                                  " outside 1.." + std::to_string(n_used));
    out[l] = static_cast<double>(n_used) /
             static_cast<double>(n_used + 1 - r);
  }
  return out;
}

// Componentwise-weighted maximum of the Pareto-transformed series:
// z_l = max_i tau_i * y_{l,i}. Components with tau_i == 0 drop out.
inline std::vector<double> z_series(const MultivariateSeries& series,
                                    const Direction& tau,
                                    const BlockScheme& scheme) {
  detail::require_same_dim(series, tau);
  detail::require_scheme_fits(series, scheme);
  const std::size_t n_used = scheme.n_used();
  std::vector<double> z(n_used, 0.0);
  for (std::size_t i = 0; i < series.cols(); ++i) {
    if (tau[i] == 0.0) continue;
    const auto ranks = ascending_ranks_min_ties(series.column(i).first(n_used));
    const auto pareto = pareto_transform(ranks, n_used);
    for (std::size_t l = 0; l < n_used; ++l)
      z[l] = std::max(z[l], tau[i] * pareto[l]);
  }
  return z;
}

}  // namespace mei
