#pragma once

// CSV reading/writing. Output files start with a #-prefixed metadata header
// (version, RNG identity, seed, config hash) and print every real with 17
// significant digits, which round-trips doubles exactly and keeps reruns
// byte-identical. Readers skip # lines, so our own output parses back.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mei/errors.hpp"
#include "mei/experiment.hpp"
#include "mei/series.hpp"
#include "mei/version.hpp"

namespace mei {

// 64-bit FNV-1a, used to stamp outputs with a hash of the run configuration.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

// Shortest-of-17-significant-digits rendering; strtod/from_chars recovers
// the exact double.
inline std::string fmt_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct CsvMetadata {
  std::string seed = "n/a";
  std::string config_hash = "n/a";
  std::vector<std::string> extra;  // free-form "key: value" lines
};

inline void write_metadata(std::ostream& os, const CsvMetadata& meta) {
  os << "# mei " << kVersion << "\n";
  os << "# rng: " << kRngId << "\n";
  os << "# seed: " << meta.seed << "\n";
  os << "# config: " << meta.config_hash << "\n";
  for (const auto& line : meta.extra) os << "# " << line << "\n";
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  cells.push_back(cur);
  return cells;
}

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

inline double parse_real(const std::string& cell, std::size_t line_no) {
  const std::string t = trim(cell);
  double v = 0.0;
  const char* begin = t.data();
  const char* end = begin + t.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end)
    throw CsvError("line " + std::to_string(line_no) +
                   ": cannot parse real value '" + t + "'");
  if (!std::isfinite(v))
    throw CsvError("line " + std::to_string(line_no) +
                   ": non-finite value '" + t + "'");
  return v;
}

}  // namespace detail

struct SeriesCsv {
  std::vector<std::string> column_names;
  std::vector<std::vector<double>> columns;

  MultivariateSeries series() const {
    return MultivariateSeries(columns);
  }
};

// Header row of column names, one row per time step, optional leading
// # metadata lines.
inline SeriesCsv read_series_csv(std::istream& is) {
  SeriesCsv out;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;

  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.front() == '#') continue;
    if (detail::trim(line).empty() && !have_header) continue;

    const auto cells = detail::split_csv_line(line);
    if (!have_header) {
      for (const auto& c : cells) {
        const std::string name = detail::trim(c);
        if (name.empty())
          throw CsvError("line " + std::to_string(line_no) +
                         ": empty column name in header");
        out.column_names.push_back(name);
      }
      out.columns.assign(out.column_names.size(), {});
      have_header = true;
      continue;
    }

    if (detail::trim(line).empty()) continue;  // ignore trailing blank lines
    if (cells.size() != out.column_names.size())
      throw CsvError("line " + std::to_string(line_no) + ": expected " +
                     std::to_string(out.column_names.size()) +
                     " cells, found " + std::to_string(cells.size()));
    for (std::size_t i = 0; i < cells.size(); ++i)
      out.columns[i].push_back(detail::parse_real(cells[i], line_no));
  }

  if (!have_header) throw CsvError("empty input: no header row");
  if (out.columns.empty() || out.columns.front().empty())
    throw CsvError("no data rows after the header");
  return out;
}

inline void write_series_csv(std::ostream& os, const MultivariateSeries& s,
                             const CsvMetadata& meta,
                             const std::vector<std::string>& names = {}) {
  write_metadata(os, meta);
  for (std::size_t i = 0; i < s.cols(); ++i) {
    if (i) os << ",";
    if (i < names.size())
      os << names[i];
    else
      os << "x" << (i + 1);
  }
  os << "\n";
  for (std::size_t l = 0; l < s.rows(); ++l) {
    for (std::size_t i = 0; i < s.cols(); ++i) {
      if (i) os << ",";
      os << fmt_real(s.at(l, i));
    }
    os << "\n";
  }
}

inline void write_experiment_csv(std::ostream& os,
                                 const std::vector<ResultRow>& rows,
                                 const CsvMetadata& meta) {
  write_metadata(os, meta);
  os << "process,estimator,k_n,r_n,angle,phi,tau1,tau2,theta_true,mean,bias,"
        "rmse,sample_variance,variance_ratio,failures\n";
  for (const auto& r : rows) {
    os << r.process << "," << r.estimator << "," << r.k_n << "," << r.r_n
       << "," << r.angle << "," << fmt_real(r.phi) << "," << fmt_real(r.tau1)
       << "," << fmt_real(r.tau2) << "," << fmt_real(r.theta_true) << ",";
    if (r.successes > 0) {
      os << fmt_real(r.mean) << "," << fmt_real(r.bias) << ","
         << fmt_real(r.rmse) << "," << fmt_real(r.sample_variance) << ",";
    } else {
      os << ",,,,";  // empty cell: no statistics to report
    }
    if (r.variance_ratio) os << fmt_real(*r.variance_ratio);
    os << "," << r.failures << "\n";
  }
}

}  // namespace mei
