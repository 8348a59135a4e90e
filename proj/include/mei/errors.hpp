#pragma once

#include <stdexcept>
#include <string>

namespace mei {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Order-statistic depth outside 1..n.
struct InvalidRank : Error {
  using Error::Error;
};

// Requested threshold depth exceeds the usable sample.
struct LevelTooDeep : Error {
  using Error::Error;
};

// Every block contains an exceedance, so the log of the zero-block
// fraction is infinite.
struct AllBlocksExceed : Error {
  using Error::Error;
};

// No exceedances at all: the mean block count vanishes and the ratio
// estimator is undefined.
struct NoExceedances : Error {
  using Error::Error;
};

// A moment equation has no positive root in the admissible range.
struct NoRoot : Error {
  using Error::Error;
};

// Nonpositive asymptotic variance in a variance-ratio computation.
struct InvalidVariance : Error {
  using Error::Error;
};

// Every replication of a Monte Carlo cell failed.
struct CellEmpty : Error {
  using Error::Error;
};

// Malformed CSV input; messages carry 1-based line numbers.
struct CsvError : Error {
  using Error::Error;
};

// Invalid or unknown experiment configuration.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace mei
