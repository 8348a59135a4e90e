#pragma once

// Umbrella header for the extremal index estimation library.

#include "mei/config.hpp"
#include "mei/csv.hpp"
#include "mei/errors.hpp"
#include "mei/estimators.hpp"
#include "mei/experiment.hpp"
#include "mei/oracles.hpp"
#include "mei/rng.hpp"
#include "mei/series.hpp"
#include "mei/simulate.hpp"
#include "mei/version.hpp"
