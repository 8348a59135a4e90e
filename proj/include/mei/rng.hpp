#pragma once

// Deterministic random source. The engine (mt19937_64) and every transform
// to doubles are fixed here, so a seed identifies a unique stream of
// variates on any platform; output files record kRngId to make replays
// explicit.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace mei {

inline constexpr const char* kRngId = "mt19937_64/u53/box-muller";

struct Seed {
  std::uint64_t value = 0;
};

class Rng {
 public:
  explicit Rng(Seed seed) : eng_(seed.value) {}

  // Uniform on (0,1) with 53-bit resolution; never returns 0 or 1, so logs
  // of uniforms stay finite.
  double uniform() {
    return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double exponential() { return -std::log(uniform()); }

  // Box-Muller pair, one value returned per call.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double t = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace mei
