#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "jetfields/expr.hpp"
#include "jetfields/jetpoint.hpp"

namespace jetfields {

// Controls the probabilistic identity checks on the slit bundle.
struct SampleConfig {
  int count = 100;
  std::uint64_t seed = 0;
  double lo = -2.0, hi = 2.0;            // per-coordinate range
  std::vector<std::pair<double, double>> level_ranges;  // optional override per level r
  double level1_lo = 0.5, level1_hi = 2.0;  // level-1 row rescaled to this norm range
  double guard = 0.1;                    // minimum allowed |y_1| row norm
  double tol = 1e-9;                     // relative tolerance

  std::pair<double, double> range(int level) const {
    if (level < static_cast<int>(level_ranges.size())) return level_ranges[level];
    return {lo, hi};
  }
};

// Deterministic uniform double in [0,1) from a seeded engine (the standard
// distributions are implementation-defined, which would break byte-identical
// reruns across toolchains).
inline double uniform01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& eng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(eng);
}

// One random slit point of T^N R^m: coordinates uniform in [lo,hi], the
// level-1 row rescaled to a norm in [level1_lo, level1_hi].
JetPoint sample_jet_point(int m, int order, const SampleConfig& cfg, std::mt19937_64& eng);

std::vector<JetPoint> sample_jet_points(int m, int order, const SampleConfig& cfg);

struct EqualityReport {
  bool equal = false;
  double max_residual = 0.0;
  int samples = 0;
};

// Probabilistic equality: true iff |a-b|/(1+|a|+|b|) <= cfg.tol at cfg.count
// random slit points.  Points where evaluation fails are resampled, up to a
// retry cap.  Deterministic given cfg.seed.
EqualityReport equal_prob(const Expr& a, const Expr& b, const SampleConfig& cfg);

// As above with explicit dimensions (otherwise inferred from the variables
// appearing in a and b).
EqualityReport equal_prob(const Expr& a, const Expr& b, const SampleConfig& cfg, int m, int order);

inline double rel_residual(double a, double b) {
  return std::abs(a - b) / (1.0 + std::abs(a) + std::abs(b));
}

}  // namespace jetfields
