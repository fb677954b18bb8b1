#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "jetfields/homog.hpp"
#include "jetfields/jetpoint.hpp"

namespace jetfields {

struct IntegrateOptions {
  double slit_guard = 0.05;   // abort when |y_1| drops below this
  double speed_cap = 1e6;     // abort when |y_1| exceeds this (finite-escape guard)
  bool richardson = true;     // attach a half-step error estimate
};

// A numerically integrated prolonged curve: full jet state per sample.
struct Trajectory {
  std::vector<double> t;
  std::vector<JetPoint> states;
  double h = 0.0;
  bool completed = false;       // reached t_end
  std::string stop_reason;      // "end", "slit", "speed", "nonfinite"
  double richardson_error = 0.0;

  const JetPoint& back() const { return states.back(); }
};

// Classical fixed-step 4th-order integration of y_r' = y_{r+1}, y_n' = Gamma.
Trajectory integrate(const DEField& field, const JetPoint& init, double t_end, double h,
                     const IntegrateOptions& opts = {});

// Base curve resampled at equal arc-length spacing (cumulative chord length,
// cubic Hermite interpolation using the level-1 derivatives).
struct Path {
  int m = 0;
  double ds = 0.0;
  std::vector<std::vector<double>> pts;
  double length() const { return pts.empty() ? 0.0 : ds * (pts.size() - 1); }
};

Path arclength_resample(const Trajectory& tr, double ds, double max_arc = -1.0);

// Discrete symmetric Hausdorff distance, measuring points of each path
// against the other path's polyline.
double hausdorff(const Path& a, const Path& b);

struct CircleFit {
  bool is_line = false;
  double cx = 0.0, cy = 0.0;
  double radius = 0.0;
  double residual = 0.0;  // RMS distance of the samples from the fitted circle (or line)
};

// Algebraic least-squares circle through a planar path.
CircleFit circle_fit(const Path& path);

// Curvature samples |y_2| along a trajectory (meaningful on arc-length data).
std::vector<double> curvature_series(const Trajectory& tr);

struct ConservedReport {
  std::vector<double> v0;  // y_3 + (3/2)|y_2|^2 y_1 at the initial sample
  double drift = 0.0;      // max |v(t) - v(0)|
};

// Drift of the conserved vector of the fourth-order example system; requires
// jets of order >= 3.
ConservedReport conserved_vector(const Trajectory& tr);

// CSV export: header t, y{i}_{r} columns in row-major jet order.
void write_csv(const Trajectory& tr, std::ostream& os);

}  // namespace jetfields
