#include "jetfields/geod.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace jetfields {

namespace {

using State = std::vector<double>;  // flattened jet coordinates

State derivative(const DEField& field, const JetPoint& p) {
  int m = p.m, n = p.order;
  State d(static_cast<size_t>(m) * (n + 1));
  for (int r = 0; r < n; ++r)
    for (int i = 1; i <= m; ++i) d[static_cast<size_t>(r) * m + (i - 1)] = p.y(i, r + 1);
  std::vector<double> top = field.top(p);
  for (int i = 1; i <= m; ++i) d[static_cast<size_t>(n) * m + (i - 1)] = top[i - 1];
  return d;
}

JetPoint advanced(const JetPoint& p, const State& d, double h) {
  JetPoint q = p;
  for (size_t k = 0; k < q.coords.size(); ++k) q.coords[k] += h * d[k];
  return q;
}

bool finite_state(const JetPoint& p) {
  for (double v : p.coords)
    if (!std::isfinite(v)) return false;
  return true;
}

// One RK4 step; throws EvalError if the field cannot be evaluated.
JetPoint rk4_step(const DEField& field, const JetPoint& p, double h) {
  State k1 = derivative(field, p);
  State k2 = derivative(field, advanced(p, k1, 0.5 * h));
  State k3 = derivative(field, advanced(p, k2, 0.5 * h));
  State k4 = derivative(field, advanced(p, k3, h));
  JetPoint q = p;
  for (size_t k = 0; k < q.coords.size(); ++k)
    q.coords[k] += h / 6.0 * (k1[k] + 2.0 * (k2[k] + k3[k]) + k4[k]);
  return q;
}

Trajectory run(const DEField& field, const JetPoint& init, double t_end, double h,
               const IntegrateOptions& opts) {
  Trajectory tr;
  tr.h = h;
  JetPoint p = init;
  tr.t.push_back(0.0);
  tr.states.push_back(p);
  long steps = std::lround(t_end / h);
  for (long k = 0; k < steps; ++k) {
    JetPoint q;
    try {
      q = rk4_step(field, p, h);
    } catch (const EvalError&) {
      tr.stop_reason = "nonfinite";
      return tr;
    }
    if (!finite_state(q)) {
      tr.stop_reason = "nonfinite";
      return tr;
    }
    double speed = q.row_norm(1);
    if (speed < opts.slit_guard) {
      tr.stop_reason = "slit";
      return tr;
    }
    if (speed > opts.speed_cap) {
      tr.stop_reason = "speed";
      return tr;
    }
    p = q;
    tr.t.push_back((k + 1) * h);
    tr.states.push_back(p);
  }
  tr.completed = true;
  tr.stop_reason = "end";
  return tr;
}

}  // namespace

Trajectory integrate(const DEField& field, const JetPoint& init, double t_end, double h,
                     const IntegrateOptions& opts) {
  if (h <= 0.0) throw std::invalid_argument("integrate: h must be positive");
  if (init.m != field.m || init.order != field.n)
    throw std::invalid_argument("integrate: initial point must lie on T^n");
  if (!init.slit(opts.slit_guard)) throw std::invalid_argument("integrate: initial point outside the slit bundle");
  Trajectory tr = run(field, init, t_end, h, opts);
  if (opts.richardson && tr.states.size() >= 2) {
    // re-run at half step and compare at the shared times
    Trajectory half = run(field, init, tr.t.back(), 0.5 * h, opts);
    double worst = 0.0;
    size_t count = std::min(tr.states.size(), (half.states.size() + 1) / 2);
    for (size_t k = 0; k < count; ++k) {
      const auto& a = tr.states[k].coords;
      const auto& b = half.states[2 * k].coords;
      for (size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a[j] - b[j]));
    }
    tr.richardson_error = worst / 15.0;  // 4th-order extrapolation factor
  }
  return tr;
}

Path arclength_resample(const Trajectory& tr, double ds, double max_arc) {
  if (ds <= 0.0) throw std::invalid_argument("arclength_resample: ds must be positive");
  size_t N = tr.states.size();
  if (N < 2) throw std::invalid_argument("arclength_resample: trajectory too short");
  int m = tr.states[0].m;
  // cumulative chord length of the base curve
  std::vector<double> s(N, 0.0);
  for (size_t k = 1; k < N; ++k) {
    double seg = 0.0;
    for (int i = 1; i <= m; ++i) {
      double d = tr.states[k].y(i, 0) - tr.states[k - 1].y(i, 0);
      seg += d * d;
    }
    s[k] = s[k - 1] + std::sqrt(seg);
  }
  double total = s.back();
  if (total <= 0.0) throw std::invalid_argument("arclength_resample: degenerate (zero-length) path");
  if (max_arc > 0.0) total = std::min(total, max_arc);
  Path path;
  path.m = m;
  path.ds = ds;
  size_t count = static_cast<size_t>(std::floor(total / ds + 1e-9)) + 1;
  path.pts.reserve(count);
  size_t seg_idx = 0;
  for (size_t k = 0; k < count; ++k) {
    double target = std::min(k * ds, total);
    while (seg_idx + 2 < N && s[seg_idx + 1] < target) ++seg_idx;
    double s0 = s[seg_idx], s1 = s[seg_idx + 1];
    double u = (s1 > s0) ? (target - s0) / (s1 - s0) : 0.0;
    double dt = tr.t[seg_idx + 1] - tr.t[seg_idx];
    const JetPoint& a = tr.states[seg_idx];
    const JetPoint& b = tr.states[seg_idx + 1];
    // cubic Hermite with the exact level-1 derivatives
    double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
    double h10 = u * (1 - u) * (1 - u);
    double h01 = u * u * (3 - 2 * u);
    double h11 = u * u * (u - 1);
    std::vector<double> pt(m);
    for (int i = 1; i <= m; ++i)
      pt[i - 1] = h00 * a.y(i, 0) + h10 * dt * a.y(i, 1) + h01 * b.y(i, 0) + h11 * dt * b.y(i, 1);
    path.pts.push_back(std::move(pt));
  }
  return path;
}

namespace {

double point_segment_dist2(const std::vector<double>& p, const std::vector<double>& a,
                           const std::vector<double>& b) {
  size_t m = p.size();
  double ab2 = 0.0, ap_ab = 0.0;
  for (size_t i = 0; i < m; ++i) {
    double d = b[i] - a[i];
    ab2 += d * d;
    ap_ab += (p[i] - a[i]) * d;
  }
  double u = (ab2 > 0.0) ? std::clamp(ap_ab / ab2, 0.0, 1.0) : 0.0;
  double d2 = 0.0;
  for (size_t i = 0; i < m; ++i) {
    double d = p[i] - (a[i] + u * (b[i] - a[i]));
    d2 += d * d;
  }
  return d2;
}

double directed_hausdorff(const Path& a, const Path& b) {
  double worst = 0.0;
  for (const auto& p : a.pts) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k + 1 < b.pts.size(); ++k)
      best = std::min(best, point_segment_dist2(p, b.pts[k], b.pts[k + 1]));
    if (b.pts.size() == 1) {
      best = 0.0;
      for (size_t i = 0; i < p.size(); ++i) {
        double d = p[i] - b.pts[0][i];
        best += d * d;
      }
    }
    worst = std::max(worst, best);
  }
  return std::sqrt(worst);
}

}  // namespace

double hausdorff(const Path& a, const Path& b) {
  if (a.pts.empty() || b.pts.empty()) throw std::invalid_argument("hausdorff: empty path");
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

CircleFit circle_fit(const Path& path) {
  if (path.m != 2) throw std::invalid_argument("circle_fit: path must be planar (m = 2)");
  size_t N = path.pts.size();
  if (N < 3) throw std::invalid_argument("circle_fit: need at least 3 points");
  // algebraic fit: minimize |x^2+y^2 - 2 a x - 2 b y - c|
  Eigen::MatrixXd A(N, 3);
  Eigen::VectorXd rhs(N);
  for (size_t k = 0; k < N; ++k) {
    double x = path.pts[k][0], y = path.pts[k][1];
    A(k, 0) = 2 * x;
    A(k, 1) = 2 * y;
    A(k, 2) = 1.0;
    rhs(k) = x * x + y * y;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  CircleFit fit;
  const auto& sv = svd.singularValues();
  if (sv(2) < 1e-12 * sv(0)) {
    fit.is_line = true;  // collinear samples: the circle system is degenerate
    // residual against the best-fit line through the centroid
    double mx = 0, my = 0;
    for (const auto& p : path.pts) {
      mx += p[0];
      my += p[1];
    }
    mx /= N;
    my /= N;
    double sxx = 0, sxy = 0, syy = 0;
    for (const auto& p : path.pts) {
      double dx = p[0] - mx, dy = p[1] - my;
      sxx += dx * dx;
      sxy += dx * dy;
      syy += dy * dy;
    }
    Eigen::Matrix2d C;
    C << sxx, sxy, sxy, syy;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(C);
    Eigen::Vector2d nrm = es.eigenvectors().col(0);  // smallest eigenvalue direction
    double acc = 0.0;
    for (const auto& p : path.pts) {
      double d = (p[0] - mx) * nrm(0) + (p[1] - my) * nrm(1);
      acc += d * d;
    }
    fit.residual = std::sqrt(acc / N);
    fit.radius = std::numeric_limits<double>::infinity();
    return fit;
  }
  Eigen::Vector3d sol = svd.solve(rhs);
  fit.cx = sol(0);
  fit.cy = sol(1);
  fit.radius = std::sqrt(std::max(0.0, sol(2) + sol(0) * sol(0) + sol(1) * sol(1)));
  double acc = 0.0;
  for (const auto& p : path.pts) {
    double d = std::hypot(p[0] - fit.cx, p[1] - fit.cy) - fit.radius;
    acc += d * d;
  }
  fit.residual = std::sqrt(acc / N);
  return fit;
}

std::vector<double> curvature_series(const Trajectory& tr) {
  std::vector<double> out;
  out.reserve(tr.states.size());
  for (const JetPoint& p : tr.states) {
    if (p.order < 2) throw std::invalid_argument("curvature_series: need jets of order >= 2");
    out.push_back(p.row_norm(2));
  }
  return out;
}

ConservedReport conserved_vector(const Trajectory& tr) {
  ConservedReport rep;
  if (tr.states.empty()) throw std::invalid_argument("conserved_vector: empty trajectory");
  int m = tr.states[0].m;
  auto value = [&](const JetPoint& p) {
    if (p.order < 3) throw std::invalid_argument("conserved_vector: need jets of order >= 3");
    double e2 = 0.0;
    for (int i = 1; i <= m; ++i) e2 += p.y(i, 2) * p.y(i, 2);
    std::vector<double> v(m);
    for (int i = 1; i <= m; ++i) v[i - 1] = p.y(i, 3) + 1.5 * e2 * p.y(i, 1);
    return v;
  };
  rep.v0 = value(tr.states[0]);
  for (const JetPoint& p : tr.states) {
    std::vector<double> v = value(p);
    double d2 = 0.0;
    for (int i = 0; i < m; ++i) d2 += (v[i] - rep.v0[i]) * (v[i] - rep.v0[i]);
    rep.drift = std::max(rep.drift, std::sqrt(d2));
  }
  return rep;
}

void write_csv(const Trajectory& tr, std::ostream& os) {
  if (tr.states.empty()) return;
  int m = tr.states[0].m, n = tr.states[0].order;
  os << 't';
  for (int r = 0; r <= n; ++r)
    for (int i = 1; i <= m; ++i) os << ",y" << i << '_' << r;
  os << '\n';
  char buf[32];
  for (size_t k = 0; k < tr.states.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%.17g", tr.t[k]);
    os << buf;
    for (int r = 0; r <= n; ++r)
      for (int i = 1; i <= m; ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", tr.states[k].y(i, r));
        os << ',' << buf;
      }
    os << '\n';
  }
}

}  // namespace jetfields
