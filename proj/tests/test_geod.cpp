#include <doctest.h>

#include <jetfields/geod.hpp>
#include <jetfields/systemio.hpp>

#include "oracles.hpp"

#include <cmath>
#include <sstream>

using namespace jetfields;

namespace {

DEField make_field(const std::vector<std::string>& texts, int m, int n) {
  std::vector<Expr> g;
  for (const auto& t : texts) g.push_back(parse(t, m, n));
  return DEField(m, n, std::move(g));
}

DEField circle_field() { return make_field(oracles::circle_gamma_strings(2), 2, 2); }
DEField simple_field() { return make_field(oracles::circle_simple_gamma_strings(2), 2, 2); }

// arc-length initial jet of the unit circle through the origin
JetPoint std_init() {
  JetPoint p(2, 2);
  p.y(1, 1) = 1.0;
  p.y(2, 2) = 1.0;
  return p;
}

}  // namespace

TEST_CASE("integrate: circle geodesic matches the closed form") {
  Trajectory tr = integrate(circle_field(), std_init(), 2 * M_PI, 1e-3);
  REQUIRE(tr.completed);
  double worst = 0.0;
  for (size_t k = 0; k < tr.states.size(); ++k) {
    double s = tr.t[k];
    worst = std::max(worst, std::abs(tr.states[k].y(1, 0) - std::sin(s)));
    worst = std::max(worst, std::abs(tr.states[k].y(2, 0) - (1 - std::cos(s))));
  }
  CHECK(worst < 1e-6);
  CHECK(tr.richardson_error < 1e-9);
}

TEST_CASE("integrate: fourth-order convergence under step halving") {
  auto run_err = [&](double h) {
    IntegrateOptions opts;
    opts.richardson = false;
    Trajectory tr = integrate(circle_field(), std_init(), 1.0, h, opts);
    double worst = 0.0;
    for (size_t k = 0; k < tr.states.size(); ++k) {
      double s = tr.t[k];
      worst = std::max(worst, std::hypot(tr.states[k].y(1, 0) - std::sin(s),
                                         tr.states[k].y(2, 0) - (1 - std::cos(s))));
    }
    return worst;
  };
  double e1 = run_err(4e-3), e2 = run_err(2e-3);
  CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.25));
}

TEST_CASE("integrate: straight lines") {
  // zero top row with zero higher data
  DEField zero(2, 2, {Expr(), Expr()});
  JetPoint p(2, 2);
  p.y(1, 1) = 0.7;
  Trajectory tr = integrate(zero, p, 1.0, 1e-2);
  CHECK(tr.completed);
  CHECK(tr.back().y(1, 0) == doctest::Approx(0.7));
  CHECK(tr.back().y(2, 0) == doctest::Approx(0.0));

  // fourth-order field with line initial data stays a line
  DEField f4 = make_field(oracles::curvature_field_gamma_strings(3), 3, 3);
  JetPoint q(3, 3);
  q.y(1, 1) = 1.0;
  Trajectory tr4 = integrate(f4, q, 1.0, 1e-2);
  CHECK(tr4.completed);
  CHECK(tr4.back().y(1, 0) == doctest::Approx(1.0));
  CHECK(std::abs(tr4.back().y(2, 0)) < 1e-12);
  CHECK(std::abs(tr4.back().y(3, 0)) < 1e-12);
}

TEST_CASE("integrate: guards abort with a partial trajectory") {
  // simpler system escapes in finite time; the speed cap stops it
  IntegrateOptions opts;
  opts.speed_cap = 10.0;
  opts.richardson = false;
  Trajectory tr = integrate(simple_field(), std_init(), 2.0, 1e-4, opts);
  CHECK_FALSE(tr.completed);
  CHECK(tr.stop_reason == "speed");
  CHECK(tr.states.size() > 100);

  CHECK_THROWS_AS(integrate(circle_field(), JetPoint(2, 2), 1.0, 1e-3), std::invalid_argument);
}

TEST_CASE("arclength resample: self-consistency across rates") {
  Trajectory tr = integrate(circle_field(), std_init(), 2 * M_PI, 1e-3);
  Path a = arclength_resample(tr, 5e-3);
  Path b = arclength_resample(tr, 2e-3);
  CHECK(hausdorff(a, b) < 5e-3);
  CHECK(a.length() == doctest::Approx(2 * M_PI).epsilon(1e-3));
}

TEST_CASE("arclength resample: degenerate path is rejected") {
  DEField zero(1, 1, {Expr()});
  // not slit: zero velocity row rejected at integrate time already
  JetPoint p(1, 1);
  CHECK_THROWS(integrate(zero, p, 1.0, 1e-2));
}

TEST_CASE("projective equivalence: circle vs simpler system share the path") {
  // The simpler system escapes at t* = 1 having covered a quarter circle;
  // compare over the arc both trajectories cover.
  Trajectory tc = integrate(circle_field(), std_init(), 2 * M_PI, 1e-3);
  IntegrateOptions opts;
  opts.speed_cap = 10.0;
  Trajectory ts = integrate(simple_field(), std_init(), 2.0, 1e-4, opts);
  double ds = 1e-3;
  Path pc = arclength_resample(tc, ds);
  Path psim = arclength_resample(ts, ds);
  double common = std::min(pc.length(), psim.length());
  CHECK(common > 1.4);  // about +pi/2 of arc is reachable, sigma(t*) = pi/2
  Path pc_c = arclength_resample(tc, ds, common);
  Path ps_c = arclength_resample(ts, ds, common);
  CHECK(hausdorff(pc_c, ps_c) < 1e-5);
}

TEST_CASE("projective equivalence: rescaled initial jets share the path") {
  // initial jets related by the L^{2+} dilation action give the same circle
  Trajectory ta = integrate(circle_field(), std_init(), 2 * M_PI, 1e-3);
  JetPoint scaled = act(embed_l1(1.7, 2), std_init());
  Trajectory tb = integrate(circle_field(), scaled, 2 * M_PI / 1.7, 1e-3);
  double ds = 1e-3;
  Path pa = arclength_resample(ta, ds);
  Path pb = arclength_resample(tb, ds);
  double common = std::min(pa.length(), pb.length());
  CHECK(common > 6.0);
  CHECK(hausdorff(arclength_resample(ta, ds, common), arclength_resample(tb, ds, common)) < 1e-5);
}

TEST_CASE("circle fit: unit circle and line detection") {
  Trajectory tr = integrate(circle_field(), std_init(), 2 * M_PI, 1e-3);
  Path p = arclength_resample(tr, 1e-2);
  CircleFit fit = circle_fit(p);
  CHECK_FALSE(fit.is_line);
  CHECK(fit.radius == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(fit.cx == doctest::Approx(0.0));
  CHECK(fit.cy == doctest::Approx(1.0));
  CHECK(fit.residual < 1e-7);

  DEField zero(2, 2, {Expr(), Expr()});
  JetPoint q(2, 2);
  q.y(1, 1) = 1.0;
  Path line = arclength_resample(integrate(zero, q, 1.0, 1e-2), 1e-2);
  CircleFit lf = circle_fit(line);
  CHECK(lf.is_line);
  CHECK(lf.residual < 1e-12);
}

TEST_CASE("tangency and curvature constancy along the circle geodesic") {
  Trajectory tr = integrate(circle_field(), std_init(), 2 * M_PI, 1e-3);
  double tang_speed = 0.0, tang_orth = 0.0;
  for (const JetPoint& p : tr.states) {
    tang_speed = std::max(tang_speed, std::abs(p.row_norm(1) - 1.0));
    tang_orth = std::max(tang_orth, std::abs(p.y(1, 1) * p.y(1, 2) + p.y(2, 1) * p.y(2, 2)));
  }
  CHECK(tang_speed < 1e-6);
  CHECK(tang_orth < 1e-6);
  auto curv = curvature_series(tr);
  double drift = 0.0;
  for (double k : curv) drift = std::max(drift, std::abs(k * k - curv[0] * curv[0]));
  CHECK(drift < 1e-6);
}

TEST_CASE("conserved vector of the fourth-order system") {
  DEField f4 = make_field(oracles::curvature_field_gamma_strings(3), 3, 3);
  JetPoint p(3, 3);
  p.y(1, 1) = 1.0;           // |y_1| = 1
  p.y(2, 2) = 1.0;           // y_1.y_2 = 0
  p.y(1, 3) = -1.0;          // y_1.y_3 + |y_2|^2 = 0
  p.y(3, 3) = 0.3;           // out-of-plane third derivative
  Trajectory tr = integrate(f4, p, 3.0, 1e-3);
  REQUIRE(tr.completed);
  auto rep = conserved_vector(tr);
  CHECK(rep.drift < 1e-5);
  // Sigma'' tangency
  double t1 = 0, t2 = 0, t3 = 0;
  for (const JetPoint& q : tr.states) {
    double q12 = 0, q13 = 0, q22 = 0;
    for (int i = 1; i <= 3; ++i) {
      q12 += q.y(i, 1) * q.y(i, 2);
      q13 += q.y(i, 1) * q.y(i, 3);
      q22 += q.y(i, 2) * q.y(i, 2);
    }
    t1 = std::max(t1, std::abs(q.row_norm(1) - 1.0));
    t2 = std::max(t2, std::abs(q12));
    t3 = std::max(t3, std::abs(q13 + q22));
  }
  CHECK(t1 < 1e-5);
  CHECK(t2 < 1e-5);
  CHECK(t3 < 1e-5);
}

TEST_CASE("csv export layout") {
  DEField zero(2, 1, {Expr(), Expr()});
  JetPoint p(2, 1);
  p.y(1, 1) = 1.0;
  Trajectory tr = integrate(zero, p, 0.02, 1e-2);
  std::ostringstream os;
  write_csv(tr, os);
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  CHECK(header == "t,y1_0,y2_0,y1_1,y2_1");
  std::string row;
  int rows = 0;
  while (std::getline(is, row)) ++rows;
  CHECK(rows == 3);
}

TEST_CASE("prolongation by substitution matches finite differences along a geodesic") {
  // d_T(Gamma^1) with the top rows substituted by Gamma gives the next
  // derivative coefficient along any geodesic
  DEField f = circle_field();
  std::map<VarKey, Expr> top;
  for (int i = 1; i <= 2; ++i) top.emplace(VarKey{i, 3}, f.gamma[i - 1]);
  Expr prolonged = subst(total_derivative(f.gamma[0]), top);

  Trajectory tr = integrate(f, std_init(), 1.0, 1e-3);
  auto gamma1 = [&](size_t k) { return eval(f.gamma[0], tr.states[k]); };
  for (size_t k = 100; k < tr.states.size() - 100; k += 200) {
    double fd = (gamma1(k + 1) - gamma1(k - 1)) / (tr.t[k + 1] - tr.t[k - 1]);
    double sym = eval(prolonged, tr.states[k]);
    CHECK(fd == doctest::Approx(sym).epsilon(1e-6));
  }
}

TEST_CASE("circle radius is the inverse initial curvature") {
  // from Sigma' data with |y_2| = 1/2 the geodesic is a circle of radius 2
  JetPoint p(2, 2);
  p.y(1, 1) = 1.0;
  p.y(2, 2) = 0.5;
  Trajectory tr = integrate(circle_field(), p, 4 * M_PI, 1e-3);
  CircleFit fit = circle_fit(arclength_resample(tr, 1e-2));
  CHECK_FALSE(fit.is_line);
  CHECK(fit.radius == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(fit.residual < 1e-7);
}

TEST_CASE("integrate: slit guard aborts decaying trajectories") {
  // y'' = -10 y' drives |y_1| through the 0.05 guard at t = ln 20 / 10
  DEField damped(1, 1, {Expr::integer(-10) * Expr::var(1, 1)});
  JetPoint p(1, 1);
  p.y(1, 1) = 1.0;
  Trajectory tr = integrate(damped, p, 1.0, 1e-3);
  CHECK_FALSE(tr.completed);
  CHECK(tr.stop_reason == "slit");
  CHECK(tr.t.back() == doctest::Approx(std::log(20.0) / 10.0).epsilon(0.02));
  CHECK(tr.back().row_norm(1) >= 0.05);

  CHECK_THROWS_AS(conserved_vector(tr), std::invalid_argument);  // needs order >= 3
  CHECK_THROWS_AS(integrate(damped, p, 1.0, -1e-3), std::invalid_argument);
}
