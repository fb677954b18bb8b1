#include "jetfields/homog.hpp"

#include <cmath>
#include <stdexcept>

namespace jetfields {

DEField::DEField(int m_, int n_, std::vector<Expr> g) : m(m_), n(n_), gamma(std::move(g)) {
  if (m_ < 1 || n_ < 1) throw std::invalid_argument("DEField: need m >= 1, n >= 1");
  if (static_cast<int>(gamma.size()) != m_) throw std::invalid_argument("DEField: need one expression per component");
  for (const Expr& g_i : gamma) {
    if (max_var_index(g_i) > m_) throw std::invalid_argument("DEField: component index exceeds m");
    if (max_var_level(g_i) > n_) throw std::invalid_argument("DEField: expression order exceeds n");
  }
}

VectorField DEField::as_vector_field() const {
  VectorField v;
  v.m = m;
  v.order = n;
  for (int r = 0; r < n; ++r)
    for (int i = 1; i <= m; ++i) v.comps.emplace(VarKey{i, r}, Expr::var(i, r + 1));
  for (int i = 1; i <= m; ++i)
    if (!gamma[i - 1].is_zero()) v.comps.emplace(VarKey{i, n}, gamma[i - 1]);
  return v;
}

std::vector<double> DEField::top(const JetPoint& p) const {
  std::vector<double> out(m);
  for (int i = 1; i <= m; ++i) out[i - 1] = eval(gamma[i - 1], p);
  return out;
}

namespace {

// forced term of the homogeneity condition: (n+1) Gamma^i for r = 1, else
// (n+1)!/(n+1-r)! y^i_{n+2-r}
Expr forced_term(const DEField& f, int i, int r) {
  if (r == 1) return Expr::integer(f.n + 1) * f.gamma[i - 1];
  Rational c = rational_factorial(f.n + 1) / rational_factorial(f.n + 1 - r);
  return Expr::constant(c) * Expr::var(i, f.n + 2 - r);
}

}  // namespace

HomogeneityReport lambda_extract(const DEField& field, const SampleConfig& cfg) {
  int n = field.n, m = field.m;
  HomogeneityReport rep;
  rep.lambda.reserve(n);
  rep.per_order_residual.assign(n, 0.0);
  Expr nfact = Expr::constant(rational_factorial(n));
  for (int r = 1; r <= n; ++r) {
    VectorField dr = delta_field(n, r, m);
    Expr lam = (apply_vf(dr, field.gamma[0]) - forced_term(field, 1, r)) / (nfact * Expr::var(1, 1));
    double worst = 0.0;
    for (int i = 2; i <= m; ++i) {
      Expr lhs = apply_vf(dr, field.gamma[i - 1]) - forced_term(field, i, r);
      Expr rhs = nfact * lam * Expr::var(i, 1);
      auto eq = equal_prob(lhs, rhs, cfg, m, n);
      worst = std::max(worst, eq.max_residual);
    }
    rep.per_order_residual[r - 1] = worst;
    rep.cross_residual = std::max(rep.cross_residual, worst);
    rep.lambda.push_back(lam);
  }
  rep.homogeneous = rep.cross_residual <= cfg.tol;
  return rep;
}

double ConsistencyReport::max() const {
  return std::max({family_euler, family_low, family_top, family_high});
}

ConsistencyReport consistency_check(const std::vector<Expr>& lambda, int n, int m,
                                    const SampleConfig& cfg) {
  if (static_cast<int>(lambda.size()) != n) throw std::invalid_argument("consistency_check: need n lambdas");
  ConsistencyReport rep;
  Expr zero;
  auto lam = [&](int r) -> const Expr& { return lambda[r - 1]; };
  for (int r = 2; r <= n; ++r) {
    VectorField d1 = delta_field(n, 1, m), dr = delta_field(n, r, m);
    Expr lhs = apply_vf(d1, lam(r)) - apply_vf(dr, lam(1));
    Expr rhs = Expr::integer(n + 1 - r) * lam(r);
    rep.family_euler = std::max(rep.family_euler, equal_prob(lhs, rhs, cfg, m, n).max_residual);
  }
  for (int r = 2; r <= n; ++r)
    for (int s = 2; s <= n; ++s) {
      if (r == s) continue;
      VectorField dr = delta_field(n, r, m), ds = delta_field(n, s, m);
      Expr lhs = apply_vf(dr, lam(s)) - apply_vf(ds, lam(r));
      if (r + s <= n + 1) {
        Expr rhs = Expr::integer(r - s) * lam(r + s - 1);
        rep.family_low = std::max(rep.family_low, equal_prob(lhs, rhs, cfg, m, n).max_residual);
      } else if (r + s == n + 2) {
        Expr rhs = Expr::integer(-(n + 1) * (r - s));
        rep.family_top = std::max(rep.family_top, equal_prob(lhs, rhs, cfg, m, n).max_residual);
      } else {
        rep.family_high = std::max(rep.family_high, equal_prob(lhs, zero, cfg, m, n).max_residual);
      }
    }
  return rep;
}

DEField projective_shift(const DEField& field, const Expr& mu) {
  Expr nfact = Expr::constant(rational_factorial(field.n));
  std::vector<Expr> g;
  g.reserve(field.m);
  for (int i = 1; i <= field.m; ++i)
    g.push_back(field.gamma[i - 1] + nfact * mu * Expr::var(i, 1));
  return DEField(field.m, field.n, std::move(g));
}

ProjEquivReport are_proj_equivalent(const DEField& a, const DEField& b, const SampleConfig& cfg) {
  if (a.m != b.m || a.n != b.n) throw std::invalid_argument("are_proj_equivalent: order mismatch");
  ProjEquivReport rep;
  auto ra = lambda_extract(a, cfg);
  auto rb = lambda_extract(b, cfg);
  rep.both_homogeneous = ra.homogeneous && rb.homogeneous;
  double nfact = to_double(rational_factorial(a.n));
  std::mt19937_64 eng(cfg.seed);
  int got = 0;
  long attempts = 0;
  while (got < cfg.count) {
    if (++attempts > 100L * cfg.count + 1000) throw EvalError("are_proj_equivalent: retry cap exhausted");
    JetPoint p = sample_jet_point(a.m, a.n, cfg, eng);
    if (!p.slit(cfg.guard)) continue;
    std::vector<double> ta, tb;
    try {
      ta = a.top(p);
      tb = b.top(p);
    } catch (const EvalError&) {
      continue;
    }
    // least-squares mu over the components, then the worst misfit
    double num = 0.0, den = 0.0;
    for (int i = 1; i <= a.m; ++i) {
      num += (tb[i - 1] - ta[i - 1]) * p.y(i, 1);
      den += p.y(i, 1) * p.y(i, 1);
    }
    double mu = num / (nfact * den);
    rep.mu_samples.push_back(mu);
    for (int i = 1; i <= a.m; ++i) {
      double lhs = tb[i - 1] - ta[i - 1];
      double rhs = nfact * mu * p.y(i, 1);
      rep.residual = std::max(rep.residual, rel_residual(lhs, rhs));
    }
    ++got;
  }
  rep.equivalent = rep.both_homogeneous && rep.residual <= cfg.tol;
  return rep;
}

DEField group_transform(const DEField& field, const GroupElement& phi) {
  int n = field.n, m = field.m;
  if (phi.order != n + 1) throw std::invalid_argument("group_transform: phi must have order n+1");
  if (!phi.positive()) throw std::invalid_argument("group_transform: phi must lie in L^{n+1,+}");
  GroupElement phi_n = project(phi, n);
  GroupElement zeta = inv(phi);
  // coordinates of z = act(phi_n, y) as expressions in y
  std::map<VarKey, Expr> z = act_bindings(phi_n, m);
  std::vector<Expr> gamma_z;
  gamma_z.reserve(m);
  for (int i = 1; i <= m; ++i) gamma_z.push_back(subst(field.gamma[i - 1], z));
  // top row of act(zeta, (z, Gamma(z))) at order n+1
  std::vector<double> B = b_matrix(n + 1, std::span<const double>(zeta.y));
  auto btop = [&](int p) { return B[(p - 1) * (n + 1) + n]; };  // B_{n+1}^p(zeta)
  std::vector<Expr> out;
  out.reserve(m);
  for (int i = 1; i <= m; ++i) {
    Expr g = Expr::from_double(btop(n + 1)) * gamma_z[i - 1];
    for (int p = 1; p <= n; ++p) g = g + Expr::from_double(btop(p)) * z.at({i, p});
    out.push_back(g);
  }
  return DEField(m, n, std::move(out));
}

// ---------------------------------------------------------------------------
// lambda evaluation and spray normalization

LambdaEvaluator::LambdaEvaluator(const DEField& field, int r) : m_(field.m), n_(field.n), r_(r) {
  // numerators Delta^r(Gamma^i) - forced_i of the homogeneity conditions
  VectorField dr = delta_field(n_, r, m_);
  delta_gamma_.reserve(m_);
  for (int i = 1; i <= m_; ++i)
    delta_gamma_.push_back(apply_vf(dr, field.gamma[i - 1]) - forced_term(field, i, r));
}

double LambdaEvaluator::operator()(const JetPoint& p) const {
  // least-squares solution of numer_i = n! lambda y^i_1 over the components
  double num = 0.0, den = 0.0;
  for (int i = 1; i <= m_; ++i) {
    num += eval(delta_gamma_[i - 1], p) * p.y(i, 1);
    den += p.y(i, 1) * p.y(i, 1);
  }
  return num / (to_double(rational_factorial(n_)) * den);
}

SprayNormalizer::SprayNormalizer(const DEField& field, double quad_tol)
    : field_(field), lambda1_(field, 1), lambda2_(field, 2), quad_tol_(quad_tol) {
  if (field.n < 2) throw std::invalid_argument("SprayNormalizer: needs n >= 2");
}

JetPoint dilation_flow(const JetPoint& p, double t) {
  JetPoint out = p;
  for (int r = 1; r <= p.order; ++r) {
    double s = std::exp(r * t);
    for (int i = 1; i <= p.m; ++i) out.y(i, r) = p.y(i, r) * s;
  }
  return out;
}

JetPoint delta2_flow(const JetPoint& p, double s) {
  AlgebraElement kappa = AlgebraElement::zero(p.order);
  if (p.order >= 2) kappa.c[1] = s;
  return act(exp_k(kappa), p);
}

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a, double fa, double mid,
                        double fm, double b, double fb, double whole, double tol, int depth) {
  double lm = 0.5 * (a + mid), rm = 0.5 * (mid + b);
  double flm = f(lm), frm = f(rm);
  double left = (mid - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - mid) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, fa, lm, flm, mid, fm, left, tol * 0.5, depth - 1) +
         adaptive_simpson(f, mid, fm, rm, frm, b, fb, right, tol * 0.5, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                          int max_depth) {
  if (a == b) return 0.0;
  double fa = f(a), fb = f(b), mid = 0.5 * (a + b), fm = f(mid);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, fa, mid, fm, b, fb, whole, tol, max_depth);
}

double SprayNormalizer::mu_at(const JetPoint& p) const {
  if (!p.slit(1e-12)) throw std::invalid_argument("SprayNormalizer: point outside the slit bundle");
  int n = field_.n;
  // (a) down the dilation flow to Sigma = {|y_1| = 1}
  double t1 = std::log(p.row_norm(1));
  JetPoint p1 = dilation_flow(p, -t1);
  // (b) within Sigma to Sigma' = {y_1 . y_2 = 0}: phi' moves at unit rate
  double phip = 0.0;
  for (int i = 1; i <= p.m; ++i) phip += p1.y(i, 1) * p1.y(i, 2);
  phip *= 0.5;
  JetPoint p2 = delta2_flow(p1, -phip);
  // (c) transport mu from the gauge mu = 0 on Sigma': Delta^2(mu) = -lambda^2
  double mu1 = -integrate_adaptive(
      [&](double s) { return lambda2_(delta2_flow(p2, s)); }, 0.0, phip, quad_tol_);
  // (d) transport along the dilation flow: Delta^1(mu) - n mu = -lambda^1,
  //     integrating factor e^{-n t}
  double integral = integrate_adaptive(
      [&](double s) { return std::exp(-n * s) * lambda1_(dilation_flow(p1, s)); }, 0.0, t1,
      quad_tol_);
  return std::exp(n * t1) * (mu1 - integral);
}

std::vector<double> SprayNormalizer::normalized_top(const JetPoint& p) const {
  std::vector<double> out = field_.top(p);
  double shift = to_double(rational_factorial(field_.n)) * mu_at(p);
  for (int i = 1; i <= field_.m; ++i) out[i - 1] += shift * p.y(i, 1);
  return out;
}

}  // namespace jetfields
