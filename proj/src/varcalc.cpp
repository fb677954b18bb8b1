#include "jetfields/varcalc.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace jetfields {

Lagrangian::Lagrangian(int m_, int n_, Expr L_) : m(m_), n(n_), L(std::move(L_)) {
  if (m_ < 1 || n_ < 1) throw std::invalid_argument("Lagrangian: need m >= 1, n >= 1");
  if (max_var_index(L) > m_) throw std::invalid_argument("Lagrangian: component index exceeds m");
  if (max_var_level(L) > n_) throw std::invalid_argument("Lagrangian: expression order exceeds n");
}

double ZermeloReport::max() const {
  double w = 0.0;
  for (double r : residuals) w = std::max(w, r);
  return w;
}

ZermeloReport zermelo_check(const Lagrangian& lag, const SampleConfig& cfg) {
  ZermeloReport rep;
  Expr zero;
  for (int r = 1; r <= lag.n; ++r) {
    Expr lhs = apply_vf(delta_field(lag.n, r, lag.m), lag.L);
    Expr rhs = (r == 1) ? lag.L : zero;
    rep.residuals.push_back(equal_prob(lhs, rhs, cfg, lag.m, lag.n).max_residual);
  }
  rep.parametric = rep.max() <= cfg.tol;
  return rep;
}

OneForm hilbert_form(const Lagrangian& lag) {
  OneForm dL = d_of(lag.L);
  OneForm theta;
  for (int p = 0; p < lag.n; ++p) {
    OneForm term = dL;
    for (int k = 0; k <= p; ++k) term = s_oneform(term);
    for (int k = 0; k < p; ++k) term = dT_oneform(term);
    Rational c = Rational((p % 2 == 0) ? 1 : -1) / rational_factorial(p + 1);
    theta = add(theta, scale(term, c));
  }
  return theta;
}

OneForm el_form(const Lagrangian& lag) {
  OneForm dL = d_of(lag.L);
  OneForm eps;
  for (int p = 0; p <= lag.n; ++p) {
    OneForm term = dL;
    for (int k = 0; k < p; ++k) term = s_oneform(term);
    for (int k = 0; k < p; ++k) term = dT_oneform(term);
    Rational c = Rational((p % 2 == 0) ? 1 : -1) / rational_factorial(p);
    eps = add(eps, scale(term, c));
  }
  return eps;
}

std::vector<Expr> el_classical(const Lagrangian& lag) {
  std::vector<Expr> eps;
  eps.reserve(lag.m);
  for (int i = 1; i <= lag.m; ++i) {
    Expr e;
    for (int p = 0; p <= lag.n; ++p) {
      Expr t = diff(lag.L, i, p);
      for (int k = 0; k < p; ++k) t = total_derivative(t);
      e = (p % 2 == 0) ? e + t : e - t;
    }
    eps.push_back(e);
  }
  return eps;
}

namespace {

// slots of T^N R^m in row-major jet order
std::vector<VarKey> all_slots(int m, int N) {
  std::vector<VarKey> s;
  s.reserve(static_cast<size_t>(m) * (N + 1));
  for (int r = 0; r <= N; ++r)
    for (int i = 1; i <= m; ++i) s.push_back({i, r});
  return s;
}

// matrix of partial derivatives d(theta_b)/d(y_a) as expressions
std::vector<std::vector<Expr>> theta_jacobian(const OneForm& theta, const std::vector<VarKey>& slots) {
  size_t D = slots.size();
  std::vector<std::vector<Expr>> J(D, std::vector<Expr>(D));
  for (size_t b = 0; b < D; ++b) {
    auto it = theta.comps.find(slots[b]);
    if (it == theta.comps.end()) continue;
    for (size_t a = 0; a < D; ++a) J[a][b] = diff(it->second, slots[a].first, slots[a].second);
  }
  return J;
}

Eigen::MatrixXd dtheta_matrix_at(const std::vector<std::vector<Expr>>& J,
                                 const std::vector<VarKey>& slots, const JetPoint& p) {
  size_t D = slots.size();
  Eigen::MatrixXd M(D, D);
  std::vector<std::vector<double>> Jv(D, std::vector<double>(D, 0.0));
  for (size_t a = 0; a < D; ++a)
    for (size_t b = 0; b < D; ++b) Jv[a][b] = J[a][b].is_zero() ? 0.0 : eval(J[a][b], p);
  // M_{ab} = d_a theta_b - d_b theta_a, so that (i_X dtheta)_b = sum_a X^a M_{ab}
  for (size_t a = 0; a < D; ++a)
    for (size_t b = 0; b < D; ++b) M(a, b) = Jv[a][b] - Jv[b][a];
  return M;
}

}  // namespace

ContractionReport check_iT_dtheta(const Lagrangian& lag, const SampleConfig& cfg) {
  int N = 2 * lag.n - 1;  // theta lives on T^{2n-1}
  OneForm theta = hilbert_form(lag);
  OneForm eps = el_form(lag);
  auto slots = all_slots(lag.m, N);
  auto J = theta_jacobian(theta, slots);
  ContractionReport rep;
  std::mt19937_64 eng(cfg.seed);
  long attempts = 0;
  while (rep.samples < cfg.count) {
    if (++attempts > 100L * cfg.count + 1000) throw EvalError("check_iT_dtheta: retry cap exhausted");
    JetPoint p = sample_jet_point(lag.m, N + 1, cfg, eng);
    if (!p.slit(cfg.guard)) continue;
    try {
      Eigen::MatrixXd M = dtheta_matrix_at(J, slots, p);
      for (size_t b = 0; b < slots.size(); ++b) {
        double contraction = 0.0;
        for (size_t a = 0; a < slots.size(); ++a)
          contraction += p.y(slots[a].first, slots[a].second + 1) * M(a, b);
        auto it = eps.comps.find(slots[b]);
        double ev = (it == eps.comps.end()) ? 0.0 : eval(it->second, p);
        rep.residual = std::max(rep.residual, rel_residual(contraction, -ev));
      }
    } catch (const EvalError&) {
      continue;
    }
    ++rep.samples;
  }
  return rep;
}

EqualityReport verify_el_field(const Lagrangian& lag, const DEField& field, const SampleConfig& cfg) {
  if (field.m != lag.m || field.n != 2 * lag.n - 1)
    throw std::invalid_argument("verify_el_field: field must have order 2n over T^{2n-1}");
  std::map<VarKey, Expr> top;
  for (int i = 1; i <= lag.m; ++i) top.emplace(VarKey{i, 2 * lag.n}, field.gamma[i - 1]);
  EqualityReport worst;
  worst.equal = true;
  Expr zero;
  for (const Expr& e : el_classical(lag)) {
    auto rep = equal_prob(subst(e, top), zero, cfg, lag.m, 2 * lag.n - 1);
    worst.max_residual = std::max(worst.max_residual, rep.max_residual);
    worst.samples = rep.samples;
    worst.equal = worst.equal && rep.equal;
  }
  return worst;
}

RegularityReport regularity_rank(const Lagrangian& lag, const JetPoint& p, const DEField* field,
                                 double threshold) {
  int N = 2 * lag.n - 1;
  if (p.m != lag.m || p.order != N)
    throw std::invalid_argument("regularity_rank: point must lie on T^{2n-1}");
  if (!p.slit(1e-12)) throw std::invalid_argument("regularity_rank: point outside the slit bundle");
  OneForm theta = hilbert_form(lag);
  auto slots = all_slots(lag.m, N);
  auto J = theta_jacobian(theta, slots);
  Eigen::MatrixXd M = dtheta_matrix_at(J, slots, p);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  RegularityReport rep;
  rep.dimension = static_cast<int>(slots.size());
  double mnorm = sv(0);
  if (mnorm == 0.0) {  // exact 1-form: d(theta) vanishes, everything is characteristic
    rep.kernel_dim = rep.dimension;
    return rep;
  }
  double cutoff = threshold * mnorm;
  for (int k = 0; k < sv.size(); ++k)
    if (sv(k) > cutoff) ++rep.rank;
  rep.kernel_dim = rep.dimension - rep.rank;
  if (rep.rank > 0 && rep.rank < sv.size() && sv(rep.rank - 1) > 0)
    rep.sv_gap = sv(rep.rank) / sv(rep.rank - 1);

  auto vf_at = [&](const VectorField& v) {
    Eigen::VectorXd x(slots.size());
    for (size_t a = 0; a < slots.size(); ++a) {
      const Expr c = v.component(slots[a].first, slots[a].second);
      x(a) = c.is_zero() ? 0.0 : eval(c, p);
    }
    return x;
  };
  for (int r = 1; r <= N; ++r) {
    Eigen::VectorXd x = vf_at(delta_field(N, r, lag.m));
    double resid = (x.transpose() * M).norm() / (mnorm * x.norm());
    rep.delta_residual = std::max(rep.delta_residual, resid);
  }
  if (field != nullptr) {
    Eigen::VectorXd x = vf_at(field->as_vector_field());
    rep.gamma_residual = (x.transpose() * M).norm() / (mnorm * x.norm());
  }
  return rep;
}

ELExtraction extract_el_field_at(const Lagrangian& lag, const JetPoint& p, double threshold) {
  int N = 2 * lag.n - 1, m = lag.m;
  if (p.m != m || p.order != N)
    throw std::invalid_argument("extract_el_field_at: point must lie on T^{2n-1}");
  if (!p.slit(1e-12)) throw std::invalid_argument("extract_el_field_at: point outside the slit bundle");
  std::vector<Expr> eps = el_classical(lag);
  auto eval_eps = [&](const std::vector<double>& top) {
    JetPoint q = p.extended(top);
    Eigen::VectorXd v(m);
    for (int i = 1; i <= m; ++i) v(i - 1) = eval(eps[i - 1], q);
    return v;
  };
  std::vector<double> zero_top(m, 0.0);
  Eigen::VectorXd b = eval_eps(zero_top);
  Eigen::MatrixXd A(m, m);
  for (int j = 0; j < m; ++j) {
    std::vector<double> e = zero_top;
    e[j] = 1.0;
    A.col(j) = eval_eps(e) - b;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double cutoff = threshold * (sv.size() > 0 ? sv(0) : 0.0);
  int rank = 0;
  for (int k = 0; k < sv.size(); ++k)
    if (sv(k) > cutoff) ++rank;
  // minimum-norm solution of A x = -b
  Eigen::VectorXd rhs = svd.matrixU().transpose() * (-b);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
  for (int k = 0; k < rank; ++k) x += rhs(k) / sv(k) * svd.matrixV().col(k);
  ELExtraction out;
  out.particular.assign(x.data(), x.data() + m);
  for (int k = rank; k < m; ++k) {
    Eigen::VectorXd kb = svd.matrixV().col(k);
    out.kernel.emplace_back(kb.data(), kb.data() + m);
  }
  out.inconsistency = (A * x + b).norm();
  return out;
}

}  // namespace jetfields
