#include "jetfields/jetcalc.hpp"

#include <stdexcept>

namespace jetfields {

const Expr& VectorField::component(int i, int r) const {
  static const Expr zero;
  auto it = comps.find({i, r});
  return it == comps.end() ? zero : it->second;
}

OneForm& OneForm::add(int i, int r, const Expr& e) {
  if (e.is_zero()) return *this;
  auto [it, inserted] = comps.try_emplace({i, r}, e);
  if (!inserted) it->second = it->second + e;
  if (it->second.is_zero()) comps.erase(it);
  return *this;
}

int OneForm::max_level() const {
  int n = -1;
  for (const auto& [key, e] : comps) n = std::max(n, key.second);
  return n;
}

JetPoint act(const GroupElement& eta, const JetPoint& p) {
  if (eta.order != p.order) throw std::invalid_argument("act: order mismatch between group element and point");
  int n = p.order, m = p.m;
  std::vector<double> B = b_matrix(n, std::span<const double>(eta.y));
  JetPoint out(m, n);
  for (int i = 1; i <= m; ++i) out.y(i, 0) = p.y(i, 0);
  for (int r = 1; r <= n; ++r)
    for (int i = 1; i <= m; ++i) {
      double s = 0.0;
      for (int q = 1; q <= r; ++q) s += p.y(i, q) * B[(q - 1) * n + (r - 1)];
      out.y(i, r) = s;
    }
  return out;
}

std::map<VarKey, Expr> act_bindings(const GroupElement& eta, int m) {
  int n = eta.order;
  std::vector<double> B = b_matrix(n, std::span<const double>(eta.y));
  std::map<VarKey, Expr> out;
  for (int r = 1; r <= n; ++r)
    for (int i = 1; i <= m; ++i) {
      Expr s;
      for (int q = 1; q <= r; ++q)
        s = s + Expr::from_double(B[(q - 1) * n + (r - 1)]) * Expr::var(i, q);
      out.emplace(VarKey{i, r}, s);
    }
  return out;
}

VectorField delta_field(int n, int r, int m) {
  if (r < 1 || r > n) throw std::out_of_range("delta_field: need 1 <= r <= n");
  VectorField v;
  v.m = m;
  v.order = n;
  for (int s = r; s <= n; ++s) {
    Rational c = rational_factorial(s) / rational_factorial(s - r);
    for (int i = 1; i <= m; ++i)
      v.comps.emplace(VarKey{i, s}, Expr::constant(c) * Expr::var(i, s + 1 - r));
  }
  return v;
}

Expr apply_vf(const VectorField& v, const Expr& f) {
  Expr out;
  for (const auto& [key, comp] : v.comps) {
    Expr d = diff(f, key.first, key.second);
    if (!d.is_zero()) out = out + comp * d;
  }
  return out;
}

VectorField vf_bracket(const VectorField& v, const VectorField& w) {
  VectorField out;
  out.m = std::max(v.m, w.m);
  out.order = std::max(v.order, w.order);
  std::map<VarKey, Expr> slots;
  for (const auto& [key, e] : v.comps) slots.try_emplace(key);
  for (const auto& [key, e] : w.comps) slots.try_emplace(key);
  for (const auto& [key, unused] : slots) {
    Expr c = apply_vf(v, w.component(key.first, key.second)) -
             apply_vf(w, v.component(key.first, key.second));
    if (!c.is_zero()) out.comps.emplace(key, c);
  }
  return out;
}

Expr total_derivative(const Expr& f) {
  Expr out;
  for (const auto& [i, r] : variables(f)) {
    Expr d = diff(f, i, r);
    if (!d.is_zero()) out = out + Expr::var(i, r + 1) * d;
  }
  return out;
}

OneForm d_of(const Expr& f) {
  OneForm out;
  for (const auto& [i, r] : variables(f)) out.add(i, r, diff(f, i, r));
  return out;
}

OneForm s_oneform(const OneForm& alpha) {
  OneForm out;
  for (const auto& [key, a] : alpha.comps) {
    auto [i, r] = key;
    if (r >= 1) out.add(i, r - 1, Expr::integer(r) * a);
  }
  return out;
}

OneForm dT_oneform(const OneForm& alpha) {
  OneForm out;
  for (const auto& [key, a] : alpha.comps) {
    auto [i, r] = key;
    out.add(i, r, total_derivative(a));
    out.add(i, r + 1, a);
  }
  return out;
}

OneForm add(const OneForm& a, const OneForm& b) {
  OneForm out = a;
  for (const auto& [key, e] : b.comps) out.add(key.first, key.second, e);
  return out;
}

OneForm scale(const OneForm& a, const Rational& c) {
  OneForm out;
  if (c == 0) return out;
  Expr ce = Expr::constant(c);
  for (const auto& [key, e] : a.comps) out.comps.emplace(key, ce * e);
  return out;
}

double contract_total(const OneForm& alpha, const JetPoint& p) {
  double s = 0.0;
  for (const auto& [key, a] : alpha.comps) {
    auto [i, r] = key;
    s += eval(a, p) * p.y(i, r + 1);
  }
  return s;
}

Expr contract(const OneForm& alpha, const VectorField& v) {
  Expr out;
  for (const auto& [key, a] : alpha.comps) {
    const Expr& comp = v.component(key.first, key.second);
    if (!comp.is_zero()) out = out + a * comp;
  }
  return out;
}

}  // namespace jetfields
