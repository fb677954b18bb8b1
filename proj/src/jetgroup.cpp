#include "jetfields/jetgroup.hpp"

#include <cmath>
#include <stdexcept>

namespace jetfields {

GroupElement::GroupElement(int n, std::vector<double> coords) : order(n), y(std::move(coords)) {
  if (n < 1) throw std::invalid_argument("GroupElement: order must be >= 1");
  if (static_cast<int>(y.size()) != n) throw std::invalid_argument("GroupElement: wrong coordinate count");
  if (y[0] == 0.0) throw std::invalid_argument("GroupElement: y_1 must be nonzero");
}

GroupElement GroupElement::identity(int n) {
  std::vector<double> c(n, 0.0);
  c[0] = 1.0;
  return GroupElement(n, std::move(c));
}

AlgebraElement::AlgebraElement(int n, std::vector<double> coeffs) : order(n), c(std::move(coeffs)) {
  if (n < 1) throw std::invalid_argument("AlgebraElement: order must be >= 1");
  if (static_cast<int>(c.size()) != n) throw std::invalid_argument("AlgebraElement: wrong coefficient count");
}

template <class K>
K bell_series(int n, int r, std::span<const K> eta) {
  if (r < 1 || r > n) throw std::out_of_range("bell: need 1 <= r <= n");
  // power series c(x) = sum_p eta_p x^p / p!, truncated at degree n
  std::vector<K> c(n + 1, K(0));
  K fact(1);
  for (int p = 1; p <= n; ++p) {
    fact *= p;
    if (p - 1 < static_cast<int>(eta.size())) c[p] = eta[p - 1] / fact;
  }
  std::vector<K> pw(n + 1, K(0)), nw(n + 1, K(0));
  pw[0] = K(1);
  for (int j = 0; j < r; ++j) {
    std::fill(nw.begin(), nw.end(), K(0));
    for (int a = 0; a <= n; ++a) {
      if (pw[a] == K(0)) continue;
      for (int b = 1; a + b <= n; ++b) nw[a + b] += pw[a] * c[b];
    }
    std::swap(pw, nw);
  }
  // scale by n!/r!
  K s(1);
  for (int k = r + 1; k <= n; ++k) s *= k;
  return pw[n] * s;
}

template double bell_series<double>(int, int, std::span<const double>);
template Rational bell_series<Rational>(int, int, std::span<const Rational>);

double bell(int n, int r, std::span<const double> eta) { return bell_series<double>(n, r, eta); }
Rational bell(int n, int r, std::span<const Rational> eta) { return bell_series<Rational>(n, r, eta); }

namespace {

template <class K>
std::vector<K> b_matrix_impl(int n, std::span<const K> eta) {
  std::vector<K> B(static_cast<size_t>(n) * n, K(0));
  for (int p = 1; p <= n; ++p)
    for (int q = p; q <= n; ++q) B[(p - 1) * n + (q - 1)] = bell_series<K>(q, p, eta);
  return B;
}

}  // namespace

std::vector<double> b_matrix(int n, std::span<const double> eta) { return b_matrix_impl<double>(n, eta); }
std::vector<Rational> b_matrix(int n, std::span<const Rational> eta) { return b_matrix_impl<Rational>(n, eta); }

GroupElement mul(const GroupElement& xi, const GroupElement& eta) {
  if (xi.order != eta.order) throw std::invalid_argument("mul: order mismatch");
  int n = xi.order;
  std::vector<double> B = b_matrix(n, std::span<const double>(eta.y));
  std::vector<double> out(n, 0.0);
  for (int q = 1; q <= n; ++q) {
    double s = 0.0;
    for (int p = 1; p <= q; ++p) s += xi.y[p - 1] * B[(p - 1) * n + (q - 1)];
    out[q - 1] = s;
  }
  return GroupElement(n, std::move(out));
}

GroupElement inv(const GroupElement& xi) {
  // Solve xi . eta = e by forward substitution: eta_q appears only in the
  // p = 1 term of the q-th equation.
  int n = xi.order;
  std::vector<double> e(n, 0.0);
  e[0] = 1.0 / xi.y[0];
  for (int q = 2; q <= n; ++q) {
    double s = 0.0;
    for (int p = 2; p <= q; ++p)
      s += xi.y[p - 1] * bell(q, p, std::span<const double>(e.data(), q - 1));
    e[q - 1] = -s / xi.y[0];
  }
  return GroupElement(n, std::move(e));
}

GroupElement project(const GroupElement& xi, int new_order) {
  if (new_order >= xi.order || new_order < 1) throw std::invalid_argument("project: need 1 <= n' < n");
  return GroupElement(new_order, std::vector<double>(xi.y.begin(), xi.y.begin() + new_order));
}

GroupElement embed_l1(double a, int n) {
  if (a == 0.0) throw std::invalid_argument("embed_l1: a must be nonzero");
  std::vector<double> c(n, 0.0);
  c[0] = a;
  return GroupElement(n, std::move(c));
}

GroupElement embed_l2(double a, double b, int n) {
  if (a == 0.0) throw std::invalid_argument("embed_l2: a must be nonzero");
  std::vector<double> c(n, 0.0);
  double fact = 1.0;
  for (int r = 1; r <= n; ++r) {
    fact *= r;
    c[r - 1] = fact * std::pow(b, r - 1) / std::pow(a, r - 2);
  }
  return GroupElement(n, std::move(c));
}

AlgebraElement algebra_bracket(int r, int s, int n) {
  if (r < 1 || r > n || s < 1 || s > n) throw std::out_of_range("algebra_bracket: index out of range");
  AlgebraElement out = AlgebraElement::zero(n);
  if (r + s <= n + 1) out.c[r + s - 2] = static_cast<double>(r - s);
  return out;
}

AlgebraElement algebra_bracket(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.order != b.order) throw std::invalid_argument("algebra_bracket: order mismatch");
  int n = a.order;
  AlgebraElement out = AlgebraElement::zero(n);
  for (int r = 1; r <= n; ++r)
    for (int s = 1; s <= n; ++s) {
      if (a.c[r - 1] == 0.0 || b.c[s - 1] == 0.0) continue;
      if (r + s <= n + 1) out.c[r + s - 2] += a.c[r - 1] * b.c[s - 1] * (r - s);
    }
  return out;
}

std::vector<double> k_matrix(const AlgebraElement& kappa) {
  if (!kappa.in_l2()) throw std::invalid_argument("k_matrix: element not in l^n_2 (c_1 != 0)");
  int n = kappa.order;
  std::vector<double> K(static_cast<size_t>(n) * n, 0.0);
  double rfact = 1.0;
  for (int r = 1; r <= n; ++r) {
    rfact *= r;
    double sfact = 1.0;  // (s-1)!
    for (int s = 1; s < r; ++s) {
      int idx = r + 1 - s;  // k_{r+1-s}, zero unless 2 <= idx <= n
      if (idx >= 2 && idx <= n) K[(r - 1) * n + (s - 1)] = rfact / sfact * kappa.c[idx - 1];
      sfact *= s;
    }
  }
  return K;
}

GroupElement exp_k(const AlgebraElement& kappa) {
  int n = kappa.order;
  std::vector<double> K = k_matrix(kappa);
  // (exp K_n) e with e the first basis column; the series terminates.
  std::vector<double> v(n, 0.0), out(n, 0.0), w(n, 0.0);
  v[0] = 1.0;
  out = v;
  for (int j = 1; j < n; ++j) {
    for (int r = 0; r < n; ++r) {
      double s = 0.0;
      for (int c = 0; c < r; ++c) s += K[r * n + c] * v[c];
      w[r] = s / j;
    }
    v = w;
    for (int r = 0; r < n; ++r) out[r] += v[r];
  }
  return GroupElement(n, std::move(out));
}

AlgebraElement log_k(const GroupElement& y) {
  if (y.y[0] != 1.0) throw std::invalid_argument("log_k: element not in K^n (y_1 != 1)");
  int n = y.order;
  AlgebraElement kappa = AlgebraElement::zero(n);
  double fact = 1.0;
  for (int level = 2; level <= n; ++level) {
    fact *= level;
    // with k_level still zero, the level-th coordinate of exp is the
    // polynomial remainder p(k_2, ..., k_{level-1})
    AlgebraElement head(level, std::vector<double>(kappa.c.begin(), kappa.c.begin() + level));
    head.c[level - 1] = 0.0;
    GroupElement partial = exp_k(head);
    kappa.c[level - 1] = (y.y[level - 1] - partial.y[level - 1]) / fact;
  }
  return kappa;
}

AlgebraElement phi_map(std::span<const double> poly, int n) {
  if (!poly.empty() && poly[0] != 0.0)
    throw std::invalid_argument("phi_map: vector field must vanish at the origin");
  AlgebraElement out = AlgebraElement::zero(n);
  for (int p = 1; p <= n && p < static_cast<int>(poly.size()); ++p) out.c[p - 1] = poly[p];
  return out;
}

std::vector<double> poly_vf_bracket(std::span<const double> X, std::span<const double> Y) {
  size_t nx = X.size(), ny = Y.size();
  if (nx == 0 || ny == 0) return {};
  std::vector<double> out(nx + ny - 2, 0.0);
  for (size_t a = 0; a < nx; ++a)
    for (size_t b = 1; b < ny; ++b) out[a + b - 1] += X[a] * Y[b] * static_cast<double>(b);
  for (size_t b = 0; b < ny; ++b)
    for (size_t a = 1; a < nx; ++a) out[a + b - 1] -= Y[b] * X[a] * static_cast<double>(a);
  return out;
}

}  // namespace jetfields
