#pragma once

#include <span>
#include <vector>

#include "jetfields/rational.hpp"

namespace jetfields {

// Element of the jet group L^n in the global coordinates
// (phi'(0), phi''(0), ..., phi^(n)(0)); the first coordinate must be nonzero,
// and the element lies in L^{n+} iff it is positive.
struct GroupElement {
  int order = 1;
  std::vector<double> y;  // y[r-1] = y_r

  GroupElement() : y{1.0} {}
  GroupElement(int n, std::vector<double> coords);
  static GroupElement identity(int n);
  bool positive() const { return y[0] > 0.0; }
};

// Element of the Lie algebra l^n as coefficients of sum_r c_r delta^r.
struct AlgebraElement {
  int order = 1;
  std::vector<double> c;  // c[r-1] multiplies delta^r

  AlgebraElement() : c{0.0} {}
  AlgebraElement(int n, std::vector<double> coeffs);
  static AlgebraElement zero(int n) { return AlgebraElement(n, std::vector<double>(n, 0.0)); }
  bool in_l2() const { return c[0] == 0.0; }
};

// Bell polynomial B_n^r(eta_1, ..., eta_{n+1-r}): (n!/r!) times the
// coefficient of x^n in (sum_p eta_p x^p / p!)^r.  Entries of eta beyond
// position n+1-r cannot contribute and are ignored.
template <class K>
K bell_series(int n, int r, std::span<const K> eta);

double bell(int n, int r, std::span<const double> eta);
Rational bell(int n, int r, std::span<const Rational> eta);

// The n x n matrix B(eta) with (p,q) entry B_q^p; upper triangular.
// Multiplication in L^n is xi . eta = xi B(eta), with xi a row vector.
std::vector<double> b_matrix(int n, std::span<const double> eta);  // row-major
std::vector<Rational> b_matrix(int n, std::span<const Rational> eta);

GroupElement mul(const GroupElement& xi, const GroupElement& eta);
GroupElement inv(const GroupElement& xi);
GroupElement project(const GroupElement& xi, int new_order);

// L^1 -> L^n: the jet of the multiplication map t -> a t.
GroupElement embed_l1(double a, int n);
// L^2 -> L^n via the Moebius representative a x / (1 - b x / a);
// coordinates r! b^{r-1} / a^{r-2}.
GroupElement embed_l2(double a, double b, int n);

// [delta^r, delta^s] = (r-s) delta^{r+s-1} when r+s <= n+1, else 0.
AlgebraElement algebra_bracket(int r, int s, int n);
// Bilinear extension to arbitrary algebra elements.
AlgebraElement algebra_bracket(const AlgebraElement& a, const AlgebraElement& b);

// The strictly lower triangular matrix K_n of kappa = sum_{r>=2} k_r delta^r,
// row-major: (K_n)_{rs} = r!/(s-1)! k_{r+1-s} for r >= s.
std::vector<double> k_matrix(const AlgebraElement& kappa);

// exp: l^n_2 -> K^n by the terminating nilpotent series, (exp K_n) e.
GroupElement exp_k(const AlgebraElement& kappa);

// log: K^n -> l^n_2 by the level-by-level inversion of exp.
AlgebraElement log_k(const GroupElement& y);

// Phi(X) for the vector field X(x) d/dx with polynomial coefficients
// poly[p] x^p (poly[0] must vanish): sum_{p<=n} poly[p] delta^p.
AlgebraElement phi_map(std::span<const double> poly, int n);

// Bracket of polynomial vector fields on R: [X d/dx, Y d/dx] = (X Y' - Y X') d/dx.
std::vector<double> poly_vf_bracket(std::span<const double> X, std::span<const double> Y);

}  // namespace jetfields
