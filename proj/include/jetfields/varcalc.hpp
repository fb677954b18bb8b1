#pragma once

#include <vector>

#include "jetfields/homog.hpp"
#include "jetfields/jetcalc.hpp"
#include "jetfields/sampling.hpp"

namespace jetfields {

// Lagrangian of order n on the slit bundle T^n R^m.
struct Lagrangian {
  int m = 0;
  int n = 0;
  Expr L;

  Lagrangian() = default;
  Lagrangian(int m_, int n_, Expr L_);
};

struct ZermeloReport {
  std::vector<double> residuals;  // r = 1: Delta^1 L - L; r >= 2: Delta^r L
  bool parametric = false;
  double max() const;
};

ZermeloReport zermelo_check(const Lagrangian& lag, const SampleConfig& cfg);

// Hilbert form sum_{p=0}^{n-1} (-1)^p/(p+1)! d_T^p S^{p+1} dL on T^{2n-1}.
OneForm hilbert_form(const Lagrangian& lag);

// Euler-Lagrange form sum_{p=0}^{n} (-1)^p/p! d_T^p S^p dL on T^{2n}.
OneForm el_form(const Lagrangian& lag);

// Classical alternating sum eps_i = sum_p (-1)^p d_T^p (dL/dy^i_p); the
// horizontal components of el_form, built through an independent code path.
std::vector<Expr> el_classical(const Lagrangian& lag);

struct ContractionReport {
  double residual = 0.0;  // worst relative misfit of i_T d(theta) + eps over all slots
  int samples = 0;
};

// Checks i_T d(theta) = -eps pointwise: assembles the skew matrix of d(theta)
// at the underlying T^{2n-1} point and contracts with the total-derivative
// direction of a T^{2n} sample.
ContractionReport check_iT_dtheta(const Lagrangian& lag, const SampleConfig& cfg);

// Residual of eps with y_{2n} substituted by the field's top row; the field
// must have order 2n (domain T^{2n-1}).
EqualityReport verify_el_field(const Lagrangian& lag, const DEField& field, const SampleConfig& cfg);

struct RegularityReport {
  int dimension = 0;     // dim T^{2n-1} R^m
  int rank = 0;
  int kernel_dim = 0;
  double sv_gap = 0.0;   // ratio of the last kept to the first dropped singular value
  double delta_residual = 0.0;  // worst |M v|/(|M| |v|) over Delta^1..Delta^{2n-1}
  double gamma_residual = 0.0;  // same for the supplied field (if any)
};

// Numeric rank of d(theta) at a slit point, with kernel membership checks for
// the fundamental fields and an optional differential equation field.
RegularityReport regularity_rank(const Lagrangian& lag, const JetPoint& p,
                                 const DEField* field = nullptr,
                                 double threshold = 1e-8);

struct ELExtraction {
  std::vector<double> particular;            // minimum-norm y_{2n}
  std::vector<std::vector<double>> kernel;   // basis of the solution kernel
  double inconsistency = 0.0;                // |A x + b| of the returned solution
};

// eps is affine in the top row y_{2n}; recovers the affine map by m+1
// evaluations and returns the minimum-norm solution of eps = 0 at p.
ELExtraction extract_el_field_at(const Lagrangian& lag, const JetPoint& p,
                                 double threshold = 1e-8);

}  // namespace jetfields
