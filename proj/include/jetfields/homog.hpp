#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "jetfields/jetcalc.hpp"
#include "jetfields/sampling.hpp"

namespace jetfields {

// Differential equation field of order n+1: m expressions Gamma^i over
// T^n R^m defining y^i_{n+1} = Gamma^i.
struct DEField {
  int m = 0;
  int n = 0;                  // jet order of the domain
  std::vector<Expr> gamma;    // gamma[i-1]

  DEField() = default;
  DEField(int m_, int n_, std::vector<Expr> g);

  // The vector field sum_{r<n} y^i_{r+1} d/dy^i_r + Gamma^i d/dy^i_n.
  VectorField as_vector_field() const;

  // Top-row values Gamma^i(p).
  std::vector<double> top(const JetPoint& p) const;
};

struct HomogeneityReport {
  bool homogeneous = false;
  std::vector<Expr> lambda;       // lambda[r-1], built from component i* = 1
  double cross_residual = 0.0;    // worst residual of the other components
  std::vector<double> per_order_residual;  // indexed r-1
};

// Extracts lambda^r from Delta^r(Gamma^i) = forced + n! lambda^r y^i_1 using
// component 1, and cross-validates against the other components.
HomogeneityReport lambda_extract(const DEField& field, const SampleConfig& cfg);

struct ConsistencyReport {
  double family_euler = 0.0;      // Delta^1(l^r) - Delta^r(l^1) = (n+1-r) l^r
  double family_low = 0.0;        // r+s <= n+1: (r-s) l^{r+s-1}
  double family_top = 0.0;        // r+s  = n+2: -(n+1)(r-s)
  double family_high = 0.0;       // r+s  > n+2: 0
  double max() const;
};

// Residuals of the Jacobi consistency conditions on the lambda^r.
ConsistencyReport consistency_check(const std::vector<Expr>& lambda, int n, int m,
                                    const SampleConfig& cfg);

// Gamma + mu Delta^n, i.e. Gamma^i + n! mu y^i_1.
DEField projective_shift(const DEField& field, const Expr& mu);

struct ProjEquivReport {
  bool equivalent = false;
  bool both_homogeneous = false;
  double residual = 0.0;          // worst deviation of Gamma' - Gamma from mu Delta^n
  std::vector<double> mu_samples;
};

ProjEquivReport are_proj_equivalent(const DEField& a, const DEField& b, const SampleConfig& cfg);

// The transformed field Gamma_phi from phi in L^{n+1,+}: the section
// phi_{n+1}^{-1} o Gamma~ o phi_n read back in coordinates.
DEField group_transform(const DEField& field, const GroupElement& phi);

// Pointwise evaluator for the lambda^r of a homogeneous field, least-squares
// over the components (robust where single components of y_1 vanish).
class LambdaEvaluator {
 public:
  LambdaEvaluator(const DEField& field, int r);
  double operator()(const JetPoint& p) const;

 private:
  int m_, n_, r_;
  std::vector<Expr> delta_gamma_;  // Delta^r(Gamma^i)
};

// Theorem-1 spray normalization with the Euclidean metric: Sigma = {|y_1|=1},
// Sigma' = {|y_1|=1, y_1.y_2=0}, gauge mu = 0 on Sigma'.  Computes mu(p) by
// flowing to Sigma' and integrating the two transport equations.
class SprayNormalizer {
 public:
  SprayNormalizer(const DEField& field, double quad_tol = 1e-12);

  double mu_at(const JetPoint& p) const;
  // Gamma^i(p) + n! mu(p) y^i_1(p).
  std::vector<double> normalized_top(const JetPoint& p) const;

  const DEField& field() const { return field_; }

 private:
  DEField field_;
  LambdaEvaluator lambda1_, lambda2_;
  double quad_tol_;
};

// Explicit flows used by the normalization and its finite-difference checks.
JetPoint dilation_flow(const JetPoint& p, double t);      // y_r -> e^{rt} y_r
JetPoint delta2_flow(const JetPoint& p, double s);        // act by exp_k(s delta^2)

// Adaptive Simpson quadrature.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-12, int max_depth = 40);

}  // namespace jetfields
