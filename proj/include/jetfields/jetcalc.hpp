#pragma once

#include <map>

#include "jetfields/expr.hpp"
#include "jetfields/jetgroup.hpp"
#include "jetfields/jetpoint.hpp"

namespace jetfields {

// Vector field on a jet space, stored sparsely by coordinate slot (i, r).
struct VectorField {
  int m = 0;
  int order = 0;
  std::map<VarKey, Expr> comps;

  const Expr& component(int i, int r) const;
};

// 1-form on a jet space, a sparse association (i, r) -> coefficient of dy^i_r.
struct OneForm {
  std::map<VarKey, Expr> comps;

  OneForm& add(int i, int r, const Expr& e);
  int max_level() const;
};

// Right action of L^n on T^n R^m by composition of jets:
// (R_eta y)^i_r = sum_{p<=r} y^i_p B_r^p(eta).
JetPoint act(const GroupElement& eta, const JetPoint& p);

// The same action as substitution bindings ((i,r) -> linear combination of
// the y^i_p), for composing symbolically.
std::map<VarKey, Expr> act_bindings(const GroupElement& eta, int m);

// Fundamental vector field Delta^r of the action on T^n:
// sum_{s=r..n} s!/(s-r)! y^i_{s+1-r} d/dy^i_s.
VectorField delta_field(int n, int r, int m);

// Derivation action V(f) = sum V^i_r df/dy^i_r.
Expr apply_vf(const VectorField& v, const Expr& f);

// Bracket [V, W] componentwise over the union of slots.
VectorField vf_bracket(const VectorField& v, const VectorField& w);

// Total derivative d_T f = sum y^i_{r+1} df/dy^i_r (order raised by one).
Expr total_derivative(const Expr& f);

// Differential of a function as a 1-form.
OneForm d_of(const Expr& f);

// Vertical endomorphism on 1-forms: the (i,r) coefficient contributes r times
// itself at (i, r-1).
OneForm s_oneform(const OneForm& alpha);

// Total derivative on 1-forms by the Leibniz rule, dy^i_r -> dy^i_{r+1}.
OneForm dT_oneform(const OneForm& alpha);

OneForm add(const OneForm& a, const OneForm& b);
OneForm scale(const OneForm& a, const Rational& c);

// i_T alpha at a point of order (max level of alpha) + 1.
double contract_total(const OneForm& alpha, const JetPoint& p);

// i_V alpha as an expression.
Expr contract(const OneForm& alpha, const VectorField& v);

}  // namespace jetfields
