#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>

#include "jetfields/jetpoint.hpp"
#include "jetfields/rational.hpp"

namespace jetfields {

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  size_t position;
  ParseError(const std::string& msg, size_t pos)
      : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

enum class ExprKind { Const, Var, Add, Sub, Mul, Div, Pow };

// Immutable symbolic scalar over jet coordinates y^i_r.  Constants are exact
// rationals; Pow carries an exact rational exponent.  Construction folds
// constants and the 0/1 identities, nothing more.
class Expr {
 public:
  Expr();  // the constant 0
  static Expr constant(Rational c);
  static Expr integer(long long k);
  static Expr from_double(double x);  // exact binary value of x
  static Expr var(int i, int r);
  static Expr pow(const Expr& base, const Rational& exponent);

  ExprKind kind() const;
  const Rational& value() const;           // Const
  int var_index() const;                   // Var: i
  int var_level() const;                   // Var: r
  Expr lhs() const;                        // binary nodes
  Expr rhs() const;
  Expr base() const;                       // Pow
  const Rational& exponent() const;        // Pow

  bool is_const() const { return kind() == ExprKind::Const; }
  bool is_zero() const;
  bool is_one() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  Expr operator-() const;

  struct Node;
  const Node* raw() const { return node_.get(); }
  const std::shared_ptr<const Node>& handle() const { return node_; }
  static Expr adopt(std::shared_ptr<const Node> n) { return Expr(std::move(n)); }

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

using VarKey = std::pair<int, int>;  // (i, r)

// Exact partial derivative with respect to y^i_r.
Expr diff(const Expr& e, int i, int r);

// Simultaneous substitution of variables by expressions.
Expr subst(const Expr& e, const std::map<VarKey, Expr>& bindings);

// Double-precision evaluation at a jet point.  Throws EvalError on division
// by zero, on a negative base under a fractional power, and on variables not
// covered by the point.
double eval(const Expr& e, const JetPoint& p);

// Variables appearing in e, and convenience bounds over them.
std::set<VarKey> variables(const Expr& e);
int max_var_index(const Expr& e);  // 0 if constant
int max_var_level(const Expr& e);  // -1 if constant

// Renders to the grammar accepted by parse(); parse(to_string(e)) evaluates
// to the same function as e.
std::string to_string(const Expr& e);

// Parses the expression mini-language: y{i}_{r}, rational/decimal literals,
// + - * /, ^k or ^(p/q), parentheses, sqrt(.).  Indices are validated against
// m and max_order.
Expr parse(const std::string& text, int m, int max_order);

}  // namespace jetfields
