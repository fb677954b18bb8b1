#include "jetfields/expr.hpp"

#include <cmath>
#include <sstream>
#include <unordered_map>

namespace jetfields {

struct Expr::Node {
  ExprKind kind;
  Rational cval;  // Const value or Pow exponent
  int vi = 0, vr = 0;
  std::shared_ptr<const Node> a, b;  // children (a = base for Pow)

  explicit Node(Rational c) : kind(ExprKind::Const), cval(std::move(c)) {}
  Node(int i, int r) : kind(ExprKind::Var), vi(i), vr(r) {}
  Node(ExprKind k, std::shared_ptr<const Node> x, std::shared_ptr<const Node> y)
      : kind(k), a(std::move(x)), b(std::move(y)) {}
  Node(std::shared_ptr<const Node> base, Rational expo)
      : kind(ExprKind::Pow), cval(std::move(expo)), a(std::move(base)) {}
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

const NodePtr& zero_node() {
  static const NodePtr n = std::make_shared<const Expr::Node>(Rational(0));
  return n;
}

}  // namespace

Expr::Expr() : node_(zero_node()) {}

Expr Expr::constant(Rational c) { return Expr::adopt(std::make_shared<const Node>(std::move(c))); }
Expr Expr::integer(long long k) { return constant(Rational(k)); }

Expr Expr::from_double(double x) {
  if (!std::isfinite(x)) throw std::domain_error("Expr::from_double: non-finite value");
  return constant(Rational(x));  // binary doubles are exact rationals
}

Expr Expr::var(int i, int r) {
  if (i < 1 || r < 0) throw std::invalid_argument("Expr::var: bad index");
  return Expr::adopt(std::make_shared<const Node>(i, r));
}

ExprKind Expr::kind() const { return node_->kind; }
const Rational& Expr::value() const { return node_->cval; }
int Expr::var_index() const { return node_->vi; }
int Expr::var_level() const { return node_->vr; }
Expr Expr::lhs() const { return adopt(node_->a); }
Expr Expr::rhs() const { return adopt(node_->b); }
Expr Expr::base() const { return adopt(node_->a); }
const Rational& Expr::exponent() const { return node_->cval; }

bool Expr::is_zero() const { return is_const() && value() == 0; }
bool Expr::is_one() const { return is_const() && value() == 1; }

namespace {

bool node_is_const(const Expr::Node* n) { return n->kind == ExprKind::Const; }
bool node_is_zero(const Expr::Node* n) { return node_is_const(n) && n->cval == 0; }
bool node_is_one(const Expr::Node* n) { return node_is_const(n) && n->cval == 1; }

NodePtr make_add(const NodePtr& a, const NodePtr& b) {
  if (node_is_const(a.get()) && node_is_const(b.get()))
    return std::make_shared<const Expr::Node>(a->cval + b->cval);
  if (node_is_zero(a.get())) return b;
  if (node_is_zero(b.get())) return a;
  return std::make_shared<const Expr::Node>(ExprKind::Add, a, b);
}

NodePtr make_sub(const NodePtr& a, const NodePtr& b) {
  if (node_is_const(a.get()) && node_is_const(b.get()))
    return std::make_shared<const Expr::Node>(a->cval - b->cval);
  if (node_is_zero(b.get())) return a;
  return std::make_shared<const Expr::Node>(ExprKind::Sub, a, b);
}

NodePtr make_mul(const NodePtr& a, const NodePtr& b) {
  if (node_is_const(a.get()) && node_is_const(b.get()))
    return std::make_shared<const Expr::Node>(a->cval * b->cval);
  if (node_is_zero(a.get()) || node_is_zero(b.get())) return zero_node();
  if (node_is_one(a.get())) return b;
  if (node_is_one(b.get())) return a;
  return std::make_shared<const Expr::Node>(ExprKind::Mul, a, b);
}

NodePtr make_div(const NodePtr& a, const NodePtr& b) {
  if (node_is_const(b.get())) {
    if (b->cval == 0) throw std::domain_error("Expr: division by constant zero");
    if (node_is_const(a.get())) return std::make_shared<const Expr::Node>(a->cval / b->cval);
    if (b->cval == 1) return a;
  }
  if (node_is_zero(a.get())) return zero_node();
  return std::make_shared<const Expr::Node>(ExprKind::Div, a, b);
}

NodePtr make_pow(const NodePtr& base, const Rational& expo) {
  if (expo == 0) return std::make_shared<const Expr::Node>(Rational(1));
  if (expo == 1) return base;
  if (node_is_const(base.get())) {
    if (base->cval == 1) return std::make_shared<const Expr::Node>(Rational(1));
    if (base->cval == 0) {
      if (expo < 0) throw std::domain_error("Expr::pow: zero base with negative exponent");
      return zero_node();
    }
    if (is_integer(expo))
      return std::make_shared<const Expr::Node>(
          rational_pow(base->cval, expo.convert_to<std::int64_t>()));
  }
  return std::make_shared<const Expr::Node>(base, expo);
}

}  // namespace

Expr operator+(const Expr& a, const Expr& b) { return Expr::adopt(make_add(a.handle(), b.handle())); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::adopt(make_sub(a.handle(), b.handle())); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::adopt(make_mul(a.handle(), b.handle())); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::adopt(make_div(a.handle(), b.handle())); }
Expr Expr::operator-() const { return Expr::integer(-1) * *this; }
Expr Expr::pow(const Expr& base, const Rational& exponent) { return Expr::adopt(make_pow(base.handle(), exponent)); }

// ---------------------------------------------------------------------------
// differentiation

namespace {

using NodeMemo = std::unordered_map<const Expr::Node*, NodePtr>;

NodePtr diff_memo(const NodePtr& e, int i, int r, NodeMemo& memo) {
  auto it = memo.find(e.get());
  if (it != memo.end()) return it->second;
  NodePtr out;
  switch (e->kind) {
    case ExprKind::Const:
      out = zero_node();
      break;
    case ExprKind::Var:
      out = (e->vi == i && e->vr == r) ? std::make_shared<const Expr::Node>(Rational(1))
                                       : zero_node();
      break;
    case ExprKind::Add:
      out = make_add(diff_memo(e->a, i, r, memo), diff_memo(e->b, i, r, memo));
      break;
    case ExprKind::Sub:
      out = make_sub(diff_memo(e->a, i, r, memo), diff_memo(e->b, i, r, memo));
      break;
    case ExprKind::Mul:
      out = make_add(make_mul(diff_memo(e->a, i, r, memo), e->b),
                     make_mul(e->a, diff_memo(e->b, i, r, memo)));
      break;
    case ExprKind::Div: {
      NodePtr da = diff_memo(e->a, i, r, memo);
      NodePtr db = diff_memo(e->b, i, r, memo);
      out = make_div(make_sub(make_mul(da, e->b), make_mul(e->a, db)), make_mul(e->b, e->b));
      break;
    }
    case ExprKind::Pow: {
      NodePtr db = diff_memo(e->a, i, r, memo);
      NodePtr c = std::make_shared<const Expr::Node>(e->cval);
      out = make_mul(make_mul(c, make_pow(e->a, e->cval - 1)), db);
      break;
    }
  }
  memo.emplace(e.get(), out);
  return out;
}

}  // namespace

Expr diff(const Expr& e, int i, int r) {
  NodeMemo memo;
  return Expr::adopt(diff_memo(e.handle(), i, r, memo));
}

// ---------------------------------------------------------------------------
// substitution

namespace {

NodePtr subst_memo(const NodePtr& e, const std::map<VarKey, Expr>& b, NodeMemo& memo) {
  auto it = memo.find(e.get());
  if (it != memo.end()) return it->second;
  NodePtr out;
  switch (e->kind) {
    case ExprKind::Const:
      out = e;
      break;
    case ExprKind::Var: {
      auto f = b.find({e->vi, e->vr});
      out = (f == b.end()) ? e : f->second.handle();
      break;
    }
    case ExprKind::Add:
      out = make_add(subst_memo(e->a, b, memo), subst_memo(e->b, b, memo));
      break;
    case ExprKind::Sub:
      out = make_sub(subst_memo(e->a, b, memo), subst_memo(e->b, b, memo));
      break;
    case ExprKind::Mul:
      out = make_mul(subst_memo(e->a, b, memo), subst_memo(e->b, b, memo));
      break;
    case ExprKind::Div:
      out = make_div(subst_memo(e->a, b, memo), subst_memo(e->b, b, memo));
      break;
    case ExprKind::Pow:
      out = make_pow(subst_memo(e->a, b, memo), e->cval);
      break;
  }
  memo.emplace(e.get(), out);
  return out;
}

}  // namespace

Expr subst(const Expr& e, const std::map<VarKey, Expr>& bindings) {
  NodeMemo memo;
  return Expr::adopt(subst_memo(e.handle(), bindings, memo));
}

// ---------------------------------------------------------------------------
// evaluation

namespace {

double eval_memo(const Expr::Node* e, const JetPoint& p,
                 std::unordered_map<const Expr::Node*, double>& memo) {
  auto it = memo.find(e);
  if (it != memo.end()) return it->second;
  double out = 0.0;
  switch (e->kind) {
    case ExprKind::Const:
      out = to_double(e->cval);
      break;
    case ExprKind::Var: {
      if (e->vi > p.m || e->vr > p.order)
        throw EvalError("eval: variable y" + std::to_string(e->vi) + "_" + std::to_string(e->vr) +
                        " not covered by the jet point");
      out = p.y(e->vi, e->vr);
      break;
    }
    case ExprKind::Add:
      out = eval_memo(e->a.get(), p, memo) + eval_memo(e->b.get(), p, memo);
      break;
    case ExprKind::Sub:
      out = eval_memo(e->a.get(), p, memo) - eval_memo(e->b.get(), p, memo);
      break;
    case ExprKind::Mul:
      out = eval_memo(e->a.get(), p, memo) * eval_memo(e->b.get(), p, memo);
      break;
    case ExprKind::Div: {
      double num = eval_memo(e->a.get(), p, memo);
      double den = eval_memo(e->b.get(), p, memo);
      if (den == 0.0) throw EvalError("eval: division by zero");
      out = num / den;
      break;
    }
    case ExprKind::Pow: {
      double b = eval_memo(e->a.get(), p, memo);
      const Rational& q = e->cval;
      if (is_integer(q)) {
        long long k = q.convert_to<long long>();
        if (b == 0.0 && k < 0) throw EvalError("eval: zero base with negative exponent");
        out = std::pow(b, static_cast<double>(k));
      } else {
        if (b < 0.0) throw EvalError("eval: negative base under fractional power");
        if (b == 0.0 && q < 0) throw EvalError("eval: zero base with negative exponent");
        out = std::pow(b, to_double(q));
      }
      break;
    }
  }
  memo.emplace(e, out);
  return out;
}

}  // namespace

double eval(const Expr& e, const JetPoint& p) {
  std::unordered_map<const Expr::Node*, double> memo;
  return eval_memo(e.raw(), p, memo);
}

// ---------------------------------------------------------------------------
// variable enumeration

namespace {

void collect_vars(const Expr::Node* e, std::set<VarKey>& out, std::set<const Expr::Node*>& seen) {
  if (!seen.insert(e).second) return;
  switch (e->kind) {
    case ExprKind::Const:
      break;
    case ExprKind::Var:
      out.insert({e->vi, e->vr});
      break;
    case ExprKind::Pow:
      collect_vars(e->a.get(), out, seen);
      break;
    default:
      collect_vars(e->a.get(), out, seen);
      collect_vars(e->b.get(), out, seen);
  }
}

}  // namespace

std::set<VarKey> variables(const Expr& e) {
  std::set<VarKey> out;
  std::set<const Expr::Node*> seen;
  collect_vars(e.raw(), out, seen);
  return out;
}

int max_var_index(const Expr& e) {
  int m = 0;
  for (const auto& [i, r] : variables(e)) m = std::max(m, i);
  return m;
}

int max_var_level(const Expr& e) {
  int n = -1;
  for (const auto& [i, r] : variables(e)) n = std::max(n, r);
  return n;
}

// ---------------------------------------------------------------------------
// printing (re-parsable, with minimal parentheses)

namespace {

// precedence levels: 1 add/sub, 2 mul/div, 3 pow/atom
void print_node(std::ostream& os, const Expr::Node* e, int parent_prec) {
  switch (e->kind) {
    case ExprKind::Const: {
      const Rational& q = e->cval;
      bool needs_paren = (q < 0 || !is_integer(q)) && parent_prec >= 2;
      if (needs_paren) os << '(';
      os << q;
      if (needs_paren) os << ')';
      break;
    }
    case ExprKind::Var:
      os << 'y' << e->vi << '_' << e->vr;
      break;
    case ExprKind::Add:
      if (parent_prec > 1) os << '(';
      print_node(os, e->a.get(), 1);
      os << " + ";
      print_node(os, e->b.get(), 1);
      if (parent_prec > 1) os << ')';
      break;
    case ExprKind::Sub:
      if (parent_prec > 1) os << '(';
      print_node(os, e->a.get(), 1);
      os << " - ";
      print_node(os, e->b.get(), 2);  // right side binds: a - (b + c) keeps parens
      if (parent_prec > 1) os << ')';
      break;
    case ExprKind::Mul:
      if (parent_prec > 2) os << '(';
      print_node(os, e->a.get(), 2);
      os << '*';
      print_node(os, e->b.get(), 2);
      if (parent_prec > 2) os << ')';
      break;
    case ExprKind::Div:
      if (parent_prec > 2) os << '(';
      print_node(os, e->a.get(), 2);
      os << '/';
      print_node(os, e->b.get(), 3);  // denominator always tight
      if (parent_prec > 2) os << ')';
      break;
    case ExprKind::Pow: {
      bool base_paren = e->a->kind == ExprKind::Pow;
      if (base_paren) os << '(';
      print_node(os, e->a.get(), 3);
      if (base_paren) os << ')';
      const Rational& q = e->cval;
      if (is_integer(q) && q > 0)
        os << '^' << q;
      else
        os << "^(" << q << ')';
      break;
    }
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::ostringstream os;
  print_node(os, e.raw(), 0);
  return os.str();
}

}  // namespace jetfields
