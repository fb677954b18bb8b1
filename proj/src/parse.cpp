#include "jetfields/expr.hpp"

#include <cctype>
#include <string>

namespace jetfields {

namespace {

// Recursive-descent parser for the expression mini-language.
class Parser {
 public:
  Parser(const std::string& text, int m, int max_order) : s_(text), m_(m), max_order_(max_order) {}

  Expr run() {
    Expr e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  const std::string& s_;
  size_t pos_ = 0;
  int m_, max_order_;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  bool accept(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr expr() {
    Expr e = term();
    for (;;) {
      if (accept('+'))
        e = e + term();
      else if (accept('-'))
        e = e - term();
      else
        return e;
    }
  }

  Expr term() {
    Expr e = factor();
    for (;;) {
      if (accept('*'))
        e = e * factor();
      else if (accept('/'))
        e = e / factor();
      else
        return e;
    }
  }

  Expr factor() {
    if (accept('-')) return Expr::integer(-1) * factor();
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (accept('^')) {
      Rational q = exponent_literal();
      return Expr::pow(base, q);
    }
    return base;
  }

  Expr atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return Expr::constant(number());
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("expected a number, identifier or '('");
  }

  // Exponent after '^': an unsigned integer, or a parenthesized signed
  // integer / rational p/q / decimal.
  Rational exponent_literal() {
    skip_ws();
    if (accept('(')) {
      bool neg = accept('-');
      Rational num = number();
      if (accept('/')) {
        Rational den = number();
        if (den == 0) fail("zero denominator in exponent");
        num /= den;
      }
      expect(')');
      return neg ? -num : num;
    }
    if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) return number();
    fail("expected an exponent: integer or (p/q)");
  }

  Rational number() {
    skip_ws();
    size_t start = pos_;
    std::string digits;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) digits += s_[pos_++];
    std::string frac;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) frac += s_[pos_++];
    }
    if (digits.empty() && frac.empty()) {
      pos_ = start;
      fail("expected a number");
    }
    Rational r(BigInt(digits.empty() ? "0" : digits));
    if (!frac.empty()) {
      BigInt den = 1;
      for (size_t k = 0; k < frac.size(); ++k) den *= 10;
      r += Rational(BigInt(frac), den);
    }
    return r;
  }

  Expr identifier() {
    size_t start = pos_;
    std::string name;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      name += s_[pos_++];
    if (name == "sqrt") {
      expect('(');
      Expr e = expr();
      expect(')');
      return Expr::pow(e, Rational(1, 2));
    }
    // coordinate identifier y{i}_{r}
    if (name.size() >= 4 && name[0] == 'y') {
      size_t us = name.find('_');
      if (us != std::string::npos && us > 1 && us + 1 < name.size()) {
        std::string si = name.substr(1, us - 1), sr = name.substr(us + 1);
        bool ok = !si.empty() && !sr.empty();
        for (char d : si) ok = ok && std::isdigit(static_cast<unsigned char>(d));
        for (char d : sr) ok = ok && std::isdigit(static_cast<unsigned char>(d));
        if (ok) {
          int i = std::stoi(si), r = std::stoi(sr);
          if (i < 1 || i > m_) {
            pos_ = start;
            fail("coordinate index " + std::to_string(i) + " out of range 1.." + std::to_string(m_));
          }
          if (r < 0 || r > max_order_) {
            pos_ = start;
            fail("derivative order " + std::to_string(r) + " out of range 0.." + std::to_string(max_order_));
          }
          return Expr::var(i, r);
        }
      }
    }
    pos_ = start;
    fail("unknown identifier '" + name + "' (expected y{i}_{r} or sqrt)");
  }
};

}  // namespace

Expr parse(const std::string& text, int m, int max_order) {
  return Parser(text, m, max_order).run();
}

}  // namespace jetfields
