#pragma once

#include <cctype>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "drinfeld/error.hpp"
#include "drinfeld/poly.hpp"

namespace drinfeld {

/// Element of F_q(x) in lowest terms with a monic denominator; 0 is 0/1.
class RatFunc {
 public:
  RatFunc() = default;
  explicit RatFunc(FieldRef f) : num_(f), den_(Poly::one(f)) {}
  explicit RatFunc(Poly num) : num_(std::move(num)), den_(Poly::one(num_.field())) {}

  /// Reduces num/den to canonical form.
  static RatFunc make(Poly num, Poly den) {
    if (den.is_zero()) throw DomainError("rational function with zero denominator");
    RatFunc r;
    if (num.is_zero()) {
      r.num_ = Poly(den.field());
      r.den_ = Poly::one(den.field());
      return r;
    }
    Poly g = Poly::gcd(num, den);
    if (!g.is_one()) {
      num = num / g;
      den = den / g;
    }
    const Fq li = den.field()->inv(den.lead());
    r.num_ = num.scaled(li);
    r.den_ = den.scaled(li);
    return r;
  }

  static RatFunc constant(const FieldRef& f, Fq c) { return RatFunc(Poly::constant(f, c)); }
  static RatFunc one(const FieldRef& f) { return RatFunc(Poly::one(f)); }
  static RatFunc x(const FieldRef& f) { return RatFunc(Poly::x(f)); }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  const FieldRef& field() const { return den_.field(); }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_polynomial() const { return den_.is_one(); }
  /// True iff the element lies in F_q.
  bool is_constant() const { return num_.degree() <= 0 && den_.is_one(); }
  Fq constant_value() const { return num_.coeff(0); }

  /// max(deg num, deg den), i.e. [F_q(x) : F_q(y)] for non-constant y.
  std::int64_t weil_degree() const {
    if (is_zero()) return 0;
    return std::max(num_.degree(), den_.degree());
  }

  friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den_.is_one() && b.den_.is_one()) return RatFunc(a.num_ + b.num_);
    Poly g = Poly::gcd(a.den_, b.den_);
    if (g.is_one()) return make_reduced(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    Poly bd = b.den_ / g;
    Poly num = a.num_ * bd + b.num_ * (a.den_ / g);
    Poly den = a.den_ * bd;
    Poly h = Poly::gcd(num, g);
    if (!h.is_one() && !h.is_zero()) {
      num = num / h;
      den = den / h;
    }
    return make_reduced(std::move(num), std::move(den));
  }

  RatFunc operator-() const {
    RatFunc r = *this;
    r.num_ = -r.num_;
    return r;
  }

  friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }

  friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    if (a.is_zero() || b.is_zero()) return RatFunc(a.field());
    if (a.den_.is_one() && b.den_.is_one()) return RatFunc(a.num_ * b.num_);
    Poly g1 = Poly::gcd(a.num_, b.den_);
    Poly g2 = Poly::gcd(b.num_, a.den_);
    Poly n1 = g1.is_one() ? a.num_ : a.num_ / g1;
    Poly d2 = g1.is_one() ? b.den_ : b.den_ / g1;
    Poly n2 = g2.is_one() ? b.num_ : b.num_ / g2;
    Poly d1 = g2.is_one() ? a.den_ : a.den_ / g2;
    return make_reduced(n1 * n2, d1 * d2);
  }

  RatFunc inverse() const {
    if (is_zero()) throw DomainError("division by the zero rational function");
    return make_reduced(den_, num_);
  }

  friend RatFunc operator/(const RatFunc& a, const RatFunc& b) { return a * b.inverse(); }

  RatFunc scaled(Fq c) const {
    RatFunc r = *this;
    r.num_ = r.num_.scaled(c);
    if (r.num_.is_zero()) r.den_ = Poly::one(field());
    return r;
  }

  RatFunc pow(std::int64_t e) const {
    if (e < 0) return inverse().pow(-e);
    RatFunc r;
    r.num_ = Poly::pow(num_, static_cast<std::uint64_t>(e));
    r.den_ = Poly::pow(den_, static_cast<std::uint64_t>(e));
    return r;
  }

  /// y^{q^e}; coprimality and monicity survive Frobenius.
  RatFunc frobenius_q(int e) const {
    RatFunc r;
    r.num_ = num_.frobenius_q(e);
    r.den_ = den_.frobenius_q(e);
    return r;
  }

  /// y^{p^e}.
  RatFunc frobenius_p(int e) const {
    RatFunc r;
    r.num_ = num_.frobenius_p(e);
    r.den_ = den_.frobenius_p(e);
    return r;
  }

  /// y(g), substituting the variable by g.
  RatFunc compose(const RatFunc& g) const {
    if (is_constant()) return *this;
    // Homogenize: P(gn/gd) = H_P(gn, gd) / gd^{deg P}.
    const std::int64_t dn = num_.degree(), dd = den_.degree();
    const std::int64_t top = std::max(dn, dd);
    std::vector<Poly> gd_pows{Poly::one(field())};
    for (std::int64_t i = 1; i <= top; ++i) gd_pows.push_back(gd_pows.back() * g.den_);
    auto homog = [&](const Poly& p) {
      Poly acc(field());
      Poly gn_pow = Poly::one(field());
      for (std::int64_t i = 0; i <= p.degree(); ++i) {
        if (p.coeff(i) != 0) acc = acc + (gn_pow * gd_pows[top - i]).scaled(p.coeff(i));
        gn_pow = gn_pow * g.num_;
      }
      return acc;
    };
    if (num_.is_zero()) return *this;
    return make(homog(num_), homog(den_));
  }

  friend bool operator==(const RatFunc& a, const RatFunc& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }
  friend bool operator<(const RatFunc& a, const RatFunc& b) {
    if (a.den_ != b.den_) return a.den_ < b.den_;
    return a.num_ < b.num_;
  }

  std::string to_string(const std::string& var = "t") const {
    if (den_.is_one()) return num_.to_string(var);
    auto wrap = [&](const Poly& p) {
      std::string s = p.to_string(var);
      const bool single = s.find('+') == std::string::npos && s.find('*') == std::string::npos;
      return single ? s : "(" + s + ")";
    };
    return wrap(num_) + "/" + wrap(den_);
  }

  /// Parses expressions such as "(t^2+1)/t^3", "2*t - 1", "g*t". Integers
  /// are read mod p; "g" names the generator of F_q when q is not prime.
  static RatFunc parse(const FieldRef& f, const std::string& text, const std::string& var = "t");

 private:
  // Inputs already coprime; only normalizes the denominator.
  static RatFunc make_reduced(Poly num, Poly den) {
    RatFunc r;
    if (num.is_zero()) {
      r.num_ = Poly(den.field());
      r.den_ = Poly::one(den.field());
      return r;
    }
    if (!den.is_monic()) {
      const Fq li = den.field()->inv(den.lead());
      num = num.scaled(li);
      den = den.scaled(li);
    }
    r.num_ = std::move(num);
    r.den_ = std::move(den);
    return r;
  }

  Poly num_;
  Poly den_;
};

namespace detail {

class RatFuncParser {
 public:
  RatFuncParser(const FieldRef& f, const std::string& text, const std::string& var) : f_(f), s_(text), var_(var) {}

  RatFunc run() {
    skip();
    if (pos_ >= s_.size()) fail("empty expression");
    RatFunc r = expr();
    skip();
    if (pos_ < s_.size()) fail(std::string("unexpected '") + s_[pos_] + "'");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("parse error at position " + std::to_string(pos_) + " in \"" + s_ + "\": " + what);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool starts_factor() {
    skip();
    if (pos_ >= s_.size()) return false;
    const char c = s_[pos_];
    return std::isdigit(static_cast<unsigned char>(c)) || std::isalpha(static_cast<unsigned char>(c)) || c == '(';
  }

  RatFunc expr() {
    RatFunc acc = term();
    for (;;) {
      skip();
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) {
        const char op = s_[pos_++];
        RatFunc rhs = term();
        acc = op == '+' ? acc + rhs : acc - rhs;
      } else {
        return acc;
      }
    }
  }

  RatFunc term() {
    RatFunc acc = unary();
    for (;;) {
      skip();
      if (pos_ < s_.size() && (s_[pos_] == '*' || s_[pos_] == '/')) {
        const char op = s_[pos_++];
        const std::size_t at = pos_;
        RatFunc rhs = unary();
        if (op == '*') {
          acc = acc * rhs;
        } else {
          if (rhs.is_zero()) {
            pos_ = at;
            fail("division by zero");
          }
          acc = acc / rhs;
        }
      } else if (starts_factor()) {
        acc = acc * power();
      } else {
        return acc;
      }
    }
  }

  RatFunc unary() {
    skip();
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
      const char op = s_[pos_++];
      RatFunc r = unary();
      return op == '-' ? -r : r;
    }
    return power();
  }

  RatFunc power() {
    RatFunc base = primary();
    skip();
    if (pos_ < s_.size() && s_[pos_] == '^') {
      ++pos_;
      skip();
      bool paren = false;
      if (pos_ < s_.size() && s_[pos_] == '(') {
        paren = true;
        ++pos_;
        skip();
      }
      bool neg = false;
      if (pos_ < s_.size() && s_[pos_] == '-') {
        neg = true;
        ++pos_;
        skip();
      }
      if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected an integer exponent");
      std::int64_t e = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        e = e * 10 + (s_[pos_++] - '0');
        if (e > 1000000) fail("exponent too large");
      }
      if (paren) {
        skip();
        if (pos_ >= s_.size() || s_[pos_] != ')') fail("expected ')'");
        ++pos_;
      }
      if (neg && base.is_zero()) fail("negative power of zero");
      base = base.pow(neg ? -e : e);
    }
    return base;
  }

  RatFunc primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      RatFunc r = expr();
      skip();
      if (pos_ >= s_.size() || s_[pos_] != ')') fail("expected ')'");
      ++pos_;
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::int64_t v = 0;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        v = (v * 10 + (s_[pos_++] - '0')) % static_cast<std::int64_t>(f_->p());
      }
      return RatFunc::constant(f_, f_->from_int(v));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (name == var_) return RatFunc::x(f_);
      if (name == "g" && f_->k() > 1) return RatFunc::constant(f_, f_->generator());
      pos_ = start;
      fail("unknown symbol '" + name + "' (expected '" + var_ + "')");
    }
    fail(std::string("unexpected '") + c + "'");
  }

  const FieldRef& f_;
  const std::string& s_;
  const std::string& var_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline RatFunc RatFunc::parse(const FieldRef& f, const std::string& text, const std::string& var) {
  return detail::RatFuncParser(f, text, var).run();
}

inline Poly parse_poly(const FieldRef& f, const std::string& text, const std::string& var = "t") {
  RatFunc r = RatFunc::parse(f, text, var);
  if (!r.is_polynomial()) throw InputError("expected a polynomial, got \"" + text + "\"");
  return r.num();
}

}  // namespace drinfeld
