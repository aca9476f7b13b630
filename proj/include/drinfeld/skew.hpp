#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "drinfeld/error.hpp"
#include "drinfeld/ratfunc.hpp"

namespace drinfeld {

/// Element sum c_i tau^i of K{tau} with K = F_q(x) and tau(y) = y^q.
class SkewPoly {
 public:
  SkewPoly() = default;
  explicit SkewPoly(FieldRef f) : f_(std::move(f)) {}
  SkewPoly(FieldRef f, std::vector<RatFunc> c) : f_(std::move(f)), c_(std::move(c)) { trim(); }

  /// c tau^0.
  static SkewPoly scalar(const RatFunc& c) { return SkewPoly(c.field(), {c}); }
  static SkewPoly identity(const FieldRef& f) { return scalar(RatFunc::one(f)); }
  static SkewPoly tau(const FieldRef& f, int n = 1) {
    std::vector<RatFunc> c(n + 1, RatFunc(f));
    c[n] = RatFunc::one(f);
    return SkewPoly(f, std::move(c));
  }

  const FieldRef& field() const { return f_; }
  const std::vector<RatFunc>& coeffs() const { return c_; }
  RatFunc coeff(std::size_t i) const { return i < c_.size() ? c_[i] : RatFunc(f_); }
  bool is_zero() const { return c_.empty(); }

  /// The tau-degree n; the polynomial degree is q^n.
  int tau_degree() const {
    if (is_zero()) throw DomainError("degree of the zero skew polynomial");
    return static_cast<int>(c_.size()) - 1;
  }

  BigInt degree() const { return boost::multiprecision::pow(BigInt(f_->q()), static_cast<unsigned>(tau_degree())); }

  friend SkewPoly operator+(const SkewPoly& a, const SkewPoly& b) {
    std::vector<RatFunc> c(std::max(a.c_.size(), b.c_.size()), RatFunc(a.f_ ? a.f_ : b.f_));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
    return SkewPoly(a.f_ ? a.f_ : b.f_, std::move(c));
  }

  friend SkewPoly operator-(const SkewPoly& a, const SkewPoly& b) {
    std::vector<RatFunc> c(std::max(a.c_.size(), b.c_.size()), RatFunc(a.f_ ? a.f_ : b.f_));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) - b.coeff(i);
    return SkewPoly(a.f_ ? a.f_ : b.f_, std::move(c));
  }

  SkewPoly scaled(Fq s) const {
    std::vector<RatFunc> c = c_;
    for (auto& x : c) x = x.scaled(s);
    return SkewPoly(f_, std::move(c));
  }

  /// Composition f o g: the tau^k coefficient is sum_{i+j=k} f_i g_j^{q^i}.
  friend SkewPoly operator*(const SkewPoly& f, const SkewPoly& g) {
    const FieldRef& fld = f.f_ ? f.f_ : g.f_;
    if (f.is_zero() || g.is_zero()) return SkewPoly(fld);
    std::vector<RatFunc> c(f.c_.size() + g.c_.size() - 1, RatFunc(fld));
    for (std::size_t i = 0; i < f.c_.size(); ++i) {
      if (f.c_[i].is_zero()) continue;
      for (std::size_t j = 0; j < g.c_.size(); ++j) {
        if (g.c_[j].is_zero()) continue;
        c[i + j] = c[i + j] + f.c_[i] * g.c_[j].frobenius_q(static_cast<int>(i));
      }
    }
    return SkewPoly(fld, std::move(c));
  }

  /// sum c_i y^{q^i}.
  RatFunc eval(const RatFunc& y) const {
    RatFunc acc(f_);
    if (y.is_zero()) return acc;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (!c_[i].is_zero()) acc = acc + c_[i] * y.frobenius_q(static_cast<int>(i));
    }
    return acc;
  }

  friend bool operator==(const SkewPoly& a, const SkewPoly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const SkewPoly& a, const SkewPoly& b) { return !(a == b); }

  std::string to_string(const std::string& var = "t") const {
    if (is_zero()) return "0";
    std::string out;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i].is_zero()) continue;
      if (!out.empty()) out += " + ";
      std::string cs = c_[i].to_string(var);
      if (i > 0 && cs == "1") {
        out += i == 1 ? "tau" : "tau^" + std::to_string(i);
        continue;
      }
      if (cs.find('+') != std::string::npos && cs.front() != '(') cs = "(" + cs + ")";
      out += cs;
      if (i == 1) out += "*tau";
      if (i > 1) out += "*tau^" + std::to_string(i);
    }
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }

  FieldRef f_;
  std::vector<RatFunc> c_;
};

}  // namespace drinfeld
