#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "drinfeld/error.hpp"
#include "drinfeld/gf.hpp"
#include "drinfeld/rational.hpp"

namespace drinfeld {

/// Degree of the zero polynomial.
constexpr std::int64_t kDegNegInf = std::numeric_limits<std::int64_t>::min();

/// Dense univariate polynomial over F_q, coefficients low to high with no
/// trailing zeros.
class Poly {
 public:
  Poly() = default;
  explicit Poly(FieldRef f) : f_(std::move(f)) {}
  Poly(FieldRef f, std::vector<Fq> c) : f_(std::move(f)), c_(std::move(c)) { trim(); }

  static Poly constant(const FieldRef& f, Fq c) { return Poly(f, {c}); }
  static Poly one(const FieldRef& f) { return Poly(f, {1}); }
  static Poly x(const FieldRef& f) { return Poly(f, {0, 1}); }
  static Poly monomial(const FieldRef& f, Fq c, std::int64_t n) {
    std::vector<Fq> v(static_cast<std::size_t>(n) + 1, 0);
    v[n] = c;
    return Poly(f, std::move(v));
  }

  const FieldRef& field() const { return f_; }
  const std::vector<Fq>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  std::int64_t degree() const { return c_.empty() ? kDegNegInf : static_cast<std::int64_t>(c_.size()) - 1; }
  Fq lead() const { return c_.empty() ? 0 : c_.back(); }
  Fq coeff(std::int64_t i) const { return i >= 0 && i < static_cast<std::int64_t>(c_.size()) ? c_[i] : 0; }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }
  bool is_constant() const { return c_.size() <= 1; }
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }

  Poly monic() const {
    if (is_zero() || is_monic()) return *this;
    return scaled(f_->inv(lead()));
  }

  Poly scaled(Fq s) const {
    if (s == 0) return Poly(f_);
    if (s == 1) return *this;
    std::vector<Fq> v(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) v[i] = f_->mul(c_[i], s);
    return Poly(f_, std::move(v));
  }

  /// Multiplication by x^n.
  Poly shifted(std::int64_t n) const {
    if (is_zero() || n == 0) return *this;
    std::vector<Fq> v(static_cast<std::size_t>(n), 0);
    v.insert(v.end(), c_.begin(), c_.end());
    return Poly(f_, std::move(v));
  }

  /// Remainder mod x^n.
  Poly truncated(std::int64_t n) const {
    if (static_cast<std::int64_t>(c_.size()) <= n) return *this;
    return Poly(f_, std::vector<Fq>(c_.begin(), c_.begin() + std::max<std::int64_t>(n, 0)));
  }

  Fq eval(Fq a) const {
    Fq r = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = f_->add(f_->mul(r, a), *it);
    return r;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly(f_);
    std::vector<Fq> v(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) v[i - 1] = f_->mul(c_[i], f_->from_int(static_cast<std::int64_t>(i)));
    return Poly(f_, std::move(v));
  }

  /// Coefficient reversal x^n f(1/x) with n >= deg f.
  Poly reversed(std::int64_t n) const {
    std::vector<Fq> v(static_cast<std::size_t>(n) + 1, 0);
    for (std::size_t i = 0; i < c_.size(); ++i) v[n - i] = c_[i];
    return Poly(f_, std::move(v));
  }

  /// f^{p^e}: each coefficient raised to p^e and x replaced by x^{p^e}.
  Poly frobenius_p(int e) const {
    if (is_zero() || e == 0) return *this;
    std::uint64_t pe = 1;
    for (int i = 0; i < e; ++i) pe *= f_->p();
    const bool fixed = e % f_->k() == 0;
    std::vector<Fq> v((c_.size() - 1) * pe + 1, 0);
    for (std::size_t i = 0; i < c_.size(); ++i) v[i * pe] = fixed ? c_[i] : f_->pow(c_[i], pe);
    return Poly(f_, std::move(v));
  }

  /// f^{q^e}, which for coefficients in F_q only spreads the exponents.
  Poly frobenius_q(int e) const { return frobenius_p(e * f_->k()); }

  /// f(g(x)).
  Poly compose(const Poly& g) const {
    Poly r(f_);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * g + Poly::constant(f_, *it);
    return r;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    const FieldRef& f = a.f_ ? a.f_ : b.f_;
    std::vector<Fq> v(std::max(a.c_.size(), b.c_.size()), 0);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f->add(a.coeff(i), b.coeff(i));
    return Poly(f, std::move(v));
  }

  friend Poly operator-(const Poly& a, const Poly& b) {
    const FieldRef& f = a.f_ ? a.f_ : b.f_;
    std::vector<Fq> v(std::max(a.c_.size(), b.c_.size()), 0);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f->sub(a.coeff(i), b.coeff(i));
    return Poly(f, std::move(v));
  }

  Poly operator-() const { return Poly(f_) - *this; }

  friend Poly operator*(const Poly& a, const Poly& b) {
    const FieldRef& f = a.f_ ? a.f_ : b.f_;
    if (a.is_zero() || b.is_zero()) return Poly(f);
    const std::size_t n = a.c_.size(), m = b.c_.size();
    if (f->is_prime_field()) {
      const std::uint64_t p = f->p();
      // Each term is below 2^32 and no entry receives 2^32 terms.
      std::vector<std::uint64_t> acc(n + m - 1, 0);
      for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t ai = a.c_[i];
        if (!ai) continue;
        for (std::size_t j = 0; j < m; ++j) acc[i + j] += ai * b.c_[j];
      }
      std::vector<Fq> v(acc.size());
      for (std::size_t i = 0; i < acc.size(); ++i) v[i] = static_cast<Fq>(acc[i] % p);
      return Poly(f, std::move(v));
    }
    std::vector<Fq> v(n + m - 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (!a.c_[i]) continue;
      for (std::size_t j = 0; j < m; ++j) v[i + j] = f->add(v[i + j], f->mul(a.c_[i], b.c_[j]));
    }
    return Poly(f, std::move(v));
  }

  /// Euclidean division; throws on a zero divisor.
  static std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw DomainError("polynomial division by zero");
    const FieldRef& f = b.f_;
    if (a.degree() < b.degree()) return {Poly(f), a};
    std::vector<Fq> r = a.c_;
    const std::size_t m = b.c_.size();
    std::vector<Fq> quot(r.size() - m + 1, 0);
    const Fq li = f->inv(b.lead());
    const bool prime = f->is_prime_field();
    const std::uint32_t p = f->p();
    for (std::size_t top = r.size() - 1;; --top) {
      const std::size_t base = top - (m - 1);
      const Fq c = prime ? static_cast<Fq>(std::uint64_t(r[top]) * li % p) : f->mul(r[top], li);
      quot[base] = c;
      if (c != 0) {
        if (prime) {
          const std::uint64_t nc = p - c;
          for (std::size_t j = 0; j < m; ++j) r[base + j] = static_cast<Fq>((r[base + j] + nc * b.c_[j]) % p);
        } else {
          for (std::size_t j = 0; j < m; ++j) r[base + j] = f->sub(r[base + j], f->mul(c, b.c_[j]));
        }
      }
      if (base == 0) break;
    }
    r.resize(m - 1);
    return {Poly(f, std::move(quot)), Poly(f, std::move(r))};
  }

  friend Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).first; }
  friend Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }

  bool divides(const Poly& other) const { return (other % *this).is_zero(); }

  /// Monic gcd (zero only when both inputs are zero).
  static Poly gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
      Poly r = a % b;
      a = std::move(b);
      b = std::move(r);
    }
    return a.monic();
  }

  /// Returns (g, s, t) with s*a + t*b = g monic.
  static std::tuple<Poly, Poly, Poly> xgcd(const Poly& a, const Poly& b) {
    const FieldRef& f = a.f_ ? a.f_ : b.f_;
    Poly r0 = a, r1 = b, s0 = one(f), s1(f), t0(f), t1 = one(f);
    while (!r1.is_zero()) {
      auto [qt, r2] = divmod(r0, r1);
      Poly s2 = s0 - qt * s1, t2 = t0 - qt * t1;
      r0 = std::move(r1);
      r1 = std::move(r2);
      s0 = std::move(s1);
      s1 = std::move(s2);
      t0 = std::move(t1);
      t1 = std::move(t2);
    }
    if (r0.is_zero()) return {r0, s0, t0};
    const Fq li = f->inv(r0.lead());
    return {r0.scaled(li), s0.scaled(li), t0.scaled(li)};
  }

  /// Inverse of a modulo m; throws if not coprime.
  static Poly inverse_mod(const Poly& a, const Poly& m) {
    auto [g, s, t] = xgcd(a % m, m);
    if (!g.is_one()) throw DomainError("polynomial not invertible modulo the given modulus");
    return s % m;
  }

  static Poly powmod(Poly base, BigInt e, const Poly& m) {
    Poly result = one(m.f_) % m;
    base = base % m;
    while (e > 0) {
      if ((e & 1) != 0) result = (result * base) % m;
      e >>= 1;
      if (e > 0) base = (base * base) % m;
    }
    return result;
  }

  static Poly pow(Poly base, std::uint64_t e) {
    Poly result = one(base.f_);
    while (e) {
      if (e & 1) result = result * base;
      e >>= 1;
      if (e) base = base * base;
    }
    return result;
  }

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  /// Degree first, then coefficients from the top down.
  friend bool operator<(const Poly& a, const Poly& b) {
    if (a.c_.size() != b.c_.size()) return a.c_.size() < b.c_.size();
    for (std::size_t i = a.c_.size(); i-- > 0;) {
      if (a.c_[i] != b.c_[i]) return a.c_[i] < b.c_[i];
    }
    return false;
  }

  std::string to_string(const std::string& var = "t") const {
    if (is_zero()) return "0";
    std::string out;
    for (std::size_t i = c_.size(); i-- > 0;) {
      const Fq c = c_[i];
      if (c == 0) continue;
      if (!out.empty()) out += "+";
      std::string cs = f_->to_string(c);
      if (f_->is_compound(c)) cs = "(" + cs + ")";
      if (i == 0) {
        out += cs;
        continue;
      }
      if (c != 1) out += cs + "*";
      out += var;
      if (i > 1) out += "^" + std::to_string(i);
    }
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  FieldRef f_;
  std::vector<Fq> c_;
};

}  // namespace drinfeld
