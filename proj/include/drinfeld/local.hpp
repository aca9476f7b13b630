#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "drinfeld/error.hpp"
#include "drinfeld/module.hpp"
#include "drinfeld/places.hpp"

namespace drinfeld {

/// Element P^e * w + O(P^prec) of the completion at a place, with w a unit
/// reduced mod P^{prec - e}. A zero w means "zero to precision prec".
struct LocalElem {
  std::int64_t e = 0;
  Poly w;
  std::int64_t prec = 0;

  bool is_zero() const { return w.is_zero(); }
  /// Exact valuation, or nullopt when the element vanishes to precision.
  Val valuation() const { return is_zero() ? Val() : Val(e); }
};

/// Truncated arithmetic in the completion of F_q(x) at v. At infinity the
/// local coordinate is s = 1/x and "P" is the polynomial s.
class Completion {
 public:
  explicit Completion(const Place& v) : v_(v), p_(v.prime()) { pows_.push_back(Poly::one(v.field())); }

  const Place& place() const { return v_; }
  const FieldRef& field() const { return v_.field(); }

  LocalElem zero(std::int64_t prec) const { return {prec, Poly(field()), prec}; }

  /// y to absolute precision prec.
  LocalElem from(const RatFunc& y, std::int64_t prec) const {
    if (y.is_zero()) return zero(prec);
    Poly n, d;
    std::int64_t e;
    if (v_.is_infinite()) {
      n = y.num().reversed(y.num().degree());
      d = y.den().reversed(y.den().degree());
      e = y.den().degree() - y.num().degree();
    } else {
      auto [sn, en] = strip(y.num());
      auto [sd, ed] = strip(y.den());
      n = std::move(sn);
      d = std::move(sd);
      e = en - ed;
    }
    if (e >= prec) return zero(prec);
    const Poly& m = power(prec - e);
    return {e, reduce(n * Poly::inverse_mod(d, m), prec - e), prec};
  }

  LocalElem add(const LocalElem& a, const LocalElem& b) const {
    const std::int64_t prec = std::min(a.prec, b.prec);
    const std::int64_t e = std::min(a.e, b.e);
    if (e >= prec) return zero(prec);
    Poly w = Poly(field());
    if (!a.is_zero() && a.e < prec) w = w + a.w * power(a.e - e);
    if (!b.is_zero() && b.e < prec) w = w + b.w * power(b.e - e);
    return normalize(e, reduce(w, prec - e), prec);
  }

  LocalElem mul(const LocalElem& a, const LocalElem& b) const {
    const std::int64_t prec = std::min(a.prec + b.e, b.prec + a.e);
    const std::int64_t e = a.e + b.e;
    if (a.is_zero() || b.is_zero() || e >= prec) return zero(prec);
    return {e, reduce(a.w * b.w, prec - e), prec};
  }

  /// a^{q^i}; Frobenius multiplies both valuation and precision.
  LocalElem frobenius(const LocalElem& a, int i) const {
    const std::int64_t qi = static_cast<std::int64_t>(big_pow(field()->q(), i));
    if (a.is_zero()) return zero(a.prec * qi);
    return {a.e * qi, a.w.frobenius_q(i), a.prec * qi};
  }

  LocalElem scale(const LocalElem& a, Fq c) const {
    if (c == 0) return zero(a.prec);
    return {a.e, a.w.scaled(c), a.prec};
  }

  LocalElem truncate(const LocalElem& a, std::int64_t prec) const {
    if (prec >= a.prec) return a;
    if (a.is_zero() || a.e >= prec) return zero(prec);
    return {a.e, reduce(a.w, prec - a.e), prec};
  }

  /// Coordinates of P^{-base} * a mod P^{len}, as an F_q vector; requires
  /// a.e >= base and a.prec >= base + len.
  Vec coords(const LocalElem& a, std::int64_t base, std::int64_t len) const {
    const std::size_t dim = static_cast<std::size_t>(len * p_.degree());
    Vec out(dim, 0);
    if (a.is_zero() || a.e - base >= len) return out;
    Poly w = reduce(a.w * power(a.e - base), len);
    for (std::size_t i = 0; i < dim; ++i) out[i] = w.coeff(static_cast<std::int64_t>(i));
    return out;
  }

  const Poly& power(std::int64_t k) const {
    while (static_cast<std::int64_t>(pows_.size()) <= k) pows_.push_back(pows_.back() * p_);
    return pows_[k];
  }

 private:
  Poly reduce(const Poly& w, std::int64_t k) const {
    if (v_.is_infinite()) return w.truncated(k);
    if (w.degree() < k * p_.degree()) return w;
    return w % power(k);
  }

  std::pair<Poly, std::int64_t> strip(Poly a) const {
    std::int64_t k = 0;
    for (;;) {
      auto [qt, r] = Poly::divmod(a, p_);
      if (!r.is_zero()) return {a, k};
      a = std::move(qt);
      ++k;
    }
  }

  LocalElem normalize(std::int64_t e, Poly w, std::int64_t prec) const {
    while (!w.is_zero()) {
      if (v_.is_infinite()) {
        if (w.coeff(0) != 0) break;
        std::size_t z = 0;
        while (w.coeff(static_cast<std::int64_t>(z)) == 0) ++z;
        w = Poly(field(), std::vector<Fq>(w.coeffs().begin() + z, w.coeffs().end()));
        e += static_cast<std::int64_t>(z);
        break;
      }
      auto [qt, r] = Poly::divmod(w, p_);
      if (!r.is_zero()) break;
      w = std::move(qt);
      ++e;
    }
    if (w.is_zero() || e >= prec) return zero(prec);
    return {e, std::move(w), prec};
  }

  Place v_;
  Poly p_;
  mutable std::vector<Poly> pows_;
};

/// The orbit x, phi_t(x), phi_t^2(x), ... computed in the completion at v.
/// Every recorded element is exact to precision at least `target`
/// (target >= 0), as long as the orbit has not escaped below `floor`.
struct LocalOrbit {
  std::vector<LocalElem> ys;
  std::optional<int> escaped_at;  // first n with v(y_n) < floor
};

/// Iterates up to `steps` times, stopping right after the first element with
/// valuation < floor (floor <= 0 rational).
inline LocalOrbit local_orbit(const DrinfeldModule& phi, const Place& v, const RatFunc& x, int steps,
                              const Rational& floor, std::int64_t target) {
  Completion c(v);
  std::int64_t m0 = 0;
  for (const auto& a : phi.coeffs()) {
    Val va = v.valuation(a);
    if (va) m0 = std::max<std::int64_t>(m0, -*va);
  }
  target = std::max<std::int64_t>(target, 0);
  const std::int64_t n0 = target + static_cast<std::int64_t>(steps) * m0;
  // Non-escaped elements have valuation >= ceil(floor), so the coefficient
  // precision below keeps every product exact to the running cap.
  const std::int64_t low = static_cast<std::int64_t>(ceil_of(floor));
  const std::int64_t qr = static_cast<std::int64_t>(big_pow(phi.q(), phi.r()));
  std::vector<std::optional<LocalElem>> coeffs;
  for (const auto& a : phi.coeffs()) {
    if (a.is_zero()) {
      coeffs.emplace_back();
    } else {
      coeffs.emplace_back(c.from(a, n0 - qr * std::min<std::int64_t>(low, 0) + 1));
    }
  }
  auto escaped = [&](const LocalElem& y) { return !y.is_zero() && Rational(y.e) < floor; };

  LocalOrbit orbit;
  orbit.ys.push_back(c.from(x, n0));
  if (escaped(orbit.ys.back())) {
    orbit.escaped_at = 0;
    return orbit;
  }
  for (int n = 1; n <= steps; ++n) {
    const LocalElem& y = orbit.ys.back();
    const std::int64_t cap = n0 - static_cast<std::int64_t>(n) * m0;
    LocalElem acc = c.zero(cap);
    for (int i = 0; i <= phi.r(); ++i) {
      if (!coeffs[i]) continue;
      acc = c.add(acc, c.mul(*coeffs[i], c.frobenius(y, i)));
    }
    orbit.ys.push_back(c.truncate(acc, cap));
    if (escaped(orbit.ys.back())) {
      orbit.escaped_at = n;
      return orbit;
    }
  }
  return orbit;
}

}  // namespace drinfeld
