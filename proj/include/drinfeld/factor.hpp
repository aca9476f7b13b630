#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "drinfeld/error.hpp"
#include "drinfeld/poly.hpp"
#include "drinfeld/rng.hpp"

namespace drinfeld {

struct Factorization {
  Fq unit = 0;
  std::vector<std::pair<Poly, int>> factors;  // monic irreducibles, sorted
};

namespace detail {

inline Poly pth_root(const Poly& f) {
  const auto& fld = *f.field();
  const std::size_t p = fld.p();
  std::vector<Fq> v;
  for (std::size_t i = 0; i < f.coeffs().size(); i += p) v.push_back(fld.pth_root(f.coeffs()[i]));
  return Poly(f.field(), std::move(v));
}

/// (squarefree factor, multiplicity) pairs of a monic polynomial.
inline std::vector<std::pair<Poly, int>> squarefree(const Poly& f) {
  std::vector<std::pair<Poly, int>> out;
  if (f.degree() < 1) return out;
  const FieldRef& fld = f.field();
  Poly c = Poly::gcd(f, f.derivative());
  Poly w = f / c;
  int i = 1;
  while (w.degree() > 0) {
    Poly y = Poly::gcd(w, c);
    Poly z = w / y;
    if (z.degree() > 0) out.emplace_back(z, i);
    ++i;
    w = y;
    c = c / y;
  }
  if (c.degree() > 0) {
    const int p = static_cast<int>(fld->p());
    for (auto& [g, m] : squarefree(pth_root(c))) out.emplace_back(g, m * p);
  }
  return out;
}

/// x^{q} mod m, repeated e times starting from h.
inline Poly frobenius_mod(const Poly& h, const Poly& m) { return Poly::powmod(h, BigInt(h.field()->q()), m); }

/// Distinct-degree factorization of a squarefree monic polynomial.
inline std::vector<std::pair<Poly, int>> distinct_degree(Poly f) {
  std::vector<std::pair<Poly, int>> out;
  const FieldRef& fld = f.field();
  const Poly x = Poly::x(fld);
  Poly h = x % f;
  for (int d = 1; 2 * d <= f.degree(); ++d) {
    h = frobenius_mod(h, f);
    Poly g = Poly::gcd(h - x, f);
    if (g.degree() > 0) {
      out.emplace_back(g, d);
      f = f / g;
      h = h % f;
    }
  }
  if (f.degree() > 0) out.emplace_back(f, static_cast<int>(f.degree()));
  return out;
}

inline Poly random_poly(const FieldRef& fld, std::int64_t below_degree, Rng& rng) {
  std::vector<Fq> v(static_cast<std::size_t>(below_degree));
  for (auto& c : v) c = static_cast<Fq>(rng.below(fld->q()));
  return Poly(fld, std::move(v));
}

/// Splits a product of distinct irreducibles of degree d (Cantor-Zassenhaus).
inline void equal_degree(const Poly& g, int d, Rng& rng, std::vector<Poly>& out) {
  if (g.degree() == d) {
    out.push_back(g);
    return;
  }
  const FieldRef& fld = g.field();
  const std::uint32_t q = fld->q();
  for (;;) {
    Poly a = random_poly(fld, g.degree(), rng);
    if (a.degree() < 1) continue;
    Poly b;
    if (q % 2 == 1) {
      BigInt e = (boost::multiprecision::pow(BigInt(q), static_cast<unsigned>(d)) - 1) / 2;
      b = Poly::powmod(a, e, g) - Poly::one(fld);
    } else {
      // Absolute trace to F_2: a + a^2 + ... + a^{2^{kd-1}}.
      const int steps = fld->k() * d;
      Poly term = a % g;
      b = term;
      for (int i = 1; i < steps; ++i) {
        term = (term * term) % g;
        b = b + term;
      }
    }
    Poly h = Poly::gcd(b, g);
    if (h.degree() > 0 && h.degree() < g.degree()) {
      equal_degree(h, d, rng, out);
      equal_degree(g / h, d, rng, out);
      return;
    }
  }
}

inline std::vector<int> prime_divisors(int n) {
  std::vector<int> out;
  for (int d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace detail

/// Full factorization into a unit times monic irreducible powers, sorted by
/// the polynomial order. Deterministic: the splitting randomness is seeded.
inline Factorization factor(const Poly& f) {
  if (f.is_zero()) throw DomainError("cannot factor the zero polynomial");
  Factorization out;
  out.unit = f.lead();
  Poly g = f.monic();
  std::map<Poly, int> acc;
  Rng rng(0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(g.degree()));
  for (auto& [sq, mult] : detail::squarefree(g)) {
    for (auto& [dd, d] : detail::distinct_degree(sq)) {
      std::vector<Poly> parts;
      detail::equal_degree(dd, d, rng, parts);
      for (auto& p : parts) acc[p] += mult;
    }
  }
  out.factors.assign(acc.begin(), acc.end());
  return out;
}

/// Rabin's test.
inline bool is_irreducible(const Poly& f) {
  const std::int64_t n = f.degree();
  if (n < 1) return false;
  if (n == 1) return true;
  const Poly m = f.monic();
  const Poly x = Poly::x(f.field());
  auto x_qe = [&](std::int64_t e) {
    Poly h = x % m;
    for (std::int64_t i = 0; i < e; ++i) h = detail::frobenius_mod(h, m);
    return h;
  };
  if (x_qe(n) != x % m) return false;
  for (int r : detail::prime_divisors(static_cast<int>(n))) {
    if (Poly::gcd(x_qe(n / r) - x, m).degree() > 0) return false;
  }
  return true;
}

/// Largest e with P^e | f.
inline int ord(const Poly& f, const Poly& p) {
  if (f.is_zero()) throw DomainError("order of the zero polynomial is infinite");
  if (p.degree() < 1) throw DomainError("order requires a non-constant prime");
  int e = 0;
  Poly g = f;
  for (;;) {
    auto [qt, r] = Poly::divmod(g, p);
    if (!r.is_zero()) return e;
    g = std::move(qt);
    ++e;
  }
}

/// Every monic polynomial of degree d, in index order (c_0 least significant).
inline std::vector<Poly> monic_polys_of_degree(const FieldRef& fld, int d) {
  std::vector<Poly> out;
  std::uint64_t count = 1;
  for (int i = 0; i < d; ++i) {
    count *= fld->q();
    if (count > (1u << 24)) throw BudgetExhausted("too many polynomials to enumerate");
  }
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::vector<Fq> v(d + 1, 0);
    std::uint64_t x = idx;
    for (int i = 0; i < d; ++i) {
      v[i] = static_cast<Fq>(x % fld->q());
      x /= fld->q();
    }
    v[d] = 1;
    out.emplace_back(fld, std::move(v));
  }
  return out;
}

inline std::vector<Poly> monic_irreducibles(const FieldRef& fld, int d) {
  std::vector<Poly> out;
  for (auto& p : monic_polys_of_degree(fld, d)) {
    if (is_irreducible(p)) out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace drinfeld
