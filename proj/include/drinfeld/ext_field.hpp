#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "drinfeld/error.hpp"
#include "drinfeld/linalg.hpp"
#include "drinfeld/poly.hpp"

namespace drinfeld {

/// F_{q^m} = F_q[z]/(modulus) with elements stored as reduced polynomials,
/// i.e. coordinates in the power basis 1, z, ..., z^{m-1}.
class ExtField {
 public:
  /// The modulus must be monic irreducible; irreducibility is the caller's
  /// responsibility (places only ever pass factors from factorization).
  explicit ExtField(Poly modulus) : mod_(std::move(modulus)) {
    if (mod_.degree() < 1 || !mod_.is_monic()) throw DomainError("extension modulus must be monic of positive degree");
    if (static_cast<double>(mod_.degree()) * std::log2(static_cast<double>(base().q())) > 62.0) {
      throw DomainError("residue field F_{q^m} exceeds the supported size 2^62");
    }
  }

  const Poly& modulus() const { return mod_; }
  const FieldRef& base_ref() const { return mod_.field(); }
  const FiniteField& base() const { return *mod_.field(); }
  int degree() const { return static_cast<int>(mod_.degree()); }

  Poly reduce(const Poly& a) const { return a % mod_; }
  Poly zero() const { return Poly(base_ref()); }
  Poly one() const { return Poly::one(base_ref()); }
  Poly embed(Fq c) const { return Poly::constant(base_ref(), c); }
  Poly add(const Poly& a, const Poly& b) const { return a + b; }
  Poly sub(const Poly& a, const Poly& b) const { return a - b; }
  Poly mul(const Poly& a, const Poly& b) const { return (a * b) % mod_; }
  Poly inv(const Poly& a) const {
    if (reduce(a).is_zero()) throw DomainError("inverse of zero in residue field");
    return Poly::inverse_mod(a, mod_);
  }

  Poly pow(const Poly& a, const BigInt& e) const { return Poly::powmod(a, e, mod_); }

  /// a^{q^e}.
  Poly frobenius(const Poly& a, int e) const {
    BigInt qe = boost::multiprecision::pow(BigInt(base().q()), static_cast<unsigned>(e));
    return pow(a, qe);
  }

  Vec coords(const Poly& a) const {
    Poly r = reduce(a);
    Vec v(degree(), 0);
    for (int i = 0; i < degree(); ++i) v[i] = r.coeff(i);
    return v;
  }

  Poly from_coords(const Vec& v) const { return Poly(base_ref(), v); }

  /// X -> sum c_j X^{q^{i_j}} applied to x.
  Poly apply_additive(const std::vector<std::pair<Poly, int>>& terms, const Poly& x) const {
    Poly acc = zero();
    for (const auto& [c, i] : terms) acc = acc + mul(c, frobenius(x, i));
    return reduce(acc);
  }

  /// F_q-basis of the kernel of X -> sum c_j X^{q^{i_j}} on F_{q^m}.
  std::vector<Poly> additive_kernel(const std::vector<std::pair<Poly, int>>& terms) const {
    require_nonzero(terms);
    std::vector<Poly> out;
    for (const auto& v : kernel(base(), matrix_of(terms), degree())) out.push_back(from_coords(v));
    return out;
  }

  /// Every solution of sum c_j X^{q^{i_j}} = target, sorted.
  std::vector<Poly> additive_preimages(const std::vector<std::pair<Poly, int>>& terms, const Poly& target) const {
    require_nonzero(terms);
    Matrix a = matrix_of(terms);
    auto particular = solve(base(), a, coords(target), degree());
    if (!particular) return {};
    Poly x0 = from_coords(*particular);
    std::vector<Poly> out;
    for (const auto& k : span(additive_kernel(terms))) out.push_back(reduce(x0 + k));
    std::sort(out.begin(), out.end());
    return out;
  }

  /// All F_q-linear combinations of the given elements, sorted.
  std::vector<Poly> span(const std::vector<Poly>& basis) const {
    std::vector<Poly> out{zero()};
    const Fq q = base().q();
    for (const auto& b : basis) {
      std::vector<Poly> next;
      next.reserve(out.size() * q);
      for (Fq c = 0; c < q; ++c) {
        Poly cb = b.scaled(c);
        for (const auto& x : out) next.push_back(x + cb);
      }
      out = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Every element of F_{q^m}; only for brute-force checks on tiny fields.
  std::vector<Poly> elements() const {
    std::vector<Poly> basis;
    for (int i = 0; i < degree(); ++i) basis.push_back(Poly::monomial(base_ref(), 1, i));
    return span(basis);
  }

 private:
  static void require_nonzero(const std::vector<std::pair<Poly, int>>& terms) {
    for (const auto& t : terms) {
      if (!t.first.is_zero()) return;
    }
    throw DomainError("additive polynomial has no nonzero coefficient");
  }

  Matrix matrix_of(const std::vector<std::pair<Poly, int>>& terms) const {
    const int m = degree();
    Matrix a(m, Vec(m, 0));
    for (int j = 0; j < m; ++j) {
      Vec col = coords(apply_additive(terms, Poly::monomial(base_ref(), 1, j)));
      for (int i = 0; i < m; ++i) a[i][j] = col[i];
    }
    return a;
  }

  Poly mod_;
};

}  // namespace drinfeld
