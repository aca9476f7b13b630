#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "drinfeld/error.hpp"
#include "drinfeld/factor.hpp"
#include "drinfeld/linalg.hpp"
#include "drinfeld/local.hpp"
#include "drinfeld/module.hpp"

namespace drinfeld {

constexpr int kDefaultNMax = 32;

struct AnnihilatorBound {
  std::int64_t D = 0;
  Poly b_lcm;
  /// True when S is empty: the torsion is F_q and b_lcm is the annihilator
  /// t - phi_t(1) of the constants rather than an lcm.
  bool constants_only = false;
};

/// D = r N |S| and the lcm of all monic polynomials of degree <= D.
inline AnnihilatorBound annihilator_bound(const DrinfeldModule& phi) {
  const FieldRef& f = phi.fq();
  const auto s = bad_reduction_set(phi);
  AnnihilatorBound out;
  if (s.empty()) {
    RatFunc c = phi.apply_t(RatFunc::one(f));
    out.constants_only = true;
    out.b_lcm = Poly::x(f) - Poly::constant(f, c.constant_value());
    return out;
  }
  out.D = static_cast<std::int64_t>(phi.r()) * n_phi(phi) * static_cast<std::int64_t>(s.size());
  out.b_lcm = Poly::one(f);
  for (int d = 1; d <= out.D; ++d) {
    for (const auto& p : monic_irreducibles(f, d)) out.b_lcm = out.b_lcm * Poly::pow(p, out.D / d);
  }
  return out;
}

struct TorsionVerdict {
  bool torsion = false;
  Poly annihilator;  // minimal monic b with phi_b(x) = 0, when torsion
  /// For non-torsion points certified by an escaping orbit or a pole at a
  /// good place: the place, its exact local height and the escape step.
  std::optional<Place> witness;
  std::optional<Rational> witness_height;
  int escape_step = 0;
  std::string reason;
};

namespace detail {

/// Coefficient vectors of y_0..y_n over their common denominator.
inline Matrix common_denominator_vectors(const std::vector<RatFunc>& ys, const FieldRef& f) {
  Poly l = Poly::one(f);
  for (const auto& y : ys) l = l / Poly::gcd(l, y.den()) * y.den();
  std::vector<Poly> nums;
  std::size_t dim = 1;
  for (const auto& y : ys) {
    nums.push_back(y.num() * (l / y.den()));
    dim = std::max<std::size_t>(dim, nums.back().coeffs().size());
  }
  Matrix out;
  for (const auto& n : nums) {
    Vec v(dim, 0);
    for (std::size_t i = 0; i < n.coeffs().size(); ++i) v[i] = n.coeffs()[i];
    out.push_back(std::move(v));
  }
  return out;
}

constexpr std::int64_t kMaxIterateDegree = 200000;

}  // namespace detail

/// Smallest monic b of degree <= max_degree with phi_b(x) = 0, found as the
/// first F_q-linear dependency among x, phi_t(x), phi_t^2(x), ...
inline std::optional<Poly> krylov_annihilator(const DrinfeldModule& phi, const RatFunc& x, std::int64_t max_degree) {
  const FieldRef& f = phi.fq();
  std::vector<RatFunc> ys{x};
  for (std::int64_t j = 1; j <= max_degree; ++j) {
    if (ys.back().is_zero()) break;
    ys.push_back(phi.apply_t(ys.back()));
    if (ys.back().weil_degree() > detail::kMaxIterateDegree) {
      throw BudgetExhausted("iterates too large while searching for an annihilator");
    }
  }
  Matrix vecs = detail::common_denominator_vectors(ys, f);
  IncrementalSpan span(*f, vecs.empty() ? 1 : vecs[0].size());
  for (std::size_t k = 0; k < vecs.size(); ++k) {
    auto dep = span.add(vecs[k]);
    if (!dep) continue;
    std::vector<Fq> b(k + 1, 0);
    b[k] = 1;
    for (std::size_t j = 0; j < k; ++j) b[j] = f->neg((*dep)[j]);
    return Poly(f, std::move(b));
  }
  return std::nullopt;
}

/// Checks that no proper monic divisor of b annihilates x.
inline bool annihilator_is_minimal(const DrinfeldModule& phi, const RatFunc& x, const Poly& b) {
  if (b.degree() < 1) return true;
  for (const auto& [p, e] : factor(b).factors) {
    if (phi.apply(b / p, x).is_zero()) return false;
  }
  return true;
}

/// Decides whether x is a torsion point; torsion comes with its minimal
/// annihilator, non-torsion with a height witness whenever one exists.
inline TorsionVerdict is_torsion(const DrinfeldModule& phi, const RatFunc& x, int n_max = kDefaultNMax) {
  phi.require_monic();
  const FieldRef& f = phi.fq();
  const FunctionField& k = phi.base();
  TorsionVerdict out;
  if (x.is_zero()) {
    out.torsion = true;
    out.annihilator = Poly::one(f);
    out.reason = "zero";
    return out;
  }
  const auto s = bad_reduction_set(phi);
  const std::uint32_t q = phi.q();
  // A pole outside S has positive local height.
  for (const auto& v : poles(k, x)) {
    if (std::find(s.begin(), s.end(), v) != s.end()) continue;
    out.witness = v;
    out.witness_height = -v.degree() * Rational(*v.valuation(x));
    out.reason = "pole at a place of good reduction";
    return out;
  }
  if (s.empty()) {
    // x is integral everywhere, hence constant.
    out.torsion = true;
    out.annihilator = *krylov_annihilator(phi, x, 1);
    out.reason = "constant";
    return out;
  }
  for (const auto& v : s) {
    LocalOrbit orbit = local_orbit(phi, v, x, n_max, escape_floor(phi, v), 0);
    if (!orbit.escaped_at) continue;
    const int n = *orbit.escaped_at;
    out.witness = v;
    out.escape_step = n;
    out.witness_height = -v.degree() * Rational(orbit.ys[n].e) / Rational(big_pow(q, std::int64_t(phi.r()) * n));
    out.reason = "escaping orbit";
    return out;
  }
  const std::int64_t d = static_cast<std::int64_t>(phi.r()) * n_phi(phi) * static_cast<std::int64_t>(s.size());
  auto b = krylov_annihilator(phi, x, d);
  if (!b) {
    out.reason = "no annihilator of degree <= " + std::to_string(d);
    return out;
  }
  if (!phi.apply(*b, x).is_zero() || !annihilator_is_minimal(phi, x, *b)) {
    throw Error("internal: annihilator verification failed");
  }
  out.torsion = true;
  out.annihilator = *b;
  out.reason = "linear dependency among iterates";
  return out;
}

/// The F_q-space spanned by the torsion points: the largest phi_t-stable
/// subspace of {x : v(x) >= ceil(min(0, M_v)) on S, integral elsewhere}.
struct TorsionSpace {
  std::vector<RatFunc> ambient;  // basis of the Riemann-Roch space
  Matrix basis;                  // torsion basis, coordinates in `ambient`
  Matrix phi_matrix;             // phi_t on the torsion basis (column j = image of basis j)
  std::vector<RatFunc> elements_of_basis;

  std::size_t dim() const { return basis.size(); }
};

inline TorsionSpace torsion_space(const DrinfeldModule& phi) {
  phi.require_monic();
  const FieldRef& f = phi.fq();
  const FiniteField& F = *f;
  const FunctionField& k = phi.base();
  const auto s = bad_reduction_set(phi);
  Poly den = Poly::one(f);
  std::int64_t inf_room = 0;
  for (const auto& v : s) {
    const std::int64_t bound = static_cast<std::int64_t>(ceil_of(escape_floor(phi, v)));
    if (v.is_infinite()) {
      inf_room = -bound;
    } else {
      den = den * Poly::pow(v.prime(), static_cast<std::uint64_t>(-bound));
    }
  }
  TorsionSpace ts;
  const std::int64_t n = den.degree() + inf_room + 1;
  for (std::int64_t j = 0; j < n; ++j) ts.ambient.push_back(RatFunc::make(Poly::monomial(f, 1, j), den));

  std::vector<RatFunc> images;
  for (const auto& b : ts.ambient) images.push_back(phi.apply_t(b));
  Poly big = den;
  for (const auto& y : images) big = big / Poly::gcd(big, y.den()) * y.den();
  const Poly lift = big / den;
  std::vector<Poly> img_num, emb_num;
  std::size_t dim = 1;
  for (const auto& y : images) {
    img_num.push_back(y.num() * (big / y.den()));
    dim = std::max<std::size_t>(dim, img_num.back().coeffs().size());
  }
  for (std::int64_t j = 0; j < n; ++j) {
    emb_num.push_back(Poly::monomial(f, 1, j) * lift);
    dim = std::max<std::size_t>(dim, emb_num.back().coeffs().size());
  }
  // Columns of the image and embedding maps, in ambient coordinates.
  auto column = [&](const std::vector<Poly>& polys, const Vec& c) {
    Vec out(dim, 0);
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (!c[j]) continue;
      const auto& co = polys[j].coeffs();
      for (std::size_t i = 0; i < co.size(); ++i) out[i] = F.add(out[i], F.mul(c[j], co[i]));
    }
    return out;
  };

  Matrix basis;
  for (std::int64_t j = 0; j < n; ++j) {
    Vec e(n, 0);
    e[j] = 1;
    basis.push_back(e);
  }
  for (;;) {
    const std::size_t d = basis.size();
    if (d == 0) break;
    // Unknowns (y, z): Phi(B y) = E(B z).
    Matrix sys(dim, Vec(2 * d, 0));
    for (std::size_t c = 0; c < d; ++c) {
      Vec phi_col = column(img_num, basis[c]);
      Vec emb_col = column(emb_num, basis[c]);
      for (std::size_t i = 0; i < dim; ++i) {
        sys[i][c] = phi_col[i];
        sys[i][d + c] = F.neg(emb_col[i]);
      }
    }
    Matrix next;
    for (const auto& kv : kernel(F, sys, 2 * d)) {
      Vec w(n, 0);
      for (std::size_t c = 0; c < d; ++c) {
        if (!kv[c]) continue;
        for (std::int64_t j = 0; j < n; ++j) w[j] = F.add(w[j], F.mul(kv[c], basis[c][j]));
      }
      next.push_back(std::move(w));
    }
    if (next.size() == d) {
      basis = std::move(next);
      break;
    }
    basis = std::move(next);
  }
  ts.basis = basis;
  const std::size_t d = basis.size();
  ts.phi_matrix.assign(d, Vec(d, 0));
  if (d > 0) {
    Matrix emb(dim, Vec(d, 0));
    for (std::size_t c = 0; c < d; ++c) {
      Vec col = column(emb_num, basis[c]);
      for (std::size_t i = 0; i < dim; ++i) emb[i][c] = col[i];
    }
    for (std::size_t c = 0; c < d; ++c) {
      auto z = solve(F, emb, column(img_num, basis[c]), d);
      if (!z) throw Error("internal: torsion space is not stable");
      for (std::size_t i = 0; i < d; ++i) ts.phi_matrix[i][c] = (*z)[i];
    }
  }
  for (const auto& b : basis) {
    RatFunc acc(f);
    for (std::int64_t j = 0; j < n; ++j) {
      if (b[j]) acc = acc + ts.ambient[j].scaled(b[j]);
    }
    ts.elements_of_basis.push_back(acc);
  }
  (void)k;
  return ts;
}

namespace detail {

inline Matrix mat_mul(const FiniteField& f, const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size();
  Matrix c(n, Vec(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l < n; ++l) {
      if (!a[i][l]) continue;
      for (std::size_t j = 0; j < n; ++j) c[i][j] = f.add(c[i][j], f.mul(a[i][l], b[l][j]));
    }
  }
  return c;
}

/// All F_q-combinations of the given basis elements, sorted.
inline std::vector<RatFunc> span_elements(const FieldRef& f, const std::vector<RatFunc>& basis) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    total *= f->q();
    if (total > (1u << 16)) throw BudgetExhausted("torsion module too large to list");
  }
  std::vector<RatFunc> out{RatFunc(f)};
  for (const auto& b : basis) {
    std::vector<RatFunc> next;
    for (Fq c = 0; c < f->q(); ++c) {
      RatFunc cb = b.scaled(c);
      for (const auto& x : out) next.push_back(x + cb);
    }
    out = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Every root of phi_b in K (a finite F_q-space), sorted.
inline std::vector<RatFunc> kernel_in_K(const DrinfeldModule& phi, const Poly& b) {
  phi.require_monic();
  if (b.is_zero()) throw DomainError("kernel of phi_0 is all of K");
  const FieldRef& f = phi.fq();
  RatFunc c0(f), apow = RatFunc::one(f);
  for (std::size_t j = 0; j < b.coeffs().size(); ++j) {
    c0 = c0 + apow.scaled(b.coeffs()[j]);
    apow = apow * phi.coeff(0);
  }
  if (c0.is_zero()) {
    throw DomainError("phi_b is inseparable: its tau^0 coefficient b(a_0) vanishes, so roots are not simple");
  }
  // Every root in K is torsion, so it lies in the torsion space.
  TorsionSpace ts = torsion_space(phi);
  const std::size_t d = ts.dim();
  std::vector<RatFunc> roots_basis;
  if (d > 0) {
    Matrix acc(d, Vec(d, 0));
    for (auto it = b.coeffs().rbegin(); it != b.coeffs().rend(); ++it) {
      acc = detail::mat_mul(*f, ts.phi_matrix, acc);
      for (std::size_t i = 0; i < d; ++i) acc[i][i] = f->add(acc[i][i], *it);
    }
    for (const auto& kv : kernel(*f, acc, d)) {
      RatFunc x(f);
      for (std::size_t c = 0; c < d; ++c) {
        if (kv[c]) x = x + ts.elements_of_basis[c].scaled(kv[c]);
      }
      roots_basis.push_back(x);
    }
  }
  auto roots = detail::span_elements(f, roots_basis);
  for (const auto& x : roots) {
    if (!phi.apply(b, x).is_zero()) throw Error("internal: kernel element fails substitution check");
  }
  return roots;
}

struct TorsionModule {
  AnnihilatorBound bound;
  std::vector<RatFunc> elements;           // sorted
  std::vector<Poly> minimal_annihilators;  // per element
};

/// The full torsion submodule of K.
inline TorsionModule torsion_enumerate(const DrinfeldModule& phi) {
  TorsionModule out;
  out.bound = annihilator_bound(phi);
  out.elements = kernel_in_K(phi, out.bound.b_lcm);
  const TorsionSpace ts = torsion_space(phi);
  BigInt expected = big_pow(phi.q(), static_cast<std::int64_t>(ts.dim()));
  if (BigInt(out.elements.size()) != expected) throw Error("internal: torsion count mismatch with the stable space");
  for (const auto& x : out.elements) {
    RatFunc y = phi.apply_t(x);
    if (!std::binary_search(out.elements.begin(), out.elements.end(), y)) {
      throw Error("internal: torsion set not closed under phi_t");
    }
    TorsionVerdict v = is_torsion(phi, x);
    if (!v.torsion) throw Error("internal: enumerated point not certified torsion");
    out.minimal_annihilators.push_back(v.annihilator);
  }
  return out;
}

}  // namespace drinfeld
