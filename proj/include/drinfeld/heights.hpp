#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "drinfeld/error.hpp"
#include "drinfeld/local.hpp"
#include "drinfeld/module.hpp"
#include "drinfeld/torsion.hpp"

namespace drinfeld {

struct HeightValue {
  enum class Tag { Escaped, GoodReductionIntegral, TorsionCertified, IterationBudgetExhausted };

  bool exact = true;
  Rational lo;
  Rational hi;
  Tag tag = Tag::GoodReductionIntegral;
  int escape_step = 0;

  static HeightValue make_exact(Rational v, Tag tag, int step = 0) { return {true, v, v, tag, step}; }
  static HeightValue interval(Rational lo, Rational hi) { return {false, lo, hi, Tag::IterationBudgetExhausted, 0}; }

  const Rational& value() const {
    if (!exact) throw BudgetExhausted("height not certified exactly; interval [" + drinfeld::to_string(lo) + ", " + drinfeld::to_string(hi) + "]");
    return lo;
  }

  std::string tag_name() const {
    switch (tag) {
      case Tag::Escaped: return "Escaped(" + std::to_string(escape_step) + ")";
      case Tag::GoodReductionIntegral: return "GoodReductionIntegral";
      case Tag::TorsionCertified: return "TorsionCertified";
      case Tag::IterationBudgetExhausted: return "IterationBudgetExhausted";
    }
    return "";
  }

  std::string to_string() const {
    if (exact) return drinfeld::to_string(lo);
    return "[" + drinfeld::to_string(lo) + ", " + drinfeld::to_string(hi) + "]";
  }
};

/// -sum_v d(v) min(0, v(x)): the pole degree relative to the base field.
inline Rational weil_height(const RatFunc& x, std::int64_t ext_degree = 1) {
  if (x.is_zero()) return Rational(0);
  return Rational(BigInt(x.weil_degree()), BigInt(ext_degree));
}

inline Rational weil_height(const FunctionField& k, const RatFunc& x) { return weil_height(x, k.ext_degree); }

namespace detail {

inline HeightValue local_height_with(const DrinfeldModule& phi, const Place& v, const RatFunc& x, int n_max,
                                     const std::vector<Place>& s, const std::function<bool()>& torsion) {
  if (n_max < 1) throw InputError("n_max must be at least 1");
  using Tag = HeightValue::Tag;
  if (x.is_zero()) return HeightValue::make_exact(Rational(0), Tag::TorsionCertified);
  const Rational d = v.degree();
  if (!std::binary_search(s.begin(), s.end(), v)) {
    const std::int64_t vx = *v.valuation(x);
    if (vx < 0) return HeightValue::make_exact(-d * Rational(vx), Tag::Escaped, 0);
    return HeightValue::make_exact(Rational(0), Tag::GoodReductionIntegral);
  }
  const Rational lambda = escape_floor(phi, v);
  LocalOrbit orbit = local_orbit(phi, v, x, n_max, lambda, 0);
  if (orbit.escaped_at) {
    const int n = *orbit.escaped_at;
    const Rational scale(BigInt(1), big_pow(phi.q(), static_cast<std::int64_t>(phi.r()) * n));
    return HeightValue::make_exact(-d * Rational(orbit.ys[n].e) * scale, Tag::Escaped, n);
  }
  if (torsion()) return HeightValue::make_exact(Rational(0), Tag::TorsionCertified);
  const Rational scale(BigInt(1), big_pow(phi.q(), static_cast<std::int64_t>(phi.r()) * n_max));
  return HeightValue::interval(Rational(0), -d * lambda * scale);
}

}  // namespace detail

/// The canonical local height at v.
inline HeightValue local_height(const DrinfeldModule& phi, const Place& v, const RatFunc& x, int n_max = kDefaultNMax) {
  phi.require_monic();
  const auto s = bad_reduction_set(phi);
  return detail::local_height_with(phi, v, x, n_max, s, [&] { return is_torsion(phi, x, n_max).torsion; });
}

struct HeightBreakdown {
  HeightValue total;
  std::vector<std::pair<Place, HeightValue>> local;  // sorted by place
  std::optional<TorsionVerdict> torsion;            // when it was needed
};

/// Global height with its nonzero-candidate local terms: S and the poles of x.
inline HeightBreakdown global_height_breakdown(const DrinfeldModule& phi, const RatFunc& x, int n_max = kDefaultNMax) {
  phi.require_monic();
  if (n_max < 1) throw InputError("n_max must be at least 1");
  using Tag = HeightValue::Tag;
  HeightBreakdown out;
  out.total = HeightValue::make_exact(Rational(0), Tag::GoodReductionIntegral);
  if (x.is_zero()) {
    out.total.tag = Tag::TorsionCertified;
    return out;
  }
  const auto s = bad_reduction_set(phi);
  std::vector<Place> places = s;
  for (auto& v : poles(phi.base(), x)) {
    if (!std::binary_search(s.begin(), s.end(), v)) places.push_back(v);
  }
  std::sort(places.begin(), places.end());
  auto torsion = [&] {
    if (!out.torsion) out.torsion = is_torsion(phi, x, n_max);
    return out.torsion->torsion;
  };
  bool any_escape = false, all_exact = true;
  int max_step = 0;
  Rational lo(0), hi(0);
  for (const auto& v : places) {
    HeightValue h = detail::local_height_with(phi, v, x, n_max, s, torsion);
    lo += h.lo;
    hi += h.hi;
    all_exact = all_exact && h.exact;
    if (h.tag == Tag::Escaped) {
      any_escape = true;
      max_step = std::max(max_step, h.escape_step);
    }
    out.local.emplace_back(v, h);
  }
  if (!all_exact) {
    out.total = HeightValue::interval(lo, hi);
  } else if (any_escape) {
    out.total = HeightValue::make_exact(lo, Tag::Escaped, max_step);
  } else if (out.torsion && out.torsion->torsion) {
    out.total = HeightValue::make_exact(lo, Tag::TorsionCertified);
  } else {
    out.total = HeightValue::make_exact(lo, Tag::GoodReductionIntegral);
  }
  return out;
}

inline HeightValue global_height(const DrinfeldModule& phi, const RatFunc& x, int n_max = kDefaultNMax) {
  return global_height_breakdown(phi, x, n_max).total;
}

/// Height of sigma(x) for the module pushed through sigma, with coherent
/// degrees on the places of the target field.
inline HeightValue height_via_embedding(const DrinfeldModule& phi, const SubstitutionEmbedding& sigma, const RatFunc& x,
                                        int n_max = kDefaultNMax) {
  phi.require_monic();
  return global_height(phi.push_forward(sigma), sigma.apply(x), n_max);
}

struct LehmerBounds {
  Rational sharp;
  Rational weak;
  std::optional<Rational> lehper;  // absent when S is empty
  std::int64_t torsion_degree = 0;
};

inline LehmerBounds lehmer_bounds(const DrinfeldModule& phi) {
  const auto s = bad_reduction_set(phi);
  const std::uint32_t q = phi.q();
  const std::int64_t r = phi.r();
  const std::int64_t n = n_phi(phi);
  const std::int64_t sz = static_cast<std::int64_t>(s.size());
  LehmerBounds out;
  out.sharp = power(q, -(2 * r + r * r * n * sz));
  out.weak = power(q, -(r * (2 + (r * r + r) * sz)));
  out.torsion_degree = r * n * sz;
  if (!s.empty()) {
    Rational dmin = s.front().degree();
    for (const auto& v : s) dmin = std::min(dmin, v.degree());
    out.lehper = dmin * power(q, -(4 * r * (r + 1) * (r + 1) * sz + 3 * r));
  }
  return out;
}

/// Either x is constant/torsion, or some place carries a large local height.
struct T2Certificate {
  enum class Kind { ConstantOrTorsion, Witness };
  Kind kind = Kind::ConstantOrTorsion;
  std::optional<Poly> annihilator;  // for S nonempty
  std::optional<Place> place;
  Rational local_height;
  Rational bound;  // the threshold times d(v)
};

inline T2Certificate check_T2mwg(const DrinfeldModule& phi, const RatFunc& x, int n_max = kDefaultNMax) {
  phi.require_monic();
  const auto s = bad_reduction_set(phi);
  T2Certificate out;
  if (s.empty()) {
    if (x.is_constant()) return out;
    for (const auto& v : poles(phi.base(), x)) {
      HeightValue h = local_height(phi, v, x, n_max);
      if (h.exact && h.lo >= v.degree()) {
        out.kind = T2Certificate::Kind::Witness;
        out.place = v;
        out.local_height = h.lo;
        out.bound = v.degree();
        return out;
      }
    }
    throw Error("internal: non-constant point without a large local height");
  }
  HeightBreakdown hb = global_height_breakdown(phi, x, n_max);
  TorsionVerdict tv = hb.torsion ? *hb.torsion : is_torsion(phi, x, n_max);
  if (tv.torsion) {
    out.annihilator = tv.annihilator;
    return out;
  }
  const Rational sharp = lehmer_bounds(phi).sharp;
  for (const auto& [v, h] : hb.local) {
    const Rational bound = sharp * v.degree();
    if (h.exact && h.lo > bound) {
      out.kind = T2Certificate::Kind::Witness;
      out.place = v;
      out.local_height = h.lo;
      out.bound = bound;
      return out;
    }
  }
  throw BudgetExhausted("no local height certified above the bound within " + std::to_string(n_max) + " iterations");
}

}  // namespace drinfeld
