#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "drinfeld/error.hpp"
#include "drinfeld/heights.hpp"
#include "drinfeld/linalg.hpp"
#include "drinfeld/local.hpp"
#include "drinfeld/module.hpp"
#include "drinfeld/torsion.hpp"

namespace drinfeld {

/// K^{1/p^n} realized as F_q(u) through t -> u^{p^n}.
struct InsepLevel {
  int n = 0;
  SubstitutionEmbedding sigma;
  DrinfeldModule module;  // phi with coefficients rewritten in u

  InsepLevel(const DrinfeldModule& phi, int level, const std::string& var = "u")
      : n(level), sigma(make_sigma(phi, level, var)), module(phi.push_forward(sigma)) {}

  const FunctionField& field() const { return module.base(); }

 private:
  static SubstitutionEmbedding make_sigma(const DrinfeldModule& phi, int level, const std::string& var) {
    if (level < 0) throw InputError("inseparability level must be nonnegative");
    const BigInt pn = big_pow(phi.fq()->p(), level);
    if (pn > BigInt(1) << 20) throw BudgetExhausted("inseparability level too large");
    RatFunc img(Poly::monomial(phi.fq(), 1, static_cast<std::int64_t>(pn)));
    return SubstitutionEmbedding(std::move(img), phi.base().var, var);
  }
};

/// Global height of y in F_q(u) = K^{1/p^n}, normalized relative to K.
inline HeightValue insep_height(const DrinfeldModule& phi, int n, const RatFunc& y, int n_max = kDefaultNMax) {
  phi.require_monic();
  return global_height(InsepLevel(phi, n).module, y, n_max);
}

struct DichotomyReport {
  enum class Branch { One, Two };
  Branch branch = Branch::Two;
  // Branch one
  std::optional<Place> place;
  Rational local_height;
  Rational threshold;
  // Branch two
  Poly b;
  std::vector<std::pair<Place, Val>> valuations;  // v(phi_b x), or a lower bound above T_v
  bool valuations_exact = true;
  std::vector<std::pair<Place, Rational>> t_values;
  std::int64_t degree_bound = 0;
};

/// Threshold -d(v) M_v / q^{4r(r+1)^2|S| + 2r} of the first branch.
inline Rational key_dichotomy_threshold(const DrinfeldModule& psi, const Place& v, std::size_t s_size) {
  const std::int64_t r = psi.r();
  const std::int64_t e = 4 * r * (r + 1) * (r + 1) * static_cast<std::int64_t>(s_size) + 2 * r;
  auto m = m_value(psi, v);
  if (!m) throw DomainError("M_v is infinite");
  return -v.degree() * *m * power(psi.q(), -e);
}

/// Certifies one branch of the dichotomy for x at level n: a place with a
/// large local height, or a low-degree b pushing every bad valuation above T_v.
inline DichotomyReport key_dichotomy_check(const DrinfeldModule& phi, int n, const RatFunc& x, int n_max = kDefaultNMax) {
  phi.require_monic();
  const DrinfeldModule psi = InsepLevel(phi, n).module;
  const FieldRef& f = psi.fq();
  const auto s = bad_reduction_set(psi);
  const std::int64_t r = psi.r();
  DichotomyReport out;
  out.degree_bound = 4 * (r + 1) * (r + 1) * static_cast<std::int64_t>(s.size());
  for (const auto& v : s) out.t_values.emplace_back(v, reduction_data(psi, v).T);
  if (x.is_zero()) {
    out.b = Poly::one(f);
    for (const auto& v : s) out.valuations.emplace_back(v, Val());
    return out;
  }
  if (s.empty()) throw DomainError("the key dichotomy needs a place of bad reduction");
  const int steps = static_cast<int>(out.degree_bound);

  auto branch_one = [&](const Place& v, const Rational& h) {
    const Rational th = key_dichotomy_threshold(psi, v, s.size());
    if (h < th) throw Error("internal: escaping local height below the dichotomy threshold");
    out.branch = DichotomyReport::Branch::One;
    out.place = v;
    out.local_height = h;
    out.threshold = th;
  };

  std::vector<LocalOrbit> orbits;
  std::vector<std::int64_t> targets;
  for (const auto& [v, t] : out.t_values) {
    const std::int64_t target = static_cast<std::int64_t>(floor_of(t)) + 1;
    LocalOrbit orbit = local_orbit(psi, v, x, steps, escape_floor(psi, v), target);
    if (orbit.escaped_at) {
      const int m = *orbit.escaped_at;
      branch_one(v, -v.degree() * Rational(orbit.ys[m].e) * power(psi.q(), -r * m));
      return out;
    }
    orbits.push_back(std::move(orbit));
    targets.push_back(target);
  }
  // Linear conditions v(sum b_j y_j) >= floor(T_v) + 1 at every v in S.
  std::vector<Completion> comps;
  std::vector<std::int64_t> bases;
  std::size_t dim = 0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    comps.emplace_back(s[k]);
    bases.push_back(std::min<std::int64_t>(static_cast<std::int64_t>(ceil_of(escape_floor(psi, s[k]))), targets[k]));
    dim += static_cast<std::size_t>((targets[k] - bases[k]) * comps.back().place().residue_degree());
  }
  IncrementalSpan span(*f, std::max<std::size_t>(dim, 1));
  for (int j = 0; j <= steps; ++j) {
    Vec row;
    for (std::size_t k = 0; k < s.size(); ++k) {
      Vec c = comps[k].coords(orbits[k].ys[j], bases[k], targets[k] - bases[k]);
      row.insert(row.end(), c.begin(), c.end());
    }
    if (row.empty()) row.assign(1, 0);
    auto dep = span.add(row);
    if (!dep) continue;
    std::vector<Fq> b(static_cast<std::size_t>(j) + 1, 0);
    b[j] = 1;
    for (int i = 0; i < j; ++i) b[i] = f->neg((*dep)[i]);
    out.b = Poly(f, std::move(b));
    for (std::size_t k = 0; k < s.size(); ++k) {
      LocalElem acc = comps[k].zero(targets[k]);
      for (int i = 0; i <= j; ++i) acc = comps[k].add(acc, comps[k].scale(orbits[k].ys[i], out.b.coeff(i)));
      acc = comps[k].truncate(acc, targets[k]);
      if (!acc.is_zero()) throw Error("internal: dichotomy polynomial fails its valuation check");
    }
    // Exact valuations when phi_b(x) is cheap, else the certified lower bound.
    std::optional<RatFunc> y;
    if (big_pow(psi.q(), r * j) <= 81) y = psi.apply(out.b, x);
    out.valuations_exact = y.has_value();
    for (std::size_t k = 0; k < s.size(); ++k) {
      out.valuations.emplace_back(s[k], y ? s[k].valuation(*y) : Val(targets[k]));
      if (y && !val_less(Val(targets[k] - 1), out.valuations.back().second)) {
        throw Error("internal: dichotomy polynomial fails its exact valuation check");
      }
    }
    out.branch = DichotomyReport::Branch::Two;
    return out;
  }
  for (const auto& v : s) {
    HeightValue h = local_height(psi, v, x, n_max);
    if (h.exact && h.lo >= key_dichotomy_threshold(psi, v, s.size()) && h.lo > 0) {
      branch_one(v, h.lo);
      return out;
    }
  }
  throw BudgetExhausted("neither branch of the dichotomy certified");
}

struct LehperReport {
  bool torsion = false;
  Poly annihilator;
  HeightValue height;
  Rational bound;
  Rational margin;  // height - bound
  bool pass = false;
};

/// Checks the uniform lower bound on K^{1/p^n} for a non-isotrivial module.
inline LehperReport lehper_check(const DrinfeldModule& phi, int n, const RatFunc& x, int n_max = kDefaultNMax) {
  phi.require_monic();
  if (modular_trdeg(phi) != 1) throw DomainError("module is isotrivial: the uniform bound needs modular transcendence degree 1");
  LehperReport out;
  out.bound = *lehmer_bounds(phi).lehper;
  const DrinfeldModule psi = InsepLevel(phi, n).module;
  HeightBreakdown hb = global_height_breakdown(psi, x, n_max);
  TorsionVerdict tv = hb.torsion ? *hb.torsion : is_torsion(psi, x, n_max);
  out.height = hb.total;
  if (tv.torsion) {
    out.torsion = true;
    out.annihilator = tv.annihilator;
    out.pass = true;
    return out;
  }
  if (!hb.total.exact && hb.total.lo <= out.bound) {
    throw BudgetExhausted("height interval " + hb.total.to_string() + " does not clear the bound");
  }
  out.margin = hb.total.lo - out.bound;
  out.pass = hb.total.lo > out.bound;
  return out;
}

}  // namespace drinfeld
