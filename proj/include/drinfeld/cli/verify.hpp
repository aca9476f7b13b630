#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "drinfeld/heights.hpp"
#include "drinfeld/module.hpp"
#include "drinfeld/perfect.hpp"
#include "drinfeld/rng.hpp"
#include "drinfeld/torsion.hpp"

namespace drinfeld::verify {

struct Violation {
  std::int64_t size = 0;  // Weil height of the offending point; smaller is simpler
  std::string description;
};

struct PropertyResult {
  std::string name;
  int cases = 0;
  int violations = 0;
  std::optional<Violation> smallest;
};

struct Report {
  std::vector<PropertyResult> properties;

  bool ok() const {
    return std::all_of(properties.begin(), properties.end(), [](const auto& p) { return p.violations == 0; });
  }
  int total_cases() const {
    int n = 0;
    for (const auto& p : properties) n += p.cases;
    return n;
  }
};

/// Sets the M_v sign fault for the lifetime of the guard.
class FaultInjection {
 public:
  explicit FaultInjection(bool on) : saved_(drinfeld::detail::fault_flip_m()) { drinfeld::detail::fault_flip_m() = on; }
  ~FaultInjection() { drinfeld::detail::fault_flip_m() = saved_; }
  FaultInjection(const FaultInjection&) = delete;
  FaultInjection& operator=(const FaultInjection&) = delete;

 private:
  bool saved_;
};

namespace detail {

inline FunctionField field(std::uint32_t p) { return FunctionField{FiniteField::create(p), "t", 1}; }

inline DrinfeldModule mod(std::uint32_t p, const std::vector<std::string>& c) { return DrinfeldModule::parse(field(p), c); }

inline Poly rand_poly(const FieldRef& f, int deg, Rng& rng) {
  std::vector<Fq> c(static_cast<std::size_t>(deg) + 1);
  for (auto& x : c) x = static_cast<Fq>(rng.below(f->q()));
  return Poly(f, std::move(c));
}

inline Poly rand_nonzero_poly(const FieldRef& f, int deg, Rng& rng) {
  for (;;) {
    Poly p = rand_poly(f, deg, rng);
    if (!p.is_zero()) return p;
  }
}

inline RatFunc rand_ratfunc(const FieldRef& f, int h, Rng& rng) {
  return RatFunc::make(rand_poly(f, static_cast<int>(rng.below(h + 1)), rng),
                       rand_nonzero_poly(f, static_cast<int>(rng.below(h + 1)), rng));
}

/// y * pi^{k} with k chosen so that v(result) = target; y nonzero.
inline RatFunc with_valuation(const Place& v, const RatFunc& y, std::int64_t target) {
  const std::int64_t k = target - *v.valuation(y);
  return y * v.uniformizer().pow(k);
}

template <class T>
const T& pick(const std::vector<T>& xs, Rng& rng) {
  return xs[rng.below(xs.size())];
}

inline std::string show(const DrinfeldModule& phi, const RatFunc& x, const std::string& extra = "") {
  std::string s = phi.to_string() + " over F_" + std::to_string(phi.q()) + ", x = " + x.to_string(phi.base().var);
  return extra.empty() ? s : s + ", " + extra;
}

class Runner {
 public:
  Runner(std::uint64_t seed, int count) : seed_(seed), count_(count) {}

  /// Runs `body` count times; body returns a violation description or nullopt.
  void run(const std::string& name, const std::function<std::optional<Violation>(Rng&)>& body) {
    PropertyResult res{name, 0, 0, std::nullopt};
    Rng rng(seed_ ^ std::hash<std::string>{}(name));
    for (int i = 0; i < count_; ++i) {
      ++res.cases;
      std::optional<Violation> v;
      try {
        v = body(rng);
      } catch (const Error& e) {
        v = Violation{1 << 20, std::string("exception: ") + e.what()};
      }
      if (!v) continue;
      ++res.violations;
      if (!res.smallest || v->size < res.smallest->size) res.smallest = v;
    }
    report_.properties.push_back(std::move(res));
  }

  Report take() { return std::move(report_); }

 private:
  std::uint64_t seed_;
  int count_;
  Report report_;
};

}  // namespace detail

/// Modules with bad places at infinity and at finite places, over F_2, F_3, F_5.
inline std::vector<DrinfeldModule> default_corpus() {
  using detail::mod;
  return {mod(2, {"t", "1"}),        mod(3, {"t", "1"}),           mod(5, {"t", "1"}),
          mod(2, {"t", "1/t", "1"}), mod(3, {"t", "(t+1)/t", "1"}), mod(2, {"t", "t^3+1", "1"}),
          mod(3, {"t^2", "1/(t^2+1)", "1"}), mod(5, {"t/(t+2)^2", "1"})};
}

inline std::vector<DrinfeldModule> isotrivial_corpus() {
  using detail::mod;
  return {mod(2, {"0", "1"}), mod(3, {"1", "1"}), mod(3, {"2", "0", "1"}), mod(2, {"1", "0", "1"})};
}

/// The full invariant suite; deterministic in (seed, count).
inline Report run(std::uint64_t seed, int count) {
  using detail::show;
  using std::nullopt;
  detail::Runner runner(seed, count);
  const auto corpus = default_corpus();
  const auto iso = isotrivial_corpus();
  std::vector<DrinfeldModule> cheap;
  for (const auto& phi : corpus) {
    if (big_pow(phi.q(), phi.r()) <= 9) cheap.push_back(phi);
  }

  std::vector<std::optional<TorsionModule>> torsion_cache(cheap.size());
  auto torsion_of = [&](std::size_t i) -> const TorsionModule& {
    if (!torsion_cache[i]) torsion_cache[i] = torsion_enumerate(cheap[i]);
    return *torsion_cache[i];
  };

  runner.run("sum formula", [&](Rng& rng) -> std::optional<Violation> {
    const auto& phi = detail::pick(corpus, rng);
    RatFunc x = detail::rand_ratfunc(phi.fq(), 4, rng);
    if (x.is_zero()) return nullopt;
    Rational sum(0);
    for (const auto& [v, e] : support(phi.base(), x)) sum += v.degree() * Rational(e);
    if (sum == 0) return nullopt;
    return Violation{x.weil_degree(), show(phi, x, "sum of d(v) v(x) = " + to_string(sum))};
  });

  runner.run("homomorphism", [&](Rng& rng) -> std::optional<Violation> {
    const auto& phi = detail::pick(corpus, rng);
    Poly a = detail::rand_poly(phi.fq(), static_cast<int>(rng.below(3)), rng);
    Poly b = detail::rand_poly(phi.fq(), static_cast<int>(rng.below(3)), rng);
    if (phi.phi_of(a * b) == phi.phi_of(a) * phi.phi_of(b) && phi.phi_of(a + b) == phi.phi_of(a) + phi.phi_of(b)) {
      return nullopt;
    }
    return Violation{std::max<std::int64_t>(a.degree(), b.degree()),
                     phi.to_string() + ": phi is not a ring map on a = " + a.to_string() + ", b = " + b.to_string()};
  });

  auto bad_place = [](const DrinfeldModule& phi, Rng& rng) {
    const auto s = bad_reduction_set(phi);
    return s[rng.below(s.size())];
  };

  runner.run("cancellation dichotomy", [&](Rng& rng) -> std::optional<Violation> {
    const auto& phi = detail::pick(corpus, rng);
    const Place v = bad_place(phi, rng);
    RatFunc y = detail::rand_ratfunc(phi.fq(), 3, rng);
    if (y.is_zero()) return nullopt;
    RatFunc x = detail::with_valuation(v, y, -static_cast<std::int64_t>(rng.below(4)));
    Val naive;
    for (int i = 0; i <= phi.r(); ++i) {
      if (phi.coeff(i).is_zero()) continue;
      Val t = v.valuation(phi.coeff(i) * x.frobenius_q(i));
      if (val_less(t, naive)) naive = t;
    }
    Val actual = v.valuation(phi.apply_t(x));
    if (!val_less(naive, actual)) return nullopt;
    auto rd = reduction_data(phi, v);
    const Rational a(*v.valuation(x));
    if (rd.in_P_R(a, v.angular_component(x))) return nullopt;
    return Violation{x.weil_degree(), show(phi, x, "cancellation at " + v.to_string() + " outside P_v x R_v")};
  });

  runner.run("local floor dichotomy", [&](Rng& rng) -> std::optional<Violation> {
    const auto& phi = detail::pick(corpus, rng);
    const Place v = bad_place(phi, rng);
    RatFunc y = detail::rand_ratfunc(phi.fq(), 3, rng);
    if (y.is_zero()) return nullopt;
    RatFunc x = detail::with_valuation(v, y, -static_cast<std::int64_t>(rng.below(4)));
    auto rd = reduction_data(phi, v);
    const Rational a(*v.valuation(x));
    if (rd.in_P_R(a, v.angular_component(x))) return nullopt;
    const Rational qr(big_pow(phi.q(), phi.r()));
    HeightValue h = local_height(phi, v, x);
    if (h.exact && h.lo >= -*rd.M * v.degree() / qr && h.lo > v.degree() / (qr * qr)) return nullopt;
    return Violation{x.weil_degree(), show(phi, x, "local height " + h.to_string() + " at " + v.to_string() + " below the floor")};
  });

  runner.run("another dichotomy", [&](Rng& rng) -> std::optional<Violation> {
    const auto& base = detail::pick(corpus, rng);
    const int n = static_cast<int>(rng.below(2));
    const DrinfeldModule phi = InsepLevel(base, n).module;
    const Place v = bad_place(phi, rng);
    auto rd = reduction_data(phi, v);
    RatFunc y = detail::rand_ratfunc(phi.fq(), 3, rng);
    if (y.is_zero()) return nullopt;
    const std::int64_t top = static_cast<std::int64_t>(floor_of(rd.T));
    RatFunc x = detail::with_valuation(v, y, top - static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(top) + 4)));
    const Rational a(*v.valuation(x));
    if (rd.in_Q_R(a, v.angular_component(x))) return nullopt;
    HeightValue h = local_height(phi, v, x);
    const Rational qr(big_pow(phi.q(), phi.r()));
    if (h.exact && h.lo >= -v.degree() * *rd.M / (qr * qr)) return nullopt;
    return Violation{x.weil_degree(), show(phi, x, "level " + std::to_string(n) + ", local height " + h.to_string() + " at " +
                                                       v.to_string("u") + " below the bound")};
  });

  runner.run("coherence", [&](Rng& rng) -> std::optional<Violation> {
    const auto& phi = detail::pick(cheap, rng);
    static const char* images[] = {"u^2", "u^3", "u^2+u", "(u+1)/u"};
    const std::string img = images[rng.below(4)];
    SubstitutionEmbedding sigma(RatFunc::parse(phi.fq(), img, "u"));
    RatFunc x = detail::rand_ratfunc(phi.fq(), 3, rng);
    for (const auto& v : bad_reduction_set(phi)) {
      std::int64_t ef = 0;
      for (const auto& w : extend_places(sigma, v)) ef += w.e * w.f;
      if (ef != sigma.degree()) return Violation{0, phi.to_string() + ": sum of e f over " + v.to_string() + " is not [L:K] for " + img};
    }
    HeightValue a = global_height(phi, x), b = height_via_embedding(phi, sigma, x);
    // Intervals arise for bounded non-torsion orbits; both routes must then give the same bounds.
    if (a.exact == b.exact && a.lo == b.lo && a.hi == b.hi) return nullopt;
    return Violation{x.weil_degree(), show(phi, x, "t -> " + img + ": " + a.to_string() + " vs " + b.to_string())};
  });

  runner.run("multiplicativity", [&](Rng& rng) -> std::optional<Violation> {
    const auto& phi = detail::pick(cheap, rng);
    RatFunc x = detail::rand_ratfunc(phi.fq(), 2, rng);
    Poly b = detail::rand_nonzero_poly(phi.fq(), static_cast<int>(rng.below(3)), rng);
    HeightValue hx = global_height(phi, x), hb = global_height(phi, phi.apply(b, x));
    if (!hx.exact || !hb.exact) return nullopt;
    if (hb.lo == hx.lo * Rational(big_pow(phi.q(), phi.r() * b.degree()))) return nullopt;
    return Violation{x.weil_degree(), show(phi, x, "b = " + b.to_string() + ": " + hb.to_string() + " vs " + hx.to_string())};
  });

  runner.run("oracle agreement", [&](Rng& rng) -> std::optional<Violation> {
    const auto& phi = detail::pick(cheap, rng);
    const Place v = bad_place(phi, rng);
    RatFunc x = detail::rand_ratfunc(phi.fq(), 3, rng);
    HeightValue h = local_height(phi, v, x);
    const int depth = big_pow(phi.q(), phi.r()) <= 3 ? 5 : 3;
    if (!h.exact || h.tag != HeightValue::Tag::Escaped || h.escape_step > depth) return nullopt;
    RatFunc y = x;
    for (int i = 0; i < depth; ++i) y = phi.apply_t(y);
    const std::int64_t vy = std::min<std::int64_t>(0, *v.valuation(y));
    const Rational want = -v.degree() * Rational(vy) * power(phi.q(), -static_cast<std::int64_t>(phi.r()) * depth);
    if (want == h.lo) return nullopt;
    return Violation{x.weil_degree(), show(phi, x, "at " + v.to_string() + " got " + h.to_string() + ", iteration gives " + to_string(want))};
  });

  runner.run("torsion equivalence", [&](Rng& rng) -> std::optional<Violation> {
    const std::size_t idx = rng.below(cheap.size());
    const auto& phi = cheap[idx];
    const auto& tm = torsion_of(idx);
    RatFunc x = rng.coin() ? detail::pick(tm.elements, rng) : detail::rand_ratfunc(phi.fq(), 3, rng);
    const auto& ab = tm.bound;
    auto verdict = is_torsion(phi, x);
    const bool killed = big_pow(phi.q(), phi.r() * ab.b_lcm.degree()) <= 1000
                            ? phi.apply(ab.b_lcm, x).is_zero()
                            : std::binary_search(tm.elements.begin(), tm.elements.end(), x);
    bool ok = verdict.torsion == killed;
    if (verdict.torsion) {
      ok = ok && phi.apply(verdict.annihilator, x).is_zero() && (ab.b_lcm % verdict.annihilator).is_zero();
    }
    if (ok) return nullopt;
    return Violation{x.weil_degree(), show(phi, x, "is_torsion says " + std::string(verdict.torsion ? "torsion" : "non-torsion") +
                                                       ", b_lcm kill says " + (killed ? "yes" : "no"))};
  });

  runner.run("isotrivial decay", [&](Rng& rng) -> std::optional<Violation> {
    const auto& phi = detail::pick(iso, rng);
    RatFunc x = detail::rand_ratfunc(phi.fq(), 3, rng);
    if (x.is_constant()) return nullopt;
    const int n = static_cast<int>(rng.below(4));
    const Rational want = global_height(phi, x).value() * power(phi.fq()->p(), -n);
    HeightValue got = insep_height(phi, n, x);
    if (got.exact && got.lo == want) return nullopt;
    return Violation{x.weil_degree(), show(phi, x, "level " + std::to_string(n) + ": " + got.to_string() + " vs " + to_string(want))};
  });

  runner.run("lehper floor", [&](Rng& rng) -> std::optional<Violation> {
    static const DrinfeldModule c3 = detail::mod(3, {"t", "1"});
    const int n = static_cast<int>(rng.below(3));
    RatFunc y = detail::rand_ratfunc(c3.fq(), 3, rng);
    auto rep = lehper_check(c3, n, y);
    if (rep.torsion || (rep.height.exact && rep.pass)) return nullopt;
    return Violation{y.weil_degree(), show(c3, y, "level " + std::to_string(n) + ": height " + rep.height.to_string() +
                                                      " not above " + to_string(rep.bound))};
  });

  runner.run("constant-module gap", [&](Rng& rng) -> std::optional<Violation> {
    const auto& phi = detail::pick(iso, rng);
    RatFunc x = detail::rand_ratfunc(phi.fq(), 3, rng);
    if (x.is_constant()) return nullopt;
    HeightValue h = global_height(phi, x);
    if (h.exact && h.lo >= 1) return nullopt;
    return Violation{x.weil_degree(), show(phi, x, "height " + h.to_string() + " < 1")};
  });

  runner.run("cardinality bounds", [&](Rng& rng) -> std::optional<Violation> {
    const auto& base = detail::pick(corpus, rng);
    const DrinfeldModule phi = InsepLevel(base, static_cast<int>(rng.below(2))).module;
    const Place v = bad_place(phi, rng);
    auto rd = reduction_data(phi, v);
    const BigInt qr = big_pow(phi.q(), phi.r());
    bool ok = static_cast<int>(rd.P.size()) <= rd.N && static_cast<int>(rd.Q.size()) <= 2 * (phi.r() + 1);
    for (const auto& a : rd.P) ok = ok && BigInt(rd.R[a].size()) <= qr;
    for (const auto& a : rd.Q) ok = ok && BigInt(rd.R[a].size()) < qr * qr * big_pow(phi.q(), 2);
    if (ok) return nullopt;
    return Violation{0, phi.to_string() + " at " + v.to_string("u") + ": cardinality bound fails"};
  });

  return runner.take();
}

}  // namespace drinfeld::verify
