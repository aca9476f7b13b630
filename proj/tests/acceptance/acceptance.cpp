// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Reference values come from direct iteration and enumeration here, not from
// the library routines under test.

#include <algorithm>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "drinfeld/cli/verify.hpp"
#include "drinfeld/perfect.hpp"
#include "fixtures.hpp"

using namespace drinfeld;
using namespace drinfeld::testing;

namespace {

struct Check {
  std::ostringstream why;
  bool ok = true;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) why << what;
    ok = ok && cond;
  }
};

Rational R(std::int64_t n, std::int64_t d = 1) { return Rational(n, d); }

/// -d(v) * min(0, v(phi_{t^n}(x))) / q^{rn}, by plain iteration.
Rational limit_quotient(const DrinfeldModule& phi, const Place& v, const RatFunc& x, int n) {
  RatFunc y = x;
  for (int i = 0; i < n; ++i) y = phi.apply_t(y);
  const Val vy = v.valuation(y);
  const std::int64_t low = vy ? std::min<std::int64_t>(0, *vy) : 0;
  return -v.degree() * R(low) / Rational(big_pow(phi.q(), phi.r() * n));
}

bool contains(const std::vector<RatFunc>& xs, const RatFunc& x) { return std::find(xs.begin(), xs.end(), x) != xs.end(); }

void psi2_example(Check& c) {
  auto psi = carlitz(2);
  const auto& k = psi.base();
  const auto s = bad_reduction_set(psi);
  c.expect(s.size() == 1 && s[0] == infinity_of(k), "S is not {v_inf}");
  c.expect(annihilator_bound(psi).D == 2, "r N |S| != 2");
  const RatFunc t = k.parse("t"), t1 = k.parse("t+1"), one = k.parse("1");
  c.expect(psi.apply(parse_poly(psi.fq(), "t"), t).is_zero(), "phi_t(t) != 0");
  c.expect(psi.apply(parse_poly(psi.fq(), "t+1"), t1).is_zero(), "phi_{t+1}(t+1) != 0");
  c.expect(contains(kernel_in_K(psi, parse_poly(psi.fq(), "t")), t), "t missing from ker phi_t");
  c.expect(contains(kernel_in_K(psi, parse_poly(psi.fq(), "t+1")), t1), "t+1 missing from ker phi_{t+1}");
  // Every polynomial of degree 1, evaluated directly on 1.
  for (const auto& b : all_polys_below(psi.fq(), 2)) {
    if (b.degree() == 1) c.expect(!psi.apply(b, one).is_zero(), "degree-1 annihilator of 1: " + b.to_string());
  }
  c.expect(psi.apply(parse_poly(psi.fq(), "t^2+t"), one).is_zero(), "phi_{t^2+t}(1) != 0");
  auto verdict = is_torsion(psi, one);
  c.expect(verdict.torsion && verdict.annihilator == parse_poly(psi.fq(), "t^2+t"),
           "is_torsion(1) does not give t^2+t");
}

void psi_p_example(Check& c) {
  for (int p : {3, 5}) {
    auto psi = carlitz(p);
    const FieldRef f = psi.fq();
    SubstitutionEmbedding sigma(RatFunc::parse(f, "-u^" + std::to_string(p - 1), "u"));
    const DrinfeldModule phi = psi.push_forward(sigma);
    const std::string tag = "p=" + std::to_string(p) + ": ";
    c.expect(bad_reduction_set(phi).size() == 1, tag + "|S| != 1");
    TorsionModule tm = torsion_enumerate(phi);
    c.expect(tm.bound.D == 1, tag + "D != 1");
    std::vector<RatFunc> expected;
    for (Fq a = 0; a < static_cast<Fq>(p); ++a) expected.push_back(RatFunc::x(f) * RatFunc::constant(f, a));
    c.expect(tm.elements.size() == static_cast<std::size_t>(p), tag + "wrong number of torsion points");
    for (const auto& x : expected) c.expect(contains(tm.elements, x), tag + "missing " + x.to_string("u"));
    for (const auto& x : tm.elements) c.expect(phi.apply(Poly::x(f), x).is_zero(), tag + "phi_t does not kill " + x.to_string("u"));
  }
}

void carlitz3_heights(Check& c) {
  auto c3 = carlitz(3);
  const auto& k = c3.base();
  const Place inf = infinity_of(k);
  const std::pair<std::string, Rational> cases[] = {{"1", R(1, 3)}, {"t", R(1)}};
  for (const auto& [text, want] : cases) {
    const RatFunc x = k.parse(text);
    HeightValue h = global_height(c3, x);
    c.expect(h.exact && h.lo == want, "h(" + text + ") = " + h.to_string());
    for (int n = 1; n <= 5; ++n) c.expect(limit_quotient(c3, inf, x, n) == want, "limit quotient disagrees for " + text);
  }
  TorsionModule tm = torsion_enumerate(c3);
  c.expect(tm.elements.size() == 1 && tm.elements[0].is_zero(), "torsion module is not {0}");
  const Rational bound = power(3, -3) * inf.degree();
  c.expect(lehmer_bounds(c3).sharp == bound, "sharp bound is not 3^-3");
  T2Certificate cert = check_T2mwg(c3, k.parse("1"));
  c.expect(cert.kind == T2Certificate::Kind::Witness && cert.local_height == R(1, 3) && cert.bound == bound && R(1, 3) > bound,
           "no witness 1/3 > 1/27 for x = 1");
}

void coherence(Check& c) {
  Rng rng(20240602);
  auto c3 = carlitz(3);
  const FieldRef f = c3.fq();
  int tested = 0;
  for (const char* img : {"u^2", "u^3"}) {
    SubstitutionEmbedding sigma(RatFunc::parse(f, img, "u"));
    for (int i = 0; i < 100; ++i) {
      RatFunc x = random_ratfunc(f, 3, rng);
      HeightValue a = global_height(c3, x), b = height_via_embedding(c3, sigma, x);
      c.expect(a.exact && b.exact && a.lo == b.lo, x.to_string() + " under " + img + ": " + a.to_string() + " vs " + b.to_string());
      std::vector<Place> places = bad_reduction_set(c3);
      for (const auto& [P, m] : factor(x.den()).factors) places.push_back(Place::finite(P));
      for (const auto& v : places) {
        std::int64_t ef = 0;
        for (const auto& w : extend_places(sigma, v)) ef += w.e * w.f;
        c.expect(ef == sigma.degree(), "sum of e f at " + v.to_string() + " under " + img);
      }
      ++tested;
    }
  }
  c.expect(tested == 200, "case count");
}

void perfect_floor(Check& c) {
  auto c3 = carlitz(3);
  InsepLevel lvl(c3, 1);
  const RatFunc u = RatFunc::x(c3.fq());
  const Place w = infinity_of(lvl.field());
  // By hand: phi_t(u) = u^3 u + u^3, v_inf = -4, and d(w) = 1/3 at level one.
  c.expect(lvl.module.apply_t(u) == RatFunc::parse(c3.fq(), "u^4+u^3", "u"), "phi_t(u) != u^4+u^3");
  for (int n = 1; n <= 4; ++n) c.expect(limit_quotient(lvl.module, w, u, n) == R(4, 9), "limit quotient for u is not 4/9");
  HeightValue h = insep_height(c3, 1, u);
  const Rational bound = power(3, -19);
  c.expect(lehmer_bounds(c3).lehper && *lehmer_bounds(c3).lehper == bound, "lehper bound is not 3^-19");
  c.expect(h.exact && h.lo == R(4, 9) && h.lo > bound, "h(t^{1/3}) = " + h.to_string());
  Rng rng(20240603);
  int nontorsion = 0;
  while (nontorsion < 200) {
    const int n = static_cast<int>(rng.below(3));
    RatFunc y = random_ratfunc(c3.fq(), 3, rng);
    LehperReport rep = lehper_check(c3, n, y);
    if (rep.torsion) continue;
    ++nontorsion;
    c.expect(rep.height.exact && rep.height.lo > bound && rep.pass, "level " + std::to_string(n) + " y = " + y.to_string("u"));
  }
}

void sharpness_decay(Check& c) {
  auto tau = module(2, {"0", "1"});
  const RatFunc u = RatFunc::x(tau.fq());
  for (int n = 0; n <= 3; ++n) {
    const Rational want = power(2, -n);
    InsepLevel lvl(tau, n);
    const Place w = infinity_of(lvl.field());
    for (int k = 0; k <= 4; ++k) c.expect(limit_quotient(lvl.module, w, u, k) == want, "iteration oracle at n = " + std::to_string(n));
    HeightValue h = insep_height(tau, n, u);
    c.expect(h.exact && h.lo == want, "n = " + std::to_string(n) + ": " + h.to_string());
  }
}

void property_suites(Check& c) {
  verify::Report rep = verify::run(20240601, 500);
  const char* required[] = {"sum formula", "multiplicativity", "cancellation dichotomy", "local floor dichotomy",
                            "another dichotomy", "torsion equivalence", "constant-module gap"};
  for (const char* name : required) {
    auto it = std::find_if(rep.properties.begin(), rep.properties.end(), [&](const auto& p) { return p.name == name; });
    c.expect(it != rep.properties.end() && it->cases == 500, std::string("property missing: ") + name);
  }
  for (const auto& p : rep.properties) {
    c.expect(p.violations == 0, p.name + ": " + (p.smallest ? p.smallest->description : std::string("violations")));
  }
}

void cardinality_bounds(Check& c) {
  std::vector<DrinfeldModule> mods = verify::default_corpus();
  for (auto& m : verify::isotrivial_corpus()) mods.push_back(m);
  mods.push_back(module(3, {"t", "(t+1)/t", "1"}));
  int checked = 0;
  for (const auto& base : mods) {
    std::vector<DrinfeldModule> variants;
    for (int n = 0; n <= 2; ++n) variants.push_back(InsepLevel(base, n).module);
    for (const char* img : {"u^2", "u^3+u"}) variants.push_back(base.push_forward(SubstitutionEmbedding(RatFunc::parse(base.fq(), img, "u"))));
    for (const auto& phi : variants) {
      const BigInt qr = big_pow(phi.q(), phi.r());
      for (const auto& v : bad_reduction_set(phi)) {
        auto rd = reduction_data(phi, v);
        const std::string at = phi.to_string() + " at " + v.to_string("u");
        c.expect(static_cast<std::int64_t>(rd.P.size()) <= n_phi(phi), at + ": |P_v| > N_phi");
        c.expect(static_cast<int>(rd.Q.size()) <= 2 * (phi.r() + 1), at + ": |Q_v| > 2(r+1)");
        for (const auto& a : rd.P) c.expect(BigInt(rd.R[a].size()) <= qr, at + ": |R_v| > q^r on P_v");
        for (const auto& a : rd.Q) c.expect(BigInt(rd.R[a].size()) < qr * qr * big_pow(phi.q(), 2), at + ": |R_v| >= q^{2(r+1)}");
        ++checked;
      }
    }
  }
  c.expect(checked > 50, "too few places");
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Check&)>> criteria[] = {
      {"psi_2 torsion example", psi2_example},
      {"psi_p over F_p(u), p = 3, 5", psi_p_example},
      {"Carlitz q=3 heights and Lehmer certificate", carlitz3_heights},
      {"coherence under t -> u^2, u^3", coherence},
      {"perfect-closure floor", perfect_floor},
      {"sharpness decay for tau over F_2", sharpness_decay},
      {"500-case property suites", property_suites},
      {"cardinality bounds", cardinality_bounds},
  };
  int failed = 0, i = 0;
  for (const auto& [name, run] : criteria) {
    Check c;
    try {
      run(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    std::cout << (c.ok ? "PASS" : "FAIL") << " " << ++i << " " << name;
    if (!c.ok) std::cout << ": " << c.why.str();
    std::cout << "\n";
    failed += c.ok ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
