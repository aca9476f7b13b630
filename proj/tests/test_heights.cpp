#include <gtest/gtest.h>

#include <iostream>

#include "drinfeld/heights.hpp"
#include "fixtures.hpp"

using namespace drinfeld;
using namespace drinfeld::testing;

namespace {

Rational R(std::int64_t n, std::int64_t d = 1) { return Rational(n, d); }

/// -d(v) min(0, v(phi_{t^n} x)) / q^{rn}, by exact global iteration.
Rational limit_quotient(const DrinfeldModule& phi, const Place& v, const RatFunc& x, int n) {
  RatFunc y = x;
  for (int i = 0; i < n; ++i) y = phi.apply_t(y);
  if (y.is_zero()) return R(0);
  const std::int64_t vy = std::min<std::int64_t>(0, *v.valuation(y));
  return -v.degree() * Rational(vy) / Rational(big_pow(phi.q(), static_cast<std::int64_t>(phi.r()) * n));
}

std::vector<DrinfeldModule> modules() {
  return {carlitz(2),
          carlitz(3),
          module(2, {"t", "1/t", "1"}),
          module(3, {"t", "(t+1)/t", "1"}),
          module(2, {"t", "t^3+1", "1"}),
          module(3, {"t^2", "1/(t^2+1)", "1"}),
          module(5, {"t/(t+2)^2", "1"})};
}

/// Deepest iteration count whose exact iterates stay small.
int oracle_depth(const DrinfeldModule& phi) {
  const auto qr = big_pow(phi.q(), phi.r());
  if (qr <= 3) return 5;
  if (qr <= 5) return 4;
  return 3;
}

}  // namespace

TEST(Heights, CarlitzThreeExamples) {
  auto c3 = carlitz(3);
  auto k = c3.base();
  const Place inf = infinity_of(k);
  HeightValue h1 = local_height(c3, inf, k.parse("1"));
  ASSERT_TRUE(h1.exact);
  EXPECT_EQ(h1.lo, R(1, 3));
  EXPECT_EQ(h1.tag, HeightValue::Tag::Escaped);
  EXPECT_EQ(h1.escape_step, 1);
  for (int n = 1; n <= 5; ++n) EXPECT_EQ(limit_quotient(c3, inf, k.parse("1"), n), R(1, 3));
  for (int n = 0; n <= 5; ++n) EXPECT_EQ(limit_quotient(c3, inf, k.parse("t"), n), R(1));
  EXPECT_EQ(global_height(c3, k.parse("1")).value(), R(1, 3));
  EXPECT_EQ(global_height(c3, k.parse("t")).value(), R(1));
}

TEST(Heights, GoodPlacePoleMass) {
  auto c3 = carlitz(3);
  auto k = c3.base();
  HeightValue h = local_height(c3, Place::finite(parse_poly(k.fq, "t")), k.parse("1/t^2"));
  ASSERT_TRUE(h.exact);
  EXPECT_EQ(h.lo, R(2));
  auto tau = module(3, {"0", "1"});
  EXPECT_EQ(global_height(tau, k.parse("(t^2+1)/t^3")).value(), R(3));
}

TEST(Heights, PsiTwoTorsionIsZero) {
  auto psi2 = carlitz(2);
  auto k = psi2.base();
  HeightValue h = local_height(psi2, infinity_of(k), k.parse("t"));
  ASSERT_TRUE(h.exact);
  EXPECT_EQ(h.lo, R(0));
  EXPECT_EQ(h.tag, HeightValue::Tag::TorsionCertified);
  EXPECT_EQ(global_height(psi2, k.parse("t")).value(), R(0));
}

TEST(Heights, WeilHeight) {
  auto k = rational_field(7);
  EXPECT_EQ(weil_height(k.parse("t")), R(1));
  EXPECT_EQ(weil_height(k.parse("1/t^2")), R(2));
  EXPECT_EQ(weil_height(k.parse("5")), R(0));
}

TEST(Heights, LehmerBounds) {
  auto b3 = lehmer_bounds(carlitz(3));
  EXPECT_EQ(b3.sharp, power(3, -3));
  EXPECT_EQ(b3.weak, power(3, -4));
  ASSERT_TRUE(b3.lehper);
  EXPECT_EQ(*b3.lehper, power(3, -19));
  EXPECT_EQ(b3.torsion_degree, 1);
  auto b2 = lehmer_bounds(carlitz(2));
  EXPECT_EQ(b2.sharp, power(2, -4));
  EXPECT_EQ(b2.weak, power(2, -4));
  auto b0 = lehmer_bounds(module(3, {"0", "1"}));
  EXPECT_FALSE(b0.lehper);
  EXPECT_EQ(b0.torsion_degree, 0);
  for (const auto& phi : modules()) {
    auto b = lehmer_bounds(phi);
    EXPECT_GE(b.sharp, b.weak);
  }
}

TEST(Heights, T2Certificates) {
  auto c3 = carlitz(3);
  auto c = check_T2mwg(c3, c3.base().parse("1"));
  ASSERT_EQ(c.kind, T2Certificate::Kind::Witness);
  EXPECT_EQ(*c.place, infinity_of(c3.base()));
  EXPECT_EQ(c.local_height, R(1, 3));
  EXPECT_EQ(c.bound, R(1, 27));

  auto psi2 = carlitz(2);
  auto ct = check_T2mwg(psi2, psi2.base().parse("t"));
  ASSERT_EQ(ct.kind, T2Certificate::Kind::ConstantOrTorsion);
  EXPECT_EQ(*ct.annihilator, parse_poly(psi2.fq(), "t"));

  auto tau = module(2, {"0", "1"});
  auto cw = check_T2mwg(tau, tau.base().parse("t"));
  ASSERT_EQ(cw.kind, T2Certificate::Kind::Witness);
  EXPECT_EQ(*cw.place, infinity_of(tau.base()));
  EXPECT_EQ(cw.local_height, R(1));
  EXPECT_EQ(cw.bound, R(1));
  EXPECT_EQ(check_T2mwg(tau, tau.base().parse("1")).kind, T2Certificate::Kind::ConstantOrTorsion);
}

TEST(Heights, EmbeddingExamples) {
  auto c3 = carlitz(3);
  auto k = c3.base();
  SubstitutionEmbedding cube(RatFunc::parse(k.fq, "u^3", "u"));
  HeightValue ht = height_via_embedding(c3, cube, k.parse("t"));
  ASSERT_TRUE(ht.exact);
  EXPECT_EQ(ht.lo, R(1));
  EXPECT_EQ(ht.escape_step, 0);
  EXPECT_EQ(height_via_embedding(c3, cube, k.parse("1")).value(), R(1, 3));
  SubstitutionEmbedding id(RatFunc::parse(k.fq, "u", "u"));
  EXPECT_EQ(height_via_embedding(c3, id, k.parse("(t+1)/t")).value(), global_height(c3, k.parse("(t+1)/t")).value());
}

TEST(Heights, OracleAgreement) {
  Rng rng(31);
  int checked = 0;
  for (const auto& phi : modules()) {
    const int depth = oracle_depth(phi);
    std::vector<Place> places = bad_reduction_set(phi);
    for (int i = 0; i < 25; ++i) {
      RatFunc x = random_ratfunc(phi.fq(), 3, rng);
      if (x.is_zero()) continue;
      for (const auto& v : places) {
        HeightValue h = local_height(phi, v, x);
        if (!h.exact || h.tag != HeightValue::Tag::Escaped || h.escape_step > depth) continue;
        for (int n = h.escape_step; n <= depth; ++n) {
          EXPECT_EQ(h.lo, limit_quotient(phi, v, x, n)) << phi.to_string() << " x=" << x.to_string() << " n=" << n;
          ++checked;
        }
      }
    }
  }
  EXPECT_GT(checked, 200);
  std::cout << checked << " oracle comparisons\n";
}

TEST(Heights, IntervalIsSoundAndShrinks) {
  // With a tiny budget the interval must still bracket the exact value.
  Rng rng(32);
  for (const auto& phi : modules()) {
    for (int i = 0; i < 15; ++i) {
      RatFunc x = random_ratfunc(phi.fq(), 2, rng);
      for (const auto& v : bad_reduction_set(phi)) {
        HeightValue exact = local_height(phi, v, x);
        if (!exact.exact) continue;
        HeightValue h = local_height(phi, v, x, 1);
        EXPECT_LE(h.lo, exact.lo);
        EXPECT_GE(h.hi, exact.lo);
        if (!h.exact) {
          HeightValue h2 = local_height(phi, v, x, 2);
          EXPECT_LE(h2.hi - h2.lo, h.hi - h.lo);
        }
      }
    }
  }
}

TEST(Heights, SumFormulaConsistency) {
  // The global height is the sum of the local heights over every place
  // where a nonzero term can occur.
  Rng rng(33);
  for (const auto& phi : modules()) {
    for (int i = 0; i < 20; ++i) {
      RatFunc x = random_ratfunc(phi.fq(), 3, rng);
      auto hb = global_height_breakdown(phi, x);
      if (!hb.total.exact) continue;
      Rational sum(0);
      for (const auto& [v, h] : hb.local) sum += h.lo;
      EXPECT_EQ(sum, hb.total.lo);
      // Places outside S where x is integral contribute nothing.
      if (!x.is_zero()) {
        for (const auto& [v, e] : support(phi.base(), x)) {
          if (e > 0 && !std::binary_search(hb.local.begin(), hb.local.end(), std::make_pair(v, HeightValue{}),
                                           [](const auto& a, const auto& b) { return a.first < b.first; })) {
            EXPECT_EQ(local_height(phi, v, x).value(), R(0));
          }
        }
      }
    }
  }
}

TEST(Heights, Multiplicativity) {
  Rng rng(34);
  int checked = 0;
  for (const auto& phi : modules()) {
    if (big_pow(phi.q(), phi.r()) > 9) continue;
    for (int i = 0; i < 12; ++i) {
      RatFunc x = random_ratfunc(phi.fq(), 2, rng);
      Poly b = random_nonzero_poly(phi.fq(), 2, rng);
      HeightValue hx = global_height(phi, x);
      HeightValue hb = global_height(phi, phi.apply(b, x));
      if (!hx.exact || !hb.exact) continue;
      EXPECT_EQ(hb.lo, hx.lo * Rational(big_pow(phi.q(), phi.r() * b.degree())))
          << phi.to_string() << " x=" << x.to_string() << " b=" << b.to_string();
      ++checked;
    }
  }
  EXPECT_GT(checked, 30);
  std::cout << checked << " multiplicativity cases\n";
}

TEST(Heights, Ultrametric) {
  Rng rng(35);
  for (const auto& phi : modules()) {
    for (int i = 0; i < 15; ++i) {
      RatFunc x = random_ratfunc(phi.fq(), 2, rng), y = random_ratfunc(phi.fq(), 2, rng);
      HeightValue hx = global_height(phi, x), hy = global_height(phi, y), hs = global_height(phi, x + y);
      if (!hx.exact || !hy.exact || !hs.exact) continue;
      EXPECT_LE(hs.lo, hx.lo + hy.lo);
      for (const auto& v : bad_reduction_set(phi)) {
        HeightValue a = local_height(phi, v, x), b = local_height(phi, v, y), c = local_height(phi, v, x - y);
        if (a.exact && b.exact && c.exact) EXPECT_LE(c.lo, std::max(a.lo, b.lo));
      }
    }
  }
}

TEST(Heights, TorsionPointsHaveHeightZero) {
  for (const auto& phi : modules()) {
    for (const auto& x : torsion_enumerate(phi).elements) {
      HeightValue h = global_height(phi, x);
      ASSERT_TRUE(h.exact);
      EXPECT_EQ(h.lo, R(0));
    }
  }
}

TEST(Heights, CoherenceUnderSubstitution) {
  Rng rng(36);
  auto c3 = carlitz(3);
  auto k = c3.base();
  for (const char* img : {"u^2", "u^3", "u^2+u", "(u+1)/u", "1/(u^3+2)"}) {
    SubstitutionEmbedding sigma(RatFunc::parse(k.fq, img, "u"));
    for (int i = 0; i < 20; ++i) {
      RatFunc x = random_ratfunc(k.fq, 3, rng);
      HeightValue a = global_height(c3, x), b = height_via_embedding(c3, sigma, x);
      ASSERT_TRUE(a.exact && b.exact) << x.to_string();
      EXPECT_EQ(a.lo, b.lo) << img << " x=" << x.to_string();
    }
  }
}

TEST(Heights, LocalFloorOutsideNewtonResidues) {
  Rng rng(37);
  int checked = 0;
  for (const auto& phi : modules()) {
    const Rational qr(big_pow(phi.q(), phi.r()));
    for (const auto& v : bad_reduction_set(phi)) {
      auto rd = reduction_data(phi, v);
      for (int i = 0; i < 60; ++i) {
        RatFunc x = random_ratfunc(phi.fq(), 3, rng);
        if (x.is_zero() || *v.valuation(x) > 0) continue;
        const Rational a(*v.valuation(x));
        if (rd.in_P_R(a, v.angular_component(x))) continue;
        HeightValue h = local_height(phi, v, x);
        ASSERT_TRUE(h.exact);
        EXPECT_GE(h.lo, -*rd.M * v.degree() / qr);
        EXPECT_GT(h.lo, v.degree() / (qr * qr));
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 100);
  std::cout << checked << " escaping points\n";
}

TEST(Heights, ConstantModuleGap) {
  Rng rng(38);
  for (const auto& phi : {module(2, {"0", "1"}), module(3, {"1", "1"}), module(3, {"2", "0", "1"})}) {
    for (int i = 0; i < 40; ++i) {
      RatFunc x = random_ratfunc(phi.fq(), 3, rng);
      if (x.is_constant()) continue;
      EXPECT_GE(global_height(phi, x).value(), R(1));
    }
  }
}

TEST(Heights, RejectsBadInput) {
  auto k = rational_field(3);
  auto phi = DrinfeldModule::parse(k, {"t", "t"});
  EXPECT_THROW(global_height(phi, k.parse("1")), DomainError);
  EXPECT_THROW(local_height(carlitz(3), infinity_of(k), k.parse("1"), 0), InputError);
}
