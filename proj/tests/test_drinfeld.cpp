#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "drinfeld/module.hpp"

using namespace drinfeld;
using drinfeld::testing::carlitz;
using drinfeld::testing::module;
using drinfeld::testing::random_nonzero_poly;
using drinfeld::testing::random_poly;
using drinfeld::testing::random_ratfunc;

namespace {

Rational R(std::int64_t a, std::int64_t b = 1) { return make_rational(a, b); }

std::vector<Rational> Rs(std::initializer_list<std::pair<int, int>> xs) {
  std::vector<Rational> out;
  for (auto [a, b] : xs) out.push_back(R(a, b));
  return out;
}

void check_cardinality_bounds(const ReductionData& rd) {
  const BigInt qr = big_pow(rd.q, rd.r);
  EXPECT_LE(static_cast<int>(rd.P.size()), rd.N);
  for (const auto& a : rd.P) EXPECT_LE(BigInt(rd.R.at(a).size()), qr);
  EXPECT_LE(static_cast<int>(rd.Q.size()), 2 * (rd.r + 1));
  for (const auto& a : rd.Q) EXPECT_LT(BigInt(rd.R.at(a).size()), big_pow(rd.q, 2 * (rd.r + 1)));
  EXPECT_LE(rd.P1.size(), rd.P.size());
}

// A few modules with a spread of bad places used by the property tests.
std::vector<DrinfeldModule> sample_modules() {
  return {module(2, {"t", "1"}),           module(3, {"t", "1"}),           module(2, {"t", "1/t", "1"}),
          module(3, {"t", "(t+1)/t", "1"}), module(5, {"t", "t^2", "1"}),   module(3, {"1/t", "1"}),
          module(2, {"t", "t^3+1", "1"}),   module(3, {"t^2", "1/(t^2+1)", "1"}), module(2, {"t", "t", "1/t", "1"})};
}

}  // namespace

TEST(PhiOf, SpecExamples) {
  auto psi2 = module(2, {"t", "1"});
  auto k = psi2.base();
  EXPECT_EQ(psi2.phi_of(Poly::one(k.fq)), SkewPoly::identity(k.fq));
  EXPECT_EQ(psi2.phi_of(parse_poly(k.fq, "t^2+t")),
            SkewPoly(k.fq, {k.parse("t^2+t"), k.parse("t^2+t+1"), k.parse("1")}));
  auto c3 = carlitz(3);
  EXPECT_EQ(c3.phi_of(parse_poly(c3.fq(), "t^2")),
            SkewPoly(c3.fq(), {c3.base().parse("t^2"), c3.base().parse("t^3+t"), c3.base().parse("1")}));
  EXPECT_TRUE(c3.phi_of(Poly(c3.fq())).is_zero());
}

TEST(PhiOf, HomomorphismAndCommutativity) {
  Rng rng(50);
  for (const auto& phi : sample_modules()) {
    // Keep q^{r deg(b1 b2)} small: the coefficients of phi_{b1 b2} grow like that power.
    int d = 1;
    while (d < 3 && big_pow(phi.q(), 2 * phi.r() * (d + 1)) <= 6561) ++d;
    for (int i = 0; i < 6; ++i) {
      Poly b1 = random_poly(phi.fq(), d, rng), b2 = random_poly(phi.fq(), d, rng);
      SkewPoly f1 = phi.phi_of(b1), f2 = phi.phi_of(b2);
      EXPECT_EQ(phi.phi_of(b1 * b2), f1 * f2);
      EXPECT_EQ(phi.phi_of(b1 + b2), f1 + f2);
      EXPECT_EQ(f1 * f2, f2 * f1);
      RatFunc x = random_ratfunc(phi.fq(), 2, rng);
      EXPECT_EQ(phi.apply(b1, x), f1.eval(x));
    }
  }
}

// Coefficients of phi_b are integral outside S and the leading one is constant.
TEST(PhiOf, IntegralitySpread) {
  Rng rng(51);
  for (const auto& phi : sample_modules()) {
    auto s = bad_reduction_set(phi);
    for (int i = 0; i < 4; ++i) {
      Poly b = random_nonzero_poly(phi.fq(), 3, rng);
      SkewPoly fb = phi.phi_of(b);
      EXPECT_TRUE(fb.coeffs().back().is_constant());
      for (const auto& c : fb.coeffs()) {
        for (const auto& v : poles(phi.base(), c)) EXPECT_TRUE(std::find(s.begin(), s.end(), v) != s.end());
      }
    }
  }
}

TEST(BadReduction, SpecExamples) {
  auto c3 = carlitz(3);
  auto s = bad_reduction_set(c3);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_TRUE(s[0].is_infinite());
  EXPECT_TRUE(bad_reduction_set(module(3, {"0", "1"})).empty());
  auto s2 = bad_reduction_set(module(3, {"1/t", "1"}));
  ASSERT_EQ(s2.size(), 1u);
  EXPECT_EQ(s2[0], Place::finite(Poly::x(c3.fq())));
  EXPECT_THROW(bad_reduction_set(module(3, {"t", "t"})), DomainError);
}

TEST(ReductionData, Psi2AtInfinity) {
  auto psi2 = module(2, {"t", "1"});
  auto rd = reduction_data(psi2, infinity_of(psi2.base()));
  EXPECT_TRUE(rd.bad);
  EXPECT_EQ(*rd.M, R(-1));
  EXPECT_EQ(rd.T, R(1));
  EXPECT_EQ(rd.P, Rs({{-1, 1}, {0, 1}}));
  const Poly one = Poly::one(psi2.fq());
  EXPECT_EQ(rd.R.at(R(-1)), std::vector<Poly>{one});
  EXPECT_EQ(rd.R.at(R(0)), std::vector<Poly>{one});
  EXPECT_EQ(rd.P1, Rs({{1, 1}}));
  EXPECT_EQ(rd.R.at(R(1)), std::vector<Poly>{one});
  EXPECT_TRUE(rd.P2.empty());
  EXPECT_EQ(rd.Q, Rs({{-1, 1}, {0, 1}, {1, 1}}));
  EXPECT_EQ(rd.N, 2);
  check_cardinality_bounds(rd);
}

TEST(ReductionData, CarlitzAtInfinityAndGoodPlace) {
  auto c3 = carlitz(3);
  auto rd = reduction_data(c3, infinity_of(c3.base()));
  EXPECT_EQ(*rd.M, R(-1, 2));
  EXPECT_EQ(rd.P, Rs({{-1, 2}}));
  check_cardinality_bounds(rd);
  // At v_t every coefficient is integral: good reduction, M_v >= 0.
  auto good = reduction_data(c3, Place::finite(Poly::x(c3.fq())));
  EXPECT_FALSE(good.bad);
  EXPECT_GE(*good.M, 0);
  EXPECT_EQ(*good.M, R(1, 2));
}

TEST(ReductionData, NewtonPolygon) {
  // v(a_0) = -2, v(a_1) = 1, v(a_2) = 0 at v_inf for q = 3: hull (1,-2),(9,0).
  auto phi = module(3, {"t^2", "1/t", "1"});
  auto rd = reduction_data(phi, infinity_of(phi.base()));
  ASSERT_EQ(rd.newton.size(), 1u);
  EXPECT_EQ(rd.newton[0].i, 0);
  EXPECT_EQ(rd.newton[0].j, 2);
  EXPECT_EQ(rd.newton[0].slope, R(1, 4));
  EXPECT_EQ(*rd.M, R(-1, 4));
  EXPECT_EQ(rd.P, Rs({{-1, 4}}));
}

// M_v < 0 iff v in S, T_v > 0 on S, cardinality bounds, on sampled places.
TEST(ReductionData, InvariantsOnSampledPlaces) {
  for (const auto& phi : sample_modules()) {
    auto s = bad_reduction_set(phi);
    std::vector<Place> places{infinity_of(phi.base())};
    for (int d = 1; d <= 2; ++d) {
      for (auto& p : monic_irreducibles(phi.fq(), d)) places.push_back(Place::finite_unchecked(p));
    }
    for (const auto& v : places) {
      auto rd = reduction_data(phi, v);
      const bool in_s = std::find(s.begin(), s.end(), v) != s.end();
      EXPECT_EQ(in_s, rd.M && *rd.M < 0) << phi.to_string() << " at " << v.to_string();
      EXPECT_EQ(in_s, rd.bad);
      if (in_s) EXPECT_GT(rd.T, 0);
      check_cardinality_bounds(rd);
    }
  }
}

// If v(phi_t(x)) exceeds the naive minimum then (v(x), ac(x)) lies in P_v x R_v.
TEST(ReductionData, CancellationOnlyInNewtonResidues) {
  Rng rng(60);
  int fired = 0;
  for (const auto& phi : sample_modules()) {
    for (const auto& v : bad_reduction_set(phi)) {
      auto rd = reduction_data(phi, v);
      for (int i = 0; i < 150; ++i) {
        RatFunc x = random_ratfunc(phi.fq(), 3, rng);
        // Bias towards the critical valuations by adding structured points.
        if (i % 3 == 0) x = v.uniformizer().pow(-static_cast<std::int64_t>(rng.below(3))).scaled(1 + rng.below(phi.q() - 1));
        if (x.is_zero()) continue;
        Val vx = v.valuation(x);
        if (*vx > 0) continue;
        std::optional<std::int64_t> naive;
        for (int j = 0; j <= phi.r(); ++j) {
          Val vj = v.valuation(phi.coeff(j) * x.frobenius_q(j));
          if (vj && (!naive || *vj < *naive)) naive = *vj;
        }
        Val vphi = v.valuation(phi.apply_t(x));
        if (val_less(Val(naive), vphi)) {
          ++fired;
          EXPECT_TRUE(rd.in_P_R(Rational(*vx), v.angular_component(x))) << phi.to_string() << " x=" << x.to_string();
        }
      }
    }
  }
  EXPECT_GT(fired, 0);
}

TEST(Monicize, SpecExamples) {
  auto c3 = carlitz(3);
  auto m = monicize(c3);
  EXPECT_EQ(m.module.coeffs(), c3.coeffs());
  EXPECT_TRUE(m.gamma.is_one());

  auto phi = module(3, {"t", "t^-2"});
  auto m2 = monicize(phi);
  EXPECT_EQ(m2.module.coeffs(), c3.coeffs());
  EXPECT_EQ(m2.gamma, c3.base().parse("t"));

  EXPECT_THROW(monicize(module(3, {"t", "t"})), DomainError);
  EXPECT_THROW(monicize(module(3, {"t", "2*t^2"})), DomainError);
}

TEST(ModularTrdeg, SpecExamples) {
  EXPECT_EQ(modular_trdeg(carlitz(3)), 1);
  EXPECT_EQ(modular_trdeg(module(3, {"0", "1"})), 0);
  EXPECT_EQ(modular_trdeg(module(3, {"t", "t^-2"})), 1);
  EXPECT_EQ(modular_trdeg(module(3, {"1", "t^2", "t^8"})), 0);
  EXPECT_EQ(modular_trdeg(module(3, {"1", "t", "1"})), 1);
}

// Conjugating by random gamma leaves the modular transcendence degree fixed.
TEST(ModularTrdeg, ConjugationInvariance) {
  Rng rng(70);
  std::vector<DrinfeldModule> mods = sample_modules();
  mods.push_back(module(3, {"0", "1"}));
  mods.push_back(module(2, {"1", "1", "1"}));
  mods.push_back(module(3, {"2", "0", "1"}));
  for (const auto& phi : mods) {
    for (int i = 0; i < 5; ++i) {
      RatFunc gamma = random_ratfunc(phi.fq(), 2, rng);
      if (gamma.is_zero()) continue;
      std::vector<RatFunc> b;
      for (int j = 0; j <= phi.r(); ++j) {
        b.push_back(phi.coeff(j) * gamma.pow(static_cast<std::int64_t>(big_pow(phi.q(), j) - 1)));
      }
      EXPECT_EQ(modular_trdeg(DrinfeldModule(phi.base(), b)), modular_trdeg(phi));
    }
  }
}
