#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "drinfeld/skew.hpp"

using namespace drinfeld;
using drinfeld::testing::random_ratfunc;

namespace {

SkewPoly skew(const FunctionField& k, const std::vector<std::string>& c) {
  std::vector<RatFunc> v;
  for (auto& s : c) v.push_back(k.parse(s));
  return SkewPoly(k.fq, v);
}

SkewPoly random_skew(const FieldRef& f, Rng& rng) {
  std::vector<RatFunc> c;
  const int n = 1 + static_cast<int>(rng.below(3));
  for (int i = 0; i < n; ++i) c.push_back(random_ratfunc(f, 2, rng));
  return SkewPoly(f, c);
}

}  // namespace

TEST(SkewMul, SpecExamples) {
  auto k = drinfeld::testing::rational_field(3);
  SkewPoly tau = SkewPoly::tau(k.fq);
  SkewPoly t0 = skew(k, {"t"});
  EXPECT_EQ(tau * t0, skew(k, {"0", "t^3"}));
  SkewPoly phi = skew(k, {"t", "1"});
  EXPECT_EQ(phi * phi, skew(k, {"t^2", "t^3+t", "1"}));
  EXPECT_EQ(SkewPoly::identity(k.fq) * phi, phi);
  EXPECT_EQ(phi * SkewPoly::identity(k.fq), phi);
}

TEST(SkewEval, SpecExamples) {
  auto k2 = drinfeld::testing::rational_field(2);
  EXPECT_TRUE(skew(k2, {"t", "1"}).eval(k2.parse("t")).is_zero());
  auto k3 = drinfeld::testing::rational_field(3);
  EXPECT_EQ(skew(k3, {"t", "1"}).eval(k3.parse("1")), k3.parse("t+1"));
  EXPECT_TRUE(skew(k3, {"t", "1"}).eval(RatFunc(k3.fq)).is_zero());
}

TEST(SkewDegree, SpecExamples) {
  auto k = drinfeld::testing::rational_field(3);
  SkewPoly phi = skew(k, {"t", "1"});
  EXPECT_EQ(phi.tau_degree(), 1);
  EXPECT_EQ(phi.degree(), 3);
  EXPECT_EQ((phi * phi).tau_degree(), 2);
  EXPECT_EQ((phi * phi).degree(), 9);
  EXPECT_EQ(SkewPoly::identity(k.fq).tau_degree(), 0);
  EXPECT_EQ(SkewPoly::identity(k.fq).degree(), 1);
  EXPECT_THROW(SkewPoly(k.fq).tau_degree(), DomainError);
}

TEST(SkewRing, LawsOnRandomElements) {
  Rng rng(5);
  for (int p : {2, 3}) {
    auto k = drinfeld::testing::rational_field(p);
    for (int i = 0; i < 30; ++i) {
      SkewPoly f = random_skew(k.fq, rng), g = random_skew(k.fq, rng), h = random_skew(k.fq, rng);
      EXPECT_EQ((f * g) * h, f * (g * h));
      EXPECT_EQ(f * (g + h), f * g + f * h);
      EXPECT_EQ((g + h) * f, g * f + h * f);
      if (!f.is_zero() && !g.is_zero()) EXPECT_EQ((f * g).tau_degree(), f.tau_degree() + g.tau_degree());
      RatFunc y = random_ratfunc(k.fq, 2, rng), z = random_ratfunc(k.fq, 2, rng);
      EXPECT_EQ((f * g).eval(y), f.eval(g.eval(y)));
      EXPECT_EQ(f.eval(y + z), f.eval(y) + f.eval(z));
      EXPECT_EQ(f.eval(y.scaled(p - 1)), f.eval(y).scaled(p - 1));
    }
  }
}
