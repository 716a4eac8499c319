#include "hamext/expr.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "hamext/evaluate.hpp"

namespace hamext {
namespace {

constexpr int kQ = 0;
constexpr int kU = 1;

Coeff q() { return Coeff::var(kQ); }
Coeff u() { return Coeff::var(kU); }
Coeff sinq() { return Coeff::fn(kQ, Fn::sin); }
Coeff cosq() { return Coeff::fn(kQ, Fn::cos); }
Coeff c1() { return Coeff::param(Param::c1); }
Coeff c2() { return Coeff::param(Param::c2); }

Coeff ttw_potential() { return (c1() + c2() * cosq()) / sinq().pow(2); }

// Random members of the ring built from a small grammar. Denominators are
// restricted to factors that stay away from zero on [0.3, 1.2].
Coeff random_coeff(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 9 : 5);
  std::uniform_int_distribution<int> small(-3, 3);
  switch (pick(rng)) {
    case 0: return Coeff(Scalar(small(rng), 1 + (rng() % 3)));
    case 1: return q();
    case 2: return u();
    case 3: return sinq();
    case 4: return cosq();
    case 5: return rng() % 2 ? c1() : Coeff::fn(kU, Fn::sinh);
    case 6: return random_coeff(rng, depth - 1) + random_coeff(rng, depth - 1);
    case 7: return random_coeff(rng, depth - 1) * random_coeff(rng, depth - 1);
    case 8: {
      const int which = static_cast<int>(rng() % 4);
      const Coeff den = which == 0   ? sinq()
                        : which == 1 ? u()
                        : which == 2 ? Coeff(1) + q() * q()
                                     : Coeff::fn(kU, Fn::cosh);
      return random_coeff(rng, depth - 1) / den;
    }
    default: return random_coeff(rng, depth - 1) - random_coeff(rng, depth - 1);
  }
}

template <class T>
Valuation<T> point(double qv, double uv, int digits = 50) {
  Valuation<T> v(digits);
  v.set_position(kQ, v.real(qv));
  v.set_position(kU, v.real(uv));
  v.set_param(Param::c1, v.real(Scalar(3, 2)));
  v.set_param(Param::c2, v.real(Scalar(1, 2)));
  return v;
}

TEST(ExprRing, SinSquaredIsAMonomial) {
  const Coeff s2 = sinq() * sinq();
  ASSERT_EQ(s2.numerator().size(), 1u);
  EXPECT_EQ(s2.numerator().terms()[0].mono.e[gen_index(kQ, Fn::sin)], 2);
  EXPECT_EQ(to_string(s2), "sin(q)^2");
}

TEST(ExprRing, CosSquaredReducesByPythagoras) {
  const Coeff c2q = cosq().pow(2);
  EXPECT_EQ(c2q, Coeff(1) - sinq().pow(2));
  EXPECT_EQ(to_string(c2q), "-sin(q)^2 + 1");
}

TEST(ExprRing, HyperbolicSquaredReduces) {
  const Coeff ch = Coeff::fn(kU, Fn::cosh);
  const Coeff sh = Coeff::fn(kU, Fn::sinh);
  EXPECT_TRUE(is_zero(ch * ch - sh * sh - Coeff(1)));
}

TEST(ExprRing, AddingZeroKeepsCanonicalForm) {
  const Coeff v = ttw_potential();
  EXPECT_EQ(v + Coeff(0), v);
  EXPECT_EQ(to_string(v), "(c2*cos(q) + c1)/(sin(q)^2)");
}

TEST(ExprRing, UnreducedFractionsAreReduced) {
  EXPECT_EQ(Coeff(Scalar(6, 4)), Coeff(Scalar(3, 2)));
  EXPECT_EQ(Coeff(Scalar(2, 2)) * q(), q());
  EXPECT_TRUE((Coeff(Scalar(4, 8)) - Coeff::ratio(1, 2)).is_zero());
  EXPECT_EQ(to_string(q().pow(2) * Coeff(Scalar(6, 4))), "3/2*q^2");
}

TEST(ExprRing, DivisionByZeroThrows) {
  EXPECT_THROW(sinq() / Coeff(0), DivisionByZero);
  EXPECT_THROW(Coeff(0).inverse(), DivisionByZero);
  EXPECT_THROW(c1() / (sinq().pow(2) + cosq().pow(2) - Coeff(1)), DivisionByZero);
}

TEST(ExprRing, ZeroTests) {
  EXPECT_TRUE(is_zero(sinq().pow(2) + cosq().pow(2) - Coeff(1)));
  EXPECT_TRUE(is_zero(c1() / u() - c1() / u()));
  EXPECT_FALSE(is_zero(sinq() - q()));
}

TEST(ExprRing, SimpleDerivatives) {
  EXPECT_EQ(differentiate(sinq(), kQ), cosq());
  EXPECT_EQ(differentiate(Coeff(1) / u(), kU), -(Coeff(1) / u().pow(2)));
  EXPECT_TRUE(is_zero(differentiate(sinq(), kU)));
  EXPECT_EQ(differentiate(Coeff::fn(kU, Fn::cosh), kU), Coeff::fn(kU, Fn::sinh));
}

TEST(ExprRing, TtwPotentialDerivativeMatchesClosedForm) {
  const Coeff dv = differentiate(ttw_potential(), kQ);
  const Coeff expected =
      (-c2() * sinq().pow(2) - Coeff(2) * cosq() * (c1() + c2() * cosq())) / sinq().pow(3);
  EXPECT_TRUE(is_zero(dv - expected));
}

TEST(ExprRing, TtwPotentialDerivativeMatchesFiniteDifferences) {
  // Central differences at 50 digits: truncation error ~ h^2 = 1e-30.
  const Coeff v = ttw_potential();
  const Coeff dv = differentiate(v, kQ);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(0.3, 1.2);
  const Scalar h(mpz_class(1), mpz_class("1000000000000000"));
  for (int i = 0; i < 50; ++i) {
    const double qv = dist(rng);
    const double uv = dist(rng);
    auto at = [&](const Scalar& shift) {
      auto val = point<BigFloat>(qv, uv);
      val.set_position(kQ, val.real(qv) + val.real(shift));
      return evaluate(v, val);
    };
    const BigFloat fd = (at(h) - at(-h)) / BigFloat(Scalar(2) * h, 200);
    const BigFloat exact = evaluate(dv, point<BigFloat>(qv, uv));
    EXPECT_LT((abs(fd - exact) / abs(exact)).to_double(), 1e-8);
  }
}

TEST(ExprRing, Evaluate) {
  const double half_pi = std::numbers::pi / 2;
  EXPECT_NEAR(evaluate(sinq(), point<double>(half_pi, 1.0)), 1.0, 1e-15);
  EXPECT_NEAR(evaluate(Coeff(1) / u().pow(2), point<double>(1.0, 2.0)), 0.25, 1e-15);
  Valuation<BigFloat> v(60);
  v.set_position(kQ, BigFloat::pi(v.bits()) / BigFloat(2.0, v.bits()));
  v.set_param(Param::c1, v.real(Scalar(3, 2)));
  v.set_param(Param::c2, v.real(Scalar(1, 2)));
  const BigFloat val = evaluate(ttw_potential(), v);
  EXPECT_LT(abs(val - v.real(1.5)).to_double(), 1e-55);
}

TEST(ExprRing, EvaluateRejectsPoles) {
  auto v = point<double>(0.0, 1.0);
  EXPECT_THROW(evaluate(ttw_potential(), v), SampleRejected);
  EXPECT_THROW(evaluate(Coeff(1) / u(), point<double>(0.5, 0.0)), SampleRejected);
}

TEST(ExprRing, MissingParameterIsAnError) {
  Valuation<double> v;
  v.set_position(kQ, 0.5);
  EXPECT_THROW(evaluate(Coeff::param(Param::omega) * sinq(), v), std::invalid_argument);
}

TEST(ExprRing, AtomDenominators) {
  const Coeff f = Coeff(1) / (Coeff(1) + q() * q());
  const Coeff df = differentiate(f, kQ);
  EXPECT_TRUE(is_zero(df + Coeff(2) * q() / (Coeff(1) + q() * q()).pow(2)));
  const Coeff tan2 = sinq().pow(2) / cosq().pow(2);
  EXPECT_TRUE(is_zero(differentiate(tan2, kQ) - Coeff(2) * sinq() / cosq().pow(3)));
  // cos u / cos u cancels through the cos atom.
  EXPECT_EQ(Coeff::fn(kU, Fn::cos) / Coeff::fn(kU, Fn::cos), Coeff(1));
}

TEST(ExprRing, CompactionCancelsExactFactors) {
  const Coeff f = (q() * q() - Coeff(1)) / (q() - Coeff(1));
  ASSERT_FALSE(f.atoms().empty());
  const Coeff g = compact(f);
  EXPECT_TRUE(g.atoms().empty());
  EXPECT_EQ(g, q() + Coeff(1));
  EXPECT_TRUE(is_zero(g - f));
}

TEST(ExprRing, ParametersInDenominators) {
  const Coeff a = Coeff::param(Param::A);
  const Coeff w = Coeff::param(Param::omega) / (a * a * u() * u());
  EXPECT_EQ(to_string(w), "(omega*u^-2)/(A^2)");
  EXPECT_EQ(w * a * a, Coeff::param(Param::omega) / (u() * u()));
}

class ExprProperties : public ::testing::TestWithParam<int> {};

TEST_P(ExprProperties, RingAndDerivationLaws) {
  std::mt19937_64 rng(1000 + GetParam());
  const Coeff a = random_coeff(rng, 3);
  const Coeff b = random_coeff(rng, 3);
  const Coeff c = random_coeff(rng, 2);
  EXPECT_TRUE(is_zero(a * b - b * a));
  EXPECT_TRUE(is_zero((a + b) - (b + a)));
  EXPECT_TRUE(is_zero(a * (b + c) - a * b - a * c));
  for (int slot : {kQ, kU}) {
    const Coeff leibniz = differentiate(a * b, slot) - differentiate(a, slot) * b -
                          a * differentiate(b, slot);
    EXPECT_TRUE(is_zero(leibniz)) << to_string(leibniz);
  }
  if (a.atoms().empty() && b.atoms().empty() && c.atoms().empty()) {
    // Unique representation: construction order does not matter.
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ((a * b) * c, a * (b * c));
  }
}

TEST_P(ExprProperties, DerivativeMatchesFiniteDifferences) {
  std::mt19937_64 rng(5000 + GetParam());
  const Coeff a = random_coeff(rng, 3);
  std::uniform_real_distribution<double> dist(0.3, 1.2);
  const double qv = dist(rng);
  const double uv = dist(rng);
  const double h = 1e-5;
  for (int slot : {kQ, kU}) {
    auto at = [&](double dq, double du) { return evaluate(a, point<double>(qv + dq, uv + du)); };
    const double fd = slot == kQ ? (at(h, 0) - at(-h, 0)) / (2 * h) : (at(0, h) - at(0, -h)) / (2 * h);
    const double exact = evaluate(differentiate(a, slot), point<double>(qv, uv));
    EXPECT_LE(std::abs(fd - exact), 1e-6 * std::max(1.0, std::abs(exact))) << to_string(a);
  }
}

INSTANTIATE_TEST_SUITE_P(Randomized, ExprProperties, ::testing::Range(0, 40));

}  // namespace
}  // namespace hamext
