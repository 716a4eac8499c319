#include "hamext/catalog.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

namespace hamext {
namespace {

constexpr int kQ = 0;
constexpr int kU = 1;

Coeff q() { return Coeff::var(kQ); }
Coeff u() { return Coeff::var(kU); }
Coeff P(Param p) { return Coeff::param(p); }

TEST(Ttw, ParameterMap) {
  const ModelSpec s = ttw_model(1, 1, Coeff(1), Coeff(2), P(Param::omega), false);
  EXPECT_EQ(s.parameters.at("c1"), Coeff::ratio(3, 2));
  EXPECT_EQ(s.parameters.at("c2"), Coeff::ratio(1, 2));
  const ModelSpec t = ttw_model(3, 2, Coeff(1), Coeff(2), P(Param::omega), false);
  EXPECT_EQ(t.parameters.at("c1"), Coeff(3) * Coeff::ratio(4, 18));
  EXPECT_FALSE(s.K.has_value());
}

TEST(Ttw, ProfileAndDegree) {
  for (auto [m, n] : {std::pair{1, 1}, {2, 1}, {1, 2}, {3, 2}}) {
    const ModelSpec s = ttw_model(m, n);
    EXPECT_EQ(s.profile.m, 2 * m);
    EXPECT_EQ(s.profile.n, n);
    EXPECT_EQ(s.profile.gamma, u().inverse());
    ASSERT_TRUE(s.K.has_value());
    EXPECT_FALSE(s.K->odd_branch);
    EXPECT_EQ(s.K->K.degree(), 2 * m + 2 * n - 1) << m << "/" << n;
  }
  EXPECT_EQ(ttw_model(1, 1).K->K.degree(), 3);
  EXPECT_THROW(ttw_model(2, 2), std::invalid_argument);
  EXPECT_THROW(ttw_model(0, 1), std::invalid_argument);
}

TEST(Ttw, ModifiedHCarriesOmegaUSquared) {
  const ModelSpec s = ttw_model(1, 1, P(Param::alpha1), P(Param::alpha2), P(Param::omega), false);
  const PPoly plain = build_extended_H(s.profile, s.seed.L());
  EXPECT_EQ(s.H - plain, PPoly::constant(s.H.space_ptr(), P(Param::omega) * u() * u()));
}

TEST(Ttw, PlainExtensionCommutes) {
  for (auto [m, n] : {std::pair{1, 1}, {2, 1}, {1, 2}, {3, 1}, {3, 2}}) {
    const ModelSpec s = ttw_model_c(m, n, P(Param::c1), P(Param::c2), Coeff(0), false);
    const PPoly H = build_extended_H(s.profile, s.seed.L());
    EXPECT_TRUE(poisson_bracket(H, build_K(s.profile, s.seed)).is_zero()) << m << "/" << n;
  }
}

TEST(Cage, DisplayedHamiltonianAtOneOne) {
  const ModelSpec s = cage_model(1, 1, P(Param::L0), P(Param::b), P(Param::omega), Coeff(1), false);
  const auto& e = s.H.space_ptr();
  const PPoly expect = PPoly::momentum(e, kU, 2).scaled(Coeff::ratio(1, 2)) +
                       PPoly::momentum(e, kQ, 2).scaled(Coeff::ratio(1, 2)) +
                       PPoly::constant(e, P(Param::L0) * (q() * q() * Coeff::ratio(1, 4) + u() * u()) +
                                              P(Param::b) / (q() * q()) + P(Param::omega) / (u() * u()));
  EXPECT_EQ(s.H, expect);
}

TEST(Cage, OddDispatch) {
  const ModelSpec s = cage_model(1, 1);
  EXPECT_TRUE(s.K->odd_branch);
  EXPECT_EQ(s.K->effective.m, 2);
  EXPECT_EQ(s.K->effective.n, 2);
  const ModelSpec t = cage_model(3, 2);
  EXPECT_TRUE(t.K->odd_branch);
  EXPECT_EQ(t.K->effective.m, 6);
  EXPECT_EQ(t.K->effective.n, 4);
  EXPECT_EQ(t.K->K.degree(), 13);
  EXPECT_EQ(cage_model(4, 3).K->K.degree(), 4 + 2 * 3 - 1);
}

TEST(Cage, AnisotropicOscillatorLimit) {
  const int m = 3, n = 2;
  const ModelSpec s = cage_model(m, n, P(Param::L0), Coeff(0), Coeff(0), Coeff(1), false);
  const auto& e = s.H.space_ptr();
  const Coeff k(reduced(m * m, n * n));
  const PPoly expect = PPoly::momentum(e, kU, 2).scaled(Coeff::ratio(1, 2)) +
                       PPoly::momentum(e, kQ, 2).scaled(k * Coeff::ratio(1, 2)) +
                       PPoly::constant(e, k * P(Param::L0) * (q() * q() * Coeff::ratio(1, 4) + u() * u()));
  EXPECT_EQ(s.H, expect);
  // In x = (n/m) q the potential reads L0 m^2/n^2 (m^2 x^2/(4 n^2) + u^2).
  EXPECT_EQ(s.coordinate_maps.front(), "x = (2/3)*q");
}

TEST(Harmonic, Builds) {
  const ModelSpec s = harmonic_model(2, 1);
  EXPECT_TRUE(poisson_bracket(s.H, s.K->K).is_zero());
}

TEST(Catalog, Names) {
  std::vector<std::string> names;
  for (const auto& e : catalog_entries()) names.push_back(e.name);
  EXPECT_EQ(names, (std::vector<std::string>{"ttw", "cage", "harmonic"}));
}

TEST(Golden, HandValue) {
  const ModelSpec s = ttw_model(1, 1, Coeff(0), Coeff(0), Coeff(0), false);
  const PPoly g = golden_K21(s.H.space_ptr(), Coeff(0), Coeff(0), Coeff(0));
  Valuation<double> v(17);
  PhasePoint<double> x{{std::numbers::pi / 2, 1.0}, {1.0, 1.0}};
  EXPECT_NEAR(evaluate_ppoly(g, x, v), -3.0, 1e-14);
}

TEST(Golden, OmegaContribution) {
  const ModelSpec s = ttw_model(1, 1, P(Param::alpha1), P(Param::alpha2), P(Param::omega), false);
  const PPoly g = golden_K21(s.H.space_ptr());
  const PPoly dw = g - golden_K21(s.H.space_ptr(), P(Param::alpha1), P(Param::alpha2), Coeff(0));
  EXPECT_EQ(dw, PPoly::momentum(s.H.space_ptr(), kQ).scaled(Coeff(2) * P(Param::omega) * u() * u() *
                                                             Coeff::fn(kQ, Fn::sin)));
}

TEST(Golden, GeneratedIntegralMatchesWithConstantOne) {
  const ModelSpec s = ttw_model(1, 1);
  EXPECT_EQ(s.K->K, golden_K21(s.K->K.space_ptr()));
}

TEST(PolarMap, Basics) {
  const PhasePoint<double> p{{1.0, std::numbers::pi / 4}, {0.0, 0.0}};
  const auto c = polar_cartesian_map(p, MapDirection::polar_to_cartesian);
  EXPECT_NEAR(c.q[0], std::sqrt(2.0) / 2, 1e-15);
  EXPECT_NEAR(c.q[1], std::sqrt(2.0) / 2, 1e-15);
  EXPECT_THROW(polar_cartesian_map({{0.0, 1.0}, {1.0, 1.0}}, MapDirection::polar_to_cartesian), std::domain_error);
  EXPECT_THROW(polar_cartesian_map({{0.0, 0.0}, {1.0, 1.0}}, MapDirection::cartesian_to_polar), std::domain_error);
}

TEST(PolarMap, CanonicalOneFormAndRoundTrip) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pos(0.3, 1.2), mom(-1, 1);
  for (int i = 0; i < 50; ++i) {
    const PhasePoint<double> c{{pos(rng), pos(rng)}, {mom(rng), mom(rng)}};
    const auto p = polar_cartesian_map(c, MapDirection::cartesian_to_polar);
    EXPECT_NEAR(p.p[0], (c.q[0] * c.p[0] + c.q[1] * c.p[1]) / p.q[0], 1e-14);
    // p_x dx + p_y dy = p_r dr + p_theta dtheta along a random direction.
    const double dx = mom(rng), dy = mom(rng);
    const double r = p.q[0];
    const double dr = (c.q[0] * dx + c.q[1] * dy) / r;
    const double dth = (c.q[0] * dy - c.q[1] * dx) / (r * r);
    EXPECT_NEAR(c.p[0] * dx + c.p[1] * dy, p.p[0] * dr + p.p[1] * dth, 1e-13);
    const auto back = polar_cartesian_map(p, MapDirection::polar_to_cartesian);
    for (int k = 0; k < 2; ++k) {
      EXPECT_NEAR(back.q[k], c.q[k], 1e-14);
      EXPECT_NEAR(back.p[k], c.p[k], 1e-14);
    }
  }
}

}  // namespace
}  // namespace hamext
