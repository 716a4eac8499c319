#include "hamext/dynamics.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

namespace hamext {
namespace {

SpacePtr line() { return PhaseSpace::base(PositionVar{"q", "p", GeneratorKind::linear}); }

PPoly free_particle() { return PPoly::momentum(line(), 0, 2).scaled(Coeff::ratio(1, 2)); }

PPoly oscillator(const Coeff& k) {
  const auto s = line();
  return PPoly::momentum(s, 0, 2).scaled(Coeff::ratio(1, 2)) + PPoly::constant(s, k * Coeff::var(0) * Coeff::var(0));
}

TrajectoryConfig config(std::vector<double> q, std::vector<double> p, double T, double tol, double stride = 0.5) {
  TrajectoryConfig c;
  c.initial = {std::move(q), std::move(p)};
  c.t_end = T;
  c.rtol = c.atol = tol;
  c.stride = stride;
  return c;
}

ParamValues ttw_values(double a1 = 1.0) {
  return {{Param::alpha1, Scalar(a1)}, {Param::alpha2, Scalar(2)}, {Param::omega, reduced(7, 10)}};
}

std::vector<std::pair<std::string, PPoly>> ttw_invariants(const ModelSpec& s) {
  const auto e = s.H.space_ptr();
  return {{"H", s.H}, {"K", s.K->K}, {"L", s.seed.L().lift(e)}, {"p_u", PPoly::momentum(e, 1, 1)}};
}

TEST(Field, SimpleHamiltonians) {
  std::vector<double> dy;
  hamiltons_equations(free_particle(), {})(0, {0.3, 1.5}, dy);
  EXPECT_DOUBLE_EQ(dy[0], 1.5);
  EXPECT_DOUBLE_EQ(dy[1], 0.0);
  const Field f = hamiltons_equations(oscillator(Coeff::param(Param::L0)), {{Param::L0, Scalar(3)}});
  f(0, {0.5, 2.0}, dy);
  EXPECT_DOUBLE_EQ(dy[0], 2.0);
  EXPECT_DOUBLE_EQ(dy[1], -2 * 3 * 0.5);
  EXPECT_THROW(hamiltons_equations(oscillator(Coeff::param(Param::L0)), {}), std::invalid_argument);
}

TEST(Field, MatchesFiniteDifferenceOfH) {
  const ModelSpec s = ttw_model(1, 1, Coeff::param(Param::alpha1), Coeff::param(Param::alpha2),
                                Coeff::param(Param::omega), false);
  const auto params = ttw_values();
  const Field f = hamiltons_equations(s.H, params);
  const CompiledPPoly H(s.H, params);
  const std::vector<double> y{0.9, 1.1, 0.3, -0.4};
  std::vector<double> dy;
  f(0, y, dy);
  const double h = 1e-5;
  for (int i = 0; i < 4; ++i) {
    auto at = [&](double k) {
      auto z = y;
      z[i] += k * h;
      return H(z);
    };
    const double g = (at(1) - at(-1)) / (2 * h);
    const double expect = i < 2 ? -dy[i + 2] : dy[i - 2];
    EXPECT_NEAR(g, expect, 1e-6) << i;
  }
}

TEST(Compiled, AgreesWithExactEvaluation) {
  const ModelSpec s = ttw_model(2, 1);
  const auto params = complete_params({}, used_params({s.H, s.K->K}), 4);
  const CompiledPPoly K(s.K->K, params);
  const auto v = param_valuation<double>(params, 17);
  for (const auto& x : sample_points(2, SampleConfig{})) {
    std::vector<double> y = x.q;
    y.insert(y.end(), x.p.begin(), x.p.end());
    const double exact = evaluate_ppoly(s.K->K, x, v);
    EXPECT_NEAR(K(y), exact, 1e-10 * std::max(1.0, std::abs(exact)));
  }
}

TEST(Integrate, FreeParticle) {
  const Trajectory t = integrate_adaptive(config({0}, {1}, 10, 1e-12), hamiltons_equations(free_particle(), {}));
  ASSERT_TRUE(t.ok());
  EXPECT_DOUBLE_EQ(t.t.back(), 10.0);
  EXPECT_NEAR(t.y.back()[0], 10.0, 1e-10);
  EXPECT_EQ(t.t.size(), 21u);
}

TEST(Integrate, HarmonicPeriodClosure) {
  const Field f = hamiltons_equations(oscillator(Coeff::ratio(1, 2)), {});
  const Trajectory t = integrate_adaptive(config({1}, {0}, 2 * std::numbers::pi, 1e-10, 0.1), f);
  ASSERT_TRUE(t.ok());
  EXPECT_NEAR(t.y.back()[0], 1.0, 1e-8);
  EXPECT_NEAR(t.y.back()[1], 0.0, 1e-8);
  // Dense output against the exact solution.
  for (std::size_t k = 0; k < t.t.size(); ++k) {
    EXPECT_NEAR(t.y[k][0], std::cos(t.t[k]), 1e-8);
  }
}

TEST(Integrate, StrideNotDividingSpan) {
  const Trajectory t = integrate_adaptive(config({0}, {1}, 1.0, 1e-10, 0.3), hamiltons_equations(free_particle(), {}));
  ASSERT_EQ(t.t.size(), 5u);
  EXPECT_DOUBLE_EQ(t.t.back(), 1.0);
  EXPECT_NEAR(t.y[2][0], 0.6, 1e-12);
}

TEST(Integrate, Reversibility) {
  const Field f = hamiltons_equations(oscillator(Coeff::ratio(1, 2)), {});
  const double tol = 1e-12;
  const Trajectory fwd = integrate_adaptive(config({0.7}, {0.2}, 1.0, tol), f);
  const auto& end = fwd.y.back();
  const Trajectory back = integrate_adaptive(config({end[0]}, {end[1]}, 1.0, tol), reversed(f));
  EXPECT_NEAR(back.y.back()[0], 0.7, 10 * tol);
  EXPECT_NEAR(back.y.back()[1], 0.2, 10 * tol);
}

TEST(Integrate, ConfigValidation) {
  const Field f = hamiltons_equations(free_particle(), {});
  EXPECT_THROW(integrate_adaptive(config({0}, {1}, 0, 1e-8), f), std::invalid_argument);
  EXPECT_THROW(integrate_adaptive(config({0}, {1}, 1, -1), f), std::invalid_argument);
  EXPECT_THROW(integrate_adaptive(config({0}, {}, 1, 1e-8), f), std::invalid_argument);
  const ModelSpec s = ttw_model(1, 1, Coeff::param(Param::alpha1), Coeff::param(Param::alpha2),
                                Coeff::param(Param::omega), false);
  EXPECT_THROW(integrate_adaptive(config({0.0, 1.0}, {0.1, 0.1}, 1, 1e-8), hamiltons_equations(s.H, ttw_values())),
               std::invalid_argument);
}

TEST(Drift, TtwLambdaTwoConservesAllInvariants) {
  const auto start = std::chrono::steady_clock::now();
  const ModelSpec s = ttw_model(2, 1);
  const auto params = ttw_values();
  const Trajectory t =
      integrate_adaptive(config({1.0, 1.0}, {0.3, 0.2}, 100, 1e-12), hamiltons_equations(s.H, params));
  ASSERT_TRUE(t.ok()) << t.diagnostic;
  const DriftReport r = monitor_invariants(t, ttw_invariants(s), params);
  ASSERT_EQ(r.invariants.size(), 4u);
  for (int i = 0; i < 3; ++i) EXPECT_LT(r.invariants[i].max_drift, 1e-8) << r.invariants[i].name;
  EXPECT_GT(r.invariants[3].max_drift, 0.1);
  EXPECT_GT(r.steps, 100);
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(60));
}

TEST(Drift, HalvingToleranceDoesNotWorsen) {
  const ModelSpec s = ttw_model(2, 1);
  const auto params = ttw_values();
  const Field f = hamiltons_equations(s.H, params);
  const auto inv = ttw_invariants(s);
  for (double tol : {1e-8, 1e-9, 1e-10}) {
    const double a = monitor_invariants(integrate_adaptive(config({1.0, 1.0}, {0.3, 0.2}, 20, tol), f), inv, params)
                         .invariants[1]
                         .max_drift;
    const double b =
        monitor_invariants(integrate_adaptive(config({1.0, 1.0}, {0.3, 0.2}, 20, tol / 2), f), inv, params)
            .invariants[1]
            .max_drift;
    EXPECT_LE(b, 2 * a) << tol;
  }
}

TEST(Drift, ZeroInitialValueUsesAbsoluteDrift) {
  const Trajectory t = integrate_adaptive(config({0}, {1}, 1, 1e-10), hamiltons_equations(free_particle(), {}));
  const DriftReport r = monitor_invariants(t, {{"q", PPoly::constant(line(), Coeff::var(0))}}, {});
  EXPECT_FALSE(r.invariants[0].relative);
  EXPECT_NEAR(r.invariants[0].max_drift, 1.0, 1e-9);
}

TEST(Integrate, NearSingularityGivesPartialTrajectory) {
  // Attractive inverse-square wall: the orbit falls into sin q = 0.
  const ModelSpec s = ttw_model(2, 1);
  const auto params = ttw_values(-3.0);
  const Trajectory t =
      integrate_adaptive(config({0.4, 1.0}, {-1.0, 0.0}, 50, 1e-10), hamiltons_equations(s.H, params));
  EXPECT_FALSE(t.ok());
  EXPECT_EQ(t.status, IntegrationStatus::step_underflow);
  EXPECT_NE(t.diagnostic.find("singularity"), std::string::npos);
  EXPECT_GE(t.t.size(), 1u);
  EXPECT_LT(t.t.back(), 50.0);
}

TEST(Integrate, BatchMatchesSequential) {
  const Field f = hamiltons_equations(oscillator(Coeff::ratio(1, 2)), {});
  std::vector<TrajectoryConfig> cfgs{config({1}, {0}, 3, 1e-10), config({0.5}, {0.5}, 4, 1e-10)};
  const auto batch = integrate_batch(cfgs, f);
  for (std::size_t i = 0; i < cfgs.size(); ++i) {
    const Trajectory one = integrate_adaptive(cfgs[i], f);
    EXPECT_EQ(batch[i].y, one.y);
    EXPECT_EQ(batch[i].steps, one.steps);
  }
}

TEST(Csv, HeaderAndDigits) {
  const Trajectory t = integrate_adaptive(config({0}, {1}, 1, 1e-10, 0.5), hamiltons_equations(free_particle(), {}));
  std::ostringstream os;
  write_trajectory_csv(os, t, *line(), {{"H", free_particle()}}, {});
  std::istringstream is(os.str());
  std::string header, row;
  std::getline(is, header);
  EXPECT_EQ(header, "t,q,p,H");
  std::getline(is, row);
  EXPECT_EQ(row, "0,0,1,0.5");
  std::getline(is, row);
  EXPECT_EQ(row.substr(0, 4), "0.5,");
}

}  // namespace
}  // namespace hamext
