// One PASS/FAIL line per acceptance criterion; exit status 0 iff all pass.
#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "hamext/catalog.hpp"
#include "hamext/cli.hpp"
#include "hamext/dynamics.hpp"
#include "hamext/operators.hpp"
#include "hamext/verifier.hpp"

using namespace hamext;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

Coeff P(Param p) { return Coeff::param(p); }

std::vector<std::pair<int, int>> ttw_lambdas(std::initializer_list<std::pair<int, int>> l) { return l; }

Outcome plain_commutation() {
  Outcome o;
  double worst = 0;
  for (auto [m, n] : ttw_lambdas({{1, 1}, {2, 1}, {1, 2}, {3, 1}, {3, 2}})) {
    const auto t0 = Clock::now();
    const ModelSpec s = ttw_model_c(m, n, P(Param::c1), P(Param::c2), Coeff(0), false);
    const PPoly H = build_extended_H(s.profile, s.seed.L());
    const bool zero = poisson_bracket(H, build_K(s.profile, s.seed)).is_zero();
    const double dt = seconds_since(t0);
    worst = std::max(worst, dt);
    if (!zero || dt > 60) o.pass = false;
    if (!zero) o.detail += fmt::format(" nonzero at {}/{}", m, n);
  }
  o.detail = fmt::format("lambda in {{1, 2, 1/2, 3, 3/2}}, slowest {:.3f} s", worst) + o.detail;
  return o;
}

Outcome modified_commutation(const std::vector<ModelSpec>& models, double limit) {
  Outcome o;
  double worst = 0;
  std::string names;
  for (const auto& s : models) {
    const auto t0 = Clock::now();
    const bool zero = symbolic_commute_check(s.H, s.K->K).zero;
    worst = std::max(worst, seconds_since(t0));
    names += fmt::format(" {}({}/{}){}", s.name, s.m, s.n, s.K->odd_branch ? "[odd]" : "[even]");
    if (!zero) o.pass = false;
  }
  if (worst > limit) o.pass = false;
  o.detail = "bracket zero for" + names + fmt::format(", slowest {:.3f} s", worst);
  return o;
}

Outcome even_branch() {
  std::vector<ModelSpec> models;
  const auto t0 = Clock::now();
  for (auto [m, n] : ttw_lambdas({{1, 1}, {2, 1}, {3, 2}})) models.push_back(ttw_model(m, n));
  models.push_back(cage_model(2, 1));
  models.push_back(cage_model(4, 3));
  Outcome o = modified_commutation(models, 120);
  for (const auto& s : models) {
    if (s.K->odd_branch) o.pass = false;
  }
  o.detail += fmt::format(", construction {:.3f} s", seconds_since(t0));
  return o;
}

Outcome odd_branch() {
  std::vector<ModelSpec> models{cage_model(1, 1), cage_model(3, 2)};
  Outcome o = modified_commutation(models, 120);
  for (const auto& s : models) {
    if (!s.K->odd_branch || s.K->effective.m != 2 * s.m || s.K->effective.n != 2 * s.n || s.K->g_index != 2 * s.n) {
      o.pass = false;
    }
  }
  return o;
}

std::vector<SeedSolution> catalog_seeds() {
  return {ttw_model_c(1, 1, P(Param::c1), P(Param::c2), P(Param::omega), false).seed, cage_model(1, 1).seed,
          harmonic_model(1, 1).seed};
}

Outcome recursion_law() {
  Outcome o;
  int checked = 0;
  for (const auto& s : catalog_seeds()) {
    for (int n = 1; n <= 5; ++n) {
      const PPoly gn = recursion_Gn(s, n);
      if (!check_seed(s.L(), gn, s.c(), s.L0(), n).ok) o.pass = false;
      ++checked;
    }
  }
  o.detail = fmt::format("{} (seed, n) pairs, ttw/cage/harmonic seeds, n <= 5", checked);
  return o;
}

Outcome closed_form() {
  Outcome o;
  int checked = 0;
  for (const auto& s : catalog_seeds()) {
    for (int n = 1; n <= 3; ++n) {
      const PPoly gn = recursion_Gn(s, n);
      for (int m = 1; m <= 6; ++m) {
        const ExtensionProfile p = make_profile(m, n, s.c(), s.L0(), 0);
        PPoly it = gn.lift(extended_space(*s.space(), p));
        for (int r = 1; r <= m; ++r) {
          it = apply_U(p, s.L(), it);
          if (it != closed_form_reconstruction(p, s, r)) o.pass = false;
          ++checked;
        }
      }
    }
  }
  o.detail = fmt::format("U^r(G_n) = P G_n + D X_L(G_n) in {} cases, r <= m <= 6, n <= 3", checked);
  return o;
}

Outcome binomial() {
  Outcome o;
  int checked = 0;
  for (const auto& s : catalog_seeds()) {
    for (int n = 1; n <= 2; ++n) {
      for (int m = 1; m <= 7; ++m) {
        const ExtensionProfile p = make_profile(m, n, s.c(), s.L0(), 0);
        if (expand_modified_K(p, s) != build_modified_K(p, s).K) o.pass = false;
        ++checked;
      }
    }
  }
  o.detail = fmt::format("{} cases, m = 2s or 2s+1 with s <= 3", checked);
  return o;
}

Outcome golden() {
  const ModelSpec s = ttw_model(1, 1);
  const PPoly g = golden_K21(s.H.space_ptr());
  SampleConfig cfg;
  cfg.samples = 100;
  const GoldenComparison c =
      golden_compare(s.K->K, g, complete_params({}, used_params({s.K->K, g}), cfg.seed), cfg);
  Outcome o;
  o.pass = c.accepted == 100 && c.max_deviation < 1e-12 && c.symbolic_constant && *c.symbolic_constant == 1;
  o.detail = fmt::format("constant {:.15g} (exact {}), max deviation {:.3g} over {} points", c.constant,
                         c.symbolic_constant ? to_string(*c.symbolic_constant) : "none", c.max_deviation, c.accepted);
  return o;
}

Outcome lemma() {
  Outcome o;
  int cases = 0;
  std::string misses;
  for (const auto& s : catalog_seeds()) {
    for (int m : {1, 2, 3, 4}) {
      const ExtensionProfile p = make_profile(m, 1, s.c(), s.L0(), 0);
      const LemmaInputs base = instantiate_lemma(p, s);
      const LemmaReport r = check_lemma_conditions(base);
      const std::string tag = fmt::format(" c={} m={}:", to_string(s.c()), m);
      if (!r.all() || !r.f0_is_omega) misses += tag + "instantiation";
      // One perturbation per condition, each must be caught.
      const Coeff u = Coeff::var(kExtSlot);
      LemmaInputs in = base;
      in.G = base.G + PPoly::momentum(base.G.space_ptr(), kBaseSlot, 2);
      if (check_lemma_conditions(in).structural_ok()) misses += tag + "structural";
      in = base;
      in.gamma = base.gamma + u * u;
      if (check_lemma_conditions(in).gamma_ok()) misses += tag + "gamma";
      in = base;
      in.alpha = base.alpha + Coeff(1);
      if (check_lemma_conditions(in).alpha_ok()) misses += tag + "alpha";
      in = base;
      in.f = base.f + u;
      if (check_lemma_conditions(in).f_ok()) misses += tag + "f";
      in = base;
      in.h = base.h + u;
      if (check_lemma_conditions(in).h_ok()) misses += tag + "h";
      ++cases;
    }
  }
  o.pass = misses.empty();
  o.detail = fmt::format("{} instantiations pass with f0 = omega; 5 perturbations each detected", cases);
  if (!o.pass) o.detail = "missed:" + misses;
  return o;
}

Outcome table2() {
  Outcome o;
  LinearSeedInputs trig;
  trig.c = 1;
  trig.a1 = Coeff(1);
  trig.a2 = Coeff(0);
  LinearSeedInputs lin;
  lin.c = 0;
  lin.a1 = Coeff(1);
  lin.a2 = Coeff(0);
  LinearSeedInputs cst;
  cst.c = 0;
  cst.a1 = Coeff(0);
  cst.a2 = Coeff(1);
  for (const auto& in : {trig, lin, cst}) {
    const LinearSeedFamily f = solve_linear_seed(in);
    if (!f.residual_eta.is_zero() || !f.residual_V.is_zero()) o.pass = false;
  }
  const Coeff sq = Coeff::fn(kBaseSlot, Fn::sin);
  const Coeff q = Coeff::var(kBaseSlot);
  const Coeff Vt = (P(Param::c1) + P(Param::c2) * Coeff::fn(kBaseSlot, Fn::cos)) / (sq * sq);
  const Coeff Vl = P(Param::L0) * Coeff::ratio(1, 4) * q * q + P(Param::c1) / (q * q);
  const bool r1a = check_e2_system(Vt, {Coeff(0), sq}, 1, Coeff(0), base_space_for_tag(1)).ok;
  const bool r1b = check_e2_system(Vl, {Coeff(0), q}, 0, P(Param::L0), base_space_for_tag(0)).ok;
  const Coeff Vg = P(Param::b) * q.pow(3) + P(Param::c1) * q;
  const bool r2 = check_e2_system(Vg, {Coeff(0), Coeff(0), Coeff(1)}, 1, Coeff(0), base_space_for_tag(0)).ok;
  if (!r1a || !r1b || r2) o.pass = false;
  o.detail = fmt::format("3 rows certified; r = 1 checks {}/{}; r = 2 counterexample {}", r1a ? "ok" : "FAIL",
                         r1b ? "ok" : "FAIL", r2 ? "accepted (wrong)" : "rejected");
  return o;
}

Outcome independence() {
  Outcome o;
  SampleConfig cfg;
  cfg.samples = 100;
  for (const ModelSpec& s : {ttw_model(1, 1), cage_model(2, 1)}) {
    const PPoly L = s.seed.L().lift(s.H.space_ptr());
    const RankStats r =
        independence_rank({s.H, s.K->K, L}, complete_params({}, used_params({s.H, s.K->K}), cfg.seed), cfg, 1e-8);
    if (r.full_rank < 95) o.pass = false;
    o.detail += fmt::format("{}({}/{}) rank 3 at {}/{}; ", s.name, s.m, s.n, r.full_rank, cfg.samples);
  }
  o.detail.resize(o.detail.size() - 2);
  return o;
}

Outcome polar_cage() {
  SampleConfig cfg;
  cfg.samples = 100;
  const NumericStats st = polar_cage_check(cfg, 1.0, 2.0, 0.7);
  Outcome o;
  o.pass = st.accepted == 100 && st.max_value < 1e-12;
  o.detail = fmt::format("max relative difference {:.3g} over {} mapped points", st.max_value, st.accepted);
  return o;
}

Outcome dynamics() {
  const auto t0 = Clock::now();
  const ModelSpec s = ttw_model(2, 1);
  const ParamValues params{{Param::alpha1, Scalar(1)}, {Param::alpha2, Scalar(2)}, {Param::omega, Scalar(7, 10)}};
  TrajectoryConfig tc;
  tc.initial = {{1.0, 1.0}, {0.3, 0.2}};
  tc.t_end = 100;
  tc.rtol = tc.atol = 1e-12;
  tc.stride = 0.1;
  const Trajectory t = integrate_adaptive(tc, hamiltons_equations(s.H, params));
  const auto e = s.H.space_ptr();
  const DriftReport d = monitor_invariants(
      t, {{"H", s.H}, {"K", s.K->K}, {"L", s.seed.L().lift(e)}, {"p_u", PPoly::momentum(e, kExtSlot)}}, params);
  const double dt = seconds_since(t0);
  Outcome o;
  o.pass = t.ok() && dt < 60;
  for (int i = 0; i < 3; ++i) {
    if (d.invariants[i].max_drift >= 1e-8) o.pass = false;
  }
  if (d.invariants[3].max_drift < 0.1) o.pass = false;
  o.detail = fmt::format("drift H {:.2e}, K {:.2e}, L {:.2e}; control p_u {:.2g}; {} steps, {:.2f} s",
                         d.invariants[0].max_drift, d.invariants[1].max_drift, d.invariants[2].max_drift,
                         d.invariants[3].max_drift, d.steps, dt);
  return o;
}

Outcome determinism() {
  const std::vector<std::string> args{"hamext", "verify", "--model", "ttw", "--m", "1", "--n", "1", "--seed", "7"};
  std::ostringstream a, b, ea, eb;
  const int ca = run_cli(args, a, ea);
  const int cb = run_cli(args, b, eb);
  Outcome o;
  o.pass = ca == 0 && cb == 0 && !a.str().empty() && a.str() == b.str();
  o.detail = fmt::format("two verify runs, {} bytes each, {}", a.str().size(), a.str() == b.str() ? "identical" : "differ");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"plain-extension commutation", plain_commutation},
      {"modified commutation, even branch", even_branch},
      {"modified commutation, odd branch", odd_branch},
      {"recursion law", recursion_law},
      {"closed form of iterated U", closed_form},
      {"binomial expansion of K", binomial},
      {"golden lambda = 1 integral", golden},
      {"lemma conditions", lemma},
      {"linear seed table", table2},
      {"functional independence", independence},
      {"polar and Cartesian forms agree", polar_cage},
      {"conservation along the flow", dynamics},
      {"deterministic reports", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << fmt::format("{} {:2d} {}: {}\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail);
  }
  std::cout << fmt::format("{}/{} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
