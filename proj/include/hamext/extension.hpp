// Seeds, the G_n recursion, plain and modified extensions with their first
// integrals, closed forms, and the structural-equation checkers and solvers.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hamext/operators.hpp"
#include "hamext/ppoly.hpp"
#include "hamext/profile.hpp"

namespace hamext {

struct SeedCheck {
  PPoly residual;
  bool ok = false;
};

// X_L^2(G) + 2 n^2 (c L + L0) G and its zero verdict.
SeedCheck check_seed(const PPoly& l, const PPoly& g, const Scalar& c, const Coeff& L0, int n = 1);

class SeedConditionFailed : public std::runtime_error {
 public:
  SeedConditionFailed(const std::string& what, PPoly residual)
      : std::runtime_error(what), residual_(std::move(residual)) {}
  const PPoly& residual() const { return residual_; }

 private:
  PPoly residual_;
};

// A pair (L, G) on a base space with a certified zero residual.
class SeedSolution {
 public:
  // Throws SeedConditionFailed with the residual when the check fails.
  SeedSolution(PPoly l, PPoly g, Scalar c, Coeff L0);

  const PPoly& L() const { return l_; }
  const PPoly& G() const { return g_; }
  const Scalar& c() const { return c_; }
  const Coeff& L0() const { return L0_; }
  const SpacePtr& space() const { return l_.space_ptr(); }

 private:
  PPoly l_;
  PPoly g_;
  Scalar c_;
  Coeff L0_;
};

// G_1 .. G_n with G_{k+1} = X_L(G) G_k + (1/k) G X_L(G_k).
std::vector<PPoly> recursion_sequence(const SeedSolution& seed, int n);
PPoly recursion_Gn(const SeedSolution& seed, int n);

// 1/2 p_u^2 + (m^2/n^2) alpha L + (m^2/n^2) beta on the extended space.
PPoly build_extended_H(const ExtensionProfile& profile, const PPoly& l);
// U^m(G_n). Rejects a profile whose (c, L0) differ from the seed's.
PPoly build_K(const ExtensionProfile& profile, const SeedSolution& seed);

// P_{m,n,r} and D_{m,n,r} with Lambda = -2(cL + L0); requires 0 <= r <= m.
std::pair<PPoly, PPoly> closed_form_PD(const ExtensionProfile& profile, const SeedSolution& seed, int r);
// P G_n + D X_L(G_n).
PPoly closed_form_reconstruction(const ExtensionProfile& profile, const SeedSolution& seed, int r);

// Extended H plus omega gamma^-2.
PPoly build_modified_H(const ExtensionProfile& profile, const PPoly& l);

struct ModifiedIntegral {
  PPoly K;
  ExtensionProfile effective;  // profile whose U builds K
  int exponent = 0;            // power of W
  int g_index = 0;             // G_k the powers act on
  bool odd_branch = false;
};

// m = 2s: W^s(G_n). m = 2s+1: W^m(G_{2n}) with the (2m, 2n) profile.
ModifiedIntegral build_modified_K(const ExtensionProfile& profile, const SeedSolution& seed);
// sum_j C(s, j) (2 omega gamma^-2)^j U^{2(s-j)}(G) over the same dispatch.
PPoly expand_modified_K(const ExtensionProfile& profile, const SeedSolution& seed);

// Inputs of the involution lemma: H = 1/2 p_u^2 + f + (2m/n)^2 alpha L and
// W = (p_u + (2m/n^2) gamma X_L)^2 + (2f + h).
struct LemmaInputs {
  PPoly L;
  PPoly G;
  Scalar c;
  Coeff L0;
  int m = 1;
  int n = 1;
  Coeff alpha;
  Coeff gamma;
  Coeff f;
  Coeff h;
  PositionVar u{"u", "p_u", GeneratorKind::linear};
};

// f = (m^2/n^2) beta + omega gamma^-2 and h = 2 omega gamma^-2 - 2 f for
// the modified extension, with the parity dispatch of build_modified_K.
LemmaInputs instantiate_lemma(const ExtensionProfile& profile, const SeedSolution& seed);

struct LemmaReport {
  PPoly structural;    // X_L^2 G + 2 n^2 (cL + L0) G
  Coeff gamma_ode{};     // gamma'' + 2 c gamma' gamma
  Coeff alpha_relation{};  // alpha + gamma'
  std::optional<Coeff> f0{};
  std::optional<Coeff> h0{};
  Coeff f_residual{};    // f - (4m^2/n^2) L0 gamma^2 - f0 gamma^-2 - h0/2
  Coeff h_residual{};    // h + (8m^2/n^2) L0 gamma^2 + h0
  Coeff two_f_plus_h{};
  bool two_f_plus_h_matches = false;  // equals 2 f0 gamma^-2
  bool f0_is_omega = false;
  bool injectivity_premise = false;   // X_L(G) not identically zero

  bool structural_ok() const { return structural.is_zero(); }
  bool gamma_ok() const { return gamma_ode.is_zero(); }
  bool alpha_ok() const { return alpha_relation.is_zero(); }
  bool f_ok() const { return f0.has_value() && h0.has_value() && f_residual.is_zero(); }
  bool h_ok() const { return f_ok() && h_residual.is_zero(); }
  bool all() const { return structural_ok() && gamma_ok() && alpha_ok() && f_ok() && h_ok(); }
  std::vector<std::string> failures() const;
};

LemmaReport check_lemma_conditions(const LemmaInputs& in, const Coeff& omega = Coeff::param(Param::omega));
LemmaReport check_lemma_conditions(const ExtensionProfile& profile, const Coeff& f, const Coeff& h,
                                   const SeedSolution& seed);

// {H, W^m(G)} computed directly from the lemma's definitions.
PPoly lemma_bracket(const LemmaInputs& in);

enum class LinearCase { trig, linear_eta, constant_eta };
std::string to_string(LinearCase c);

struct LinearSeedInputs {
  Scalar c;
  Coeff a1 = Coeff::param(Param::a1);
  Coeff a2 = Coeff::param(Param::a2);
  Coeff c1 = Coeff::param(Param::c1);
  Coeff c2 = Coeff::param(Param::c2);
  Coeff L0 = Coeff::param(Param::L0);
  std::optional<LinearCase> requested;
};

struct LinearSeedFamily {
  LinearCase which;
  Coeff eta;
  Coeff V;
  Coeff residual_eta;  // eta'' + c eta
  Coeff residual_V;    // 3 V' eta' + eta V'' - 2 eta (c V + L0)
  SeedSolution seed;   // L = p^2/2 + V, G = eta p
};

// Rows of the r = 1 solution table. Throws std::invalid_argument on an
// inconsistent case request or a vanishing eta.
LinearSeedFamily solve_linear_seed(const LinearSeedInputs& in);

struct E2Residual {
  int power = 0;  // coefficient of p^power in the structural residual
  int block = 0;  // 1: top, 2: upper, 3: middle, 4: bottom equations
  Coeff residual;
};

struct E2Report {
  std::vector<E2Residual> residuals;
  bool ok = false;
  bool consistent_with_seed_check = false;
};

// Residuals of the degree-r system for G = sum eta_i p^i with L = p^2/2 + V.
E2Report check_e2_system(const Coeff& V, const std::vector<Coeff>& eta, const Scalar& c, const Coeff& L0,
                         const SpacePtr& base);

// Base space whose position kind matches the tag of eta.
SpacePtr base_space_for_tag(int tag);

}  // namespace hamext
