#include "hamext/extension.hpp"

#include <fmt/format.h>

namespace hamext {

namespace {

Scalar binomial(int n, int k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Scalar(r);
}

PPoly lambda_poly(const Scalar& c, const Coeff& L0, const PPoly& l) {
  return (l.scaled(Coeff(c)) + PPoly::constant(l.space_ptr(), L0)).scaled(Coeff(-2));
}

void require_matching_seed(const ExtensionProfile& profile, const SeedSolution& seed) {
  if (profile.c != seed.c() || !(profile.L0 - seed.L0()).is_zero()) {
    throw std::invalid_argument(fmt::format("profile (c={}, L0={}) does not match seed (c={}, L0={})",
                                            to_string(profile.c), to_string(profile.L0), to_string(seed.c()),
                                            to_string(seed.L0())));
  }
}

Coeff inverse_gamma_squared(const Coeff& gamma) {
  if (gamma.is_zero()) throw std::invalid_argument("gamma is identically zero");
  return (gamma * gamma).inverse();
}

struct Dispatch {
  ExtensionProfile effective;
  int exponent;
  int g_index;
  bool odd;
};

Dispatch dispatch(const ExtensionProfile& profile) {
  if (profile.m % 2 == 0) return {profile, profile.m / 2, profile.n, false};
  return {profile.with_mn(2 * profile.m, 2 * profile.n), profile.m, 2 * profile.n, true};
}

}  // namespace

SeedCheck check_seed(const PPoly& l, const PPoly& g, const Scalar& c, const Coeff& L0, int n) {
  require_same_space(l, g, "check_seed");
  const PPoly x2 = apply_XL(l, apply_XL(l, g));
  const PPoly shift = (l.scaled(Coeff(c)) + PPoly::constant(l.space_ptr(), L0)).scaled(Coeff(2 * n * n));
  SeedCheck r{x2 + shift * g, false};
  r.ok = r.residual.is_zero();
  return r;
}

SeedSolution::SeedSolution(PPoly l, PPoly g, Scalar c, Coeff L0)
    : l_(std::move(l)), g_(std::move(g)), c_(std::move(c)), L0_(std::move(L0)) {
  if (l_.space().has_extension()) throw std::invalid_argument("seed must live on the base space");
  if (c_ == 0 && L0_.is_zero()) throw std::invalid_argument("c and L0 must not both be zero");
  SeedCheck chk = check_seed(l_, g_, c_, L0_);
  if (!chk.ok) {
    const std::string msg = "structural equation fails: residual " + to_string(chk.residual);
    throw SeedConditionFailed(msg, std::move(chk.residual));
  }
}

std::vector<PPoly> recursion_sequence(const SeedSolution& seed, int n) {
  if (n < 1) throw std::invalid_argument("recursion index must be >= 1");
  std::vector<PPoly> out{seed.G()};
  const PPoly xg = apply_XL(seed.L(), seed.G());
  for (int k = 1; k < n; ++k) {
    const PPoly& gk = out.back();
    out.push_back(xg * gk + (seed.G() * apply_XL(seed.L(), gk)).scaled(Coeff(Scalar(1, k))));
  }
  return out;
}

PPoly recursion_Gn(const SeedSolution& seed, int n) { return recursion_sequence(seed, n).back(); }

PPoly build_extended_H(const ExtensionProfile& profile, const PPoly& l) {
  if (l.space().has_extension()) throw std::invalid_argument("L must live on the base space");
  const SpacePtr e = extended_space(l.space(), profile);
  const Coeff k(profile.ratio_squared());
  return PPoly::momentum(e, e->extension_slot(), 2).scaled(Coeff::ratio(1, 2)) +
         l.lift(e).scaled(k * profile.alpha) + PPoly::constant(e, k * profile.beta);
}

PPoly build_K(const ExtensionProfile& profile, const SeedSolution& seed) {
  require_matching_seed(profile, seed);
  const SpacePtr e = extended_space(*seed.space(), profile);
  return apply_U_power(profile, seed.L(), recursion_Gn(seed, profile.n).lift(e), profile.m);
}

std::pair<PPoly, PPoly> closed_form_PD(const ExtensionProfile& profile, const SeedSolution& seed, int r) {
  if (r < 0 || r > profile.m) throw std::invalid_argument("closed form needs 0 <= r <= m");
  require_matching_seed(profile, seed);
  const SpacePtr e = extended_space(*seed.space(), profile);
  const PPoly lam = lambda_poly(seed.c(), seed.L0(), seed.L().lift(e));
  const PPoly pu = PPoly::momentum(e, e->extension_slot());
  const Coeff g = Coeff(Scalar(profile.m, profile.n)) * profile.gamma;
  PPoly P(e);
  PPoly D(e);
  PPoly lam_k = PPoly::constant(e, Coeff(1));
  for (int k = 0; 2 * k <= r; ++k) {
    P += (pu.pow(r - 2 * k) * lam_k).scaled(Coeff(binomial(r, 2 * k)) * g.pow(2 * k));
    if (2 * k + 1 <= r) {
      D += (pu.pow(r - 2 * k - 1) * lam_k)
               .scaled(Coeff(binomial(r, 2 * k + 1) / Scalar(profile.n)) * g.pow(2 * k + 1));
    }
    lam_k = lam_k * lam;
  }
  return {P, D};
}

PPoly closed_form_reconstruction(const ExtensionProfile& profile, const SeedSolution& seed, int r) {
  const auto [P, D] = closed_form_PD(profile, seed, r);
  const PPoly gn = recursion_Gn(seed, profile.n).lift(P.space_ptr());
  return P * gn + D * apply_XL(seed.L(), gn);
}

PPoly build_modified_H(const ExtensionProfile& profile, const PPoly& l) {
  const PPoly h = build_extended_H(profile, l);
  return h + PPoly::constant(h.space_ptr(), profile.omega * inverse_gamma_squared(profile.gamma));
}

ModifiedIntegral build_modified_K(const ExtensionProfile& profile, const SeedSolution& seed) {
  require_matching_seed(profile, seed);
  inverse_gamma_squared(profile.gamma);
  const Dispatch d = dispatch(profile);
  const SpacePtr e = extended_space(*seed.space(), profile);
  PPoly k = recursion_Gn(seed, d.g_index).lift(e);
  for (int i = 0; i < d.exponent; ++i) k = apply_W(d.effective, seed.L(), k);
  return {k, d.effective, d.exponent, d.g_index, d.odd};
}

PPoly expand_modified_K(const ExtensionProfile& profile, const SeedSolution& seed) {
  require_matching_seed(profile, seed);
  const Dispatch d = dispatch(profile);
  const SpacePtr e = extended_space(*seed.space(), profile);
  const Coeff w = Coeff(2) * profile.omega * inverse_gamma_squared(profile.gamma);
  // u2[i] = U^{2i}(G)
  std::vector<PPoly> u2{recursion_Gn(seed, d.g_index).lift(e)};
  for (int i = 1; i <= d.exponent; ++i) u2.push_back(apply_U_power(d.effective, seed.L(), u2.back(), 2));
  PPoly out(e);
  for (int j = 0; j <= d.exponent; ++j) {
    out += u2[d.exponent - j].scaled(Coeff(binomial(d.exponent, j)) * w.pow(j));
  }
  return out;
}

LemmaInputs instantiate_lemma(const ExtensionProfile& profile, const SeedSolution& seed) {
  require_matching_seed(profile, seed);
  const Dispatch d = dispatch(profile);
  const Coeff gi2 = inverse_gamma_squared(profile.gamma);
  const Coeff f = Coeff(profile.ratio_squared()) * profile.beta + profile.omega * gi2;
  const Coeff h = Coeff(2) * profile.omega * gi2 - Coeff(2) * f;
  const int lm = d.odd ? profile.m : profile.m / 2;
  return {seed.L(),       recursion_Gn(seed, d.g_index), seed.c(), seed.L0(), lm, d.g_index,
          profile.alpha,  profile.gamma,                 f,        h,         profile.extension_var()};
}

std::vector<std::string> LemmaReport::failures() const {
  std::vector<std::string> out;
  if (!structural_ok()) out.push_back("structural equation on G");
  if (!gamma_ok()) out.push_back("gamma'' + 2c gamma' gamma = 0");
  if (!alpha_ok()) out.push_back("alpha = -gamma'");
  if (!f_ok()) out.push_back("f form");
  if (!h_ok()) out.push_back("h form");
  return out;
}

LemmaReport check_lemma_conditions(const LemmaInputs& in, const Coeff& omega) {
  constexpr int u = kExtSlot;
  LemmaReport r{.structural = check_seed(in.L, in.G, in.c, in.L0, in.n).residual};
  const Coeff dg = in.gamma.derivative(u);
  r.gamma_ode = dg.derivative(u) + Coeff(2 * in.c) * dg * in.gamma;
  r.alpha_relation = in.alpha + dg;
  r.injectivity_premise = !apply_XL(in.L, in.G).is_zero();
  const Scalar mm(4 * in.m * in.m, in.n * in.n);
  const Coeff g2 = in.gamma * in.gamma;
  r.two_f_plus_h = Coeff(2) * in.f + in.h;
  if (in.gamma.is_zero()) {
    r.f_residual = in.f;
    r.h_residual = in.h;
    return r;
  }
  const Coeff gi2 = g2.inverse();
  const Coeff rest = in.f - Coeff(mm) * in.L0 * g2;
  const Coeff dgi2 = gi2.derivative(u);
  if (!dgi2.is_zero()) {
    const Coeff f0 = rest.derivative(u) / dgi2;
    if (f0.is_constant()) {
      const Coeff h0 = Coeff(2) * (rest - f0 * gi2);
      if (h0.is_constant()) {
        r.f0 = f0;
        r.h0 = h0;
      }
    }
  }
  if (r.f0 && r.h0) {
    r.f_residual = rest - *r.f0 * gi2 - *r.h0 * Coeff::ratio(1, 2);
    r.h_residual = in.h + Coeff(2 * mm) * in.L0 * g2 + *r.h0;
    r.two_f_plus_h_matches = (r.two_f_plus_h - Coeff(2) * *r.f0 * gi2).is_zero();
    r.f0_is_omega = (*r.f0 - omega).is_zero();
  } else {
    r.f_residual = rest.derivative(u);
    r.h_residual = in.h;
  }
  return r;
}

LemmaReport check_lemma_conditions(const ExtensionProfile& profile, const Coeff& f, const Coeff& h,
                                   const SeedSolution& seed) {
  LemmaInputs in = instantiate_lemma(profile, seed);
  in.f = f;
  in.h = h;
  return check_lemma_conditions(in, profile.omega);
}

PPoly lemma_bracket(const LemmaInputs& in) {
  const SpacePtr e = PhaseSpace::extend(in.L.space(), in.u);
  const int us = e->extension_slot();
  const PPoly H = PPoly::momentum(e, us, 2).scaled(Coeff::ratio(1, 2)) + PPoly::constant(e, in.f) +
                  in.L.lift(e).scaled(Coeff(Scalar(4 * in.m * in.m, in.n * in.n)) * in.alpha);
  // U with factor 2m/n^2 is the profile operator at (2m, n).
  ExtensionProfile op;
  op.m = 2 * in.m;
  op.n = in.n;
  op.gamma = in.gamma;
  const Coeff shift = Coeff(2) * in.f + in.h;
  PPoly k = in.G.lift(e);
  for (int i = 0; i < in.m; ++i) k = apply_U_power(op, in.L, k, 2) + k.scaled(shift);
  return poisson_bracket(H, k);
}

std::string to_string(LinearCase c) {
  switch (c) {
    case LinearCase::trig: return "c!=0";
    case LinearCase::linear_eta: return "c=0,a1!=0";
    case LinearCase::constant_eta: return "c=0,a1=0";
  }
  return "";
}

SpacePtr base_space_for_tag(int tag) { return PhaseSpace::base({"q", "p_q", kind_for_tag(tag)}); }

LinearSeedFamily solve_linear_seed(const LinearSeedInputs& in) {
  constexpr int q = kBaseSlot;
  LinearCase which;
  if (in.c != 0) {
    which = LinearCase::trig;
  } else {
    which = in.a1.is_zero() ? LinearCase::constant_eta : LinearCase::linear_eta;
  }
  if (in.requested && *in.requested != which) {
    throw std::invalid_argument(fmt::format("case {} requested but inputs select {}", to_string(*in.requested),
                                            to_string(which)));
  }
  if (!in.a1.is_constant() || !in.a2.is_constant() || !in.c1.is_constant() || !in.c2.is_constant() ||
      !in.L0.is_constant()) {
    throw std::invalid_argument("a1, a2, c1, c2 and L0 must be constants");
  }
  if (in.c == 0 && in.L0.is_zero()) throw std::invalid_argument("c and L0 must not both be zero");
  int tag = 0;
  if (in.c == 1) tag = 1;
  else if (in.c == -1) tag = -1;
  else if (in.c != 0) throw std::invalid_argument("exact mode needs c in {-1, 0, 1}");

  Coeff eta;
  Coeff V;
  switch (which) {
    case LinearCase::trig: {
      eta = in.a1 * tagged_trig(TaggedKind::S, tag, 1, q) + in.a2 * tagged_trig(TaggedKind::C, tag, 1, q);
      if (eta.is_zero()) throw std::invalid_argument("eta vanishes identically");
      V = (in.c1 + in.c2 * eta.derivative(q)) / (eta * eta) - in.L0 / Coeff(in.c);
      break;
    }
    case LinearCase::linear_eta: {
      eta = in.a1 * Coeff::var(q) + in.a2;
      V = in.L0 / (Coeff(4) * in.a1 * in.a1) * eta * eta + in.c1 / (eta * eta) + in.c2;
      break;
    }
    case LinearCase::constant_eta: {
      if (in.a2.is_zero()) throw std::invalid_argument("eta vanishes identically");
      eta = in.a2;
      V = in.L0 * Coeff::var(q) * Coeff::var(q) + in.c1 * Coeff::var(q) + in.c2;
      break;
    }
  }
  const Coeff e1 = eta.derivative(q);
  const Coeff v1 = V.derivative(q);
  const Coeff re = e1.derivative(q) + Coeff(in.c) * eta;
  const Coeff rv = Coeff(3) * v1 * e1 + eta * v1.derivative(q) - Coeff(2) * eta * (Coeff(in.c) * V + in.L0);
  if (!re.is_zero() || !rv.is_zero()) {
    throw std::logic_error(fmt::format("linear seed residuals nonzero: {} ; {}", to_string(re), to_string(rv)));
  }
  const SpacePtr s = base_space_for_tag(tag);
  const PPoly L = PPoly::momentum(s, q, 2).scaled(Coeff::ratio(1, 2)) + PPoly::constant(s, V);
  const PPoly G = PPoly::momentum(s, q).scaled(eta);
  return {which, eta, V, re, rv, SeedSolution(L, G, in.c, in.L0)};
}

E2Report check_e2_system(const Coeff& V, const std::vector<Coeff>& eta, const Scalar& c, const Coeff& L0,
                         const SpacePtr& base) {
  constexpr int q = kBaseSlot;
  if (eta.empty()) throw std::invalid_argument("eta list must not be empty");
  const int r = static_cast<int>(eta.size()) - 1;
  auto at = [&](int j) { return j < 0 || j > r ? Coeff() : eta[j]; };
  const Coeff v1 = V.derivative(q);
  const Coeff v2 = v1.derivative(q);
  const Coeff shift = Coeff(2 * c) * V + Coeff(2) * L0;
  E2Report rep;
  rep.ok = true;
  for (int j = 0; j <= r + 2; ++j) {
    const Coeff top = at(j - 2).derivative(q).derivative(q) + Coeff(c) * at(j - 2);
    const Coeff rest = Coeff(2 * j + 1) * v1 * at(j).derivative(q) - (shift - Coeff(j) * v2) * at(j) -
                       Coeff((j + 1) * (j + 2)) * v1 * v1 * at(j + 2);
    int block = 4;
    if (j >= r + 1) block = 1;
    else if (j >= 2 && j >= r - 1) block = 2;
    else if (j >= 2) block = 3;
    rep.residuals.push_back({j, block, top - rest});
    rep.ok = rep.ok && rep.residuals.back().residual.is_zero();
  }
  // The same residuals are the momentum coefficients of the structural equation.
  const PPoly L = PPoly::momentum(base, q, 2).scaled(Coeff::ratio(1, 2)) + PPoly::constant(base, V);
  PPoly G(base);
  for (int i = 0; i <= r; ++i) G += PPoly::momentum(base, q, i).scaled(eta[i]);
  const SeedCheck chk = check_seed(L, G, c, L0);
  rep.consistent_with_seed_check = chk.residual.degree() <= r + 2;
  for (const auto& e : rep.residuals) {
    MomentumIndex idx{};
    idx[q] = static_cast<std::int16_t>(e.power);
    if (!(chk.residual.coeff(idx) - e.residual).is_zero()) rep.consistent_with_seed_check = false;
  }
  return rep;
}

}  // namespace hamext
