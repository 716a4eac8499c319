#include "hamext/profile.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace hamext {

double tagged_trig(TaggedKind kind, double kappa, double x) {
  double s = 0;
  double c = 1;
  if (kappa > 0) {
    const double r = std::sqrt(kappa);
    s = std::sin(r * x) / r;
    c = std::cos(r * x);
  } else if (kappa == 0) {
    s = x;
    c = 1;
  } else {
    const double r = std::sqrt(-kappa);
    s = std::sinh(r * x) / r;
    c = std::cosh(r * x);
  }
  switch (kind) {
    case TaggedKind::S: return s;
    case TaggedKind::C: return c;
    case TaggedKind::T:
      if (std::abs(c) < 1e-15) throw std::domain_error("T_kappa evaluated at a zero of C_kappa");
      return s / c;
  }
  return 0;
}

GeneratorKind kind_for_tag(int tag) {
  if (tag > 0) return GeneratorKind::circular;
  if (tag < 0) return GeneratorKind::hyperbolic;
  return GeneratorKind::linear;
}

Coeff tagged_trig(TaggedKind kind, int kappa, const Scalar& scale, int slot) {
  if (kappa < -1 || kappa > 1) {
    throw std::invalid_argument("symbolic tagged functions need kappa in {-1, 0, 1}");
  }
  if (scale == 0) throw std::invalid_argument("tagged function argument scale must be nonzero");
  Coeff s;
  Coeff c;
  if (kappa == 0) {
    s = Coeff(scale) * Coeff::var(slot);
    c = Coeff(1);
  } else {
    if (abs(scale) != 1) {
      throw std::invalid_argument("symbolic tagged functions with kappa != 0 need a scale of +-1");
    }
    // S is odd and C even in the argument.
    s = Coeff(scale) * Coeff::fn(slot, kappa > 0 ? Fn::sin : Fn::sinh);
    c = Coeff::fn(slot, kappa > 0 ? Fn::cos : Fn::cosh);
  }
  switch (kind) {
    case TaggedKind::S: return s;
    case TaggedKind::C: return c;
    case TaggedKind::T: return s / c;
  }
  return {};
}

PositionVar ExtensionProfile::extension_var() const {
  // The c = 0 column only involves polynomial functions of u.
  return {"u", "p_u", c_zero_column() ? GeneratorKind::linear : kind_for_tag(kappa)};
}

ExtensionProfile ExtensionProfile::with_mn(int m2, int n2) const {
  if (m2 < 1 || n2 < 1) throw std::invalid_argument("extension indices must be positive");
  ExtensionProfile p = *this;
  p.m = m2;
  p.n = n2;
  return p;
}

ProfileResiduals profile_residuals(const ExtensionProfile& p) {
  ProfileResiduals r;
  const Coeff dg = p.gamma.derivative(kExtSlot);
  r.alpha_relation = p.alpha + dg;
  r.beta_relation = p.c_zero_column() ? p.beta - p.L0 * p.gamma * p.gamma : p.beta;
  r.gamma_ode = dg.derivative(kExtSlot) + Coeff(2 * p.c) * dg * p.gamma;
  return r;
}

ExtensionProfile make_profile(int m, int n, const Scalar& c, const Coeff& L0, int kappa,
                              const Coeff& A, const Coeff& omega) {
  if (m < 1 || n < 1) throw std::invalid_argument("extension indices m, n must be positive");
  if (!L0.is_constant() || !A.is_constant() || !omega.is_constant()) {
    throw std::invalid_argument("L0, A and omega must be constants");
  }
  if (c == 0 && L0.is_zero()) throw std::invalid_argument("c and L0 must not both be zero");
  ExtensionProfile p;
  p.m = m;
  p.n = n;
  p.c = c;
  p.kappa = kappa;
  p.A = A;
  p.omega = omega;
  const Coeff u = Coeff::var(kExtSlot);
  if (c == 0) {
    if (A.is_zero()) throw std::invalid_argument("A must be nonzero in the c = 0 column");
    p.L0 = L0;
    p.gamma = -A * u;
    p.alpha = A;
    p.beta = L0 * A * A * u * u;
  } else {
    p.l0_forced_zero = !L0.is_zero();
    p.L0 = Coeff(0);
    const Coeff t = tagged_trig(TaggedKind::T, kappa, c, kExtSlot);
    const Coeff s = tagged_trig(TaggedKind::S, kappa, c, kExtSlot);
    p.gamma = t.inverse();
    p.alpha = Coeff(c) / (s * s);
    p.beta = Coeff(0);
  }
  const ProfileResiduals r = profile_residuals(p);
  if (!r.ok()) {
    throw std::logic_error(fmt::format("profile relations fail: alpha {}, beta {}, gamma {}",
                                       to_string(r.alpha_relation), to_string(r.beta_relation),
                                       to_string(r.gamma_ode)));
  }
  return p;
}

}  // namespace hamext
