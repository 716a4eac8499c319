// Extension profiles: the functions alpha, beta, gamma of the extension
// variable and the tagged trigonometric functions they are built from.
#pragma once

#include <string>

#include "hamext/expr.hpp"
#include "hamext/phase_space.hpp"

namespace hamext {

inline constexpr int kBaseSlot = 0;
inline constexpr int kExtSlot = 1;

inline Scalar reduced(long num, long den) {
  Scalar r(num, den);
  r.canonicalize();
  return r;
}

enum class TaggedKind { S, C, T };

// Numeric tagged functions for any real tag kappa. T throws
// std::domain_error at zeros of C.
double tagged_trig(TaggedKind kind, double kappa, double x);

// Symbolic tagged function of scale * v, v the position in `slot`.
// kappa must be -1, 0 or 1, and for kappa != 0 the scale must be +-1.
Coeff tagged_trig(TaggedKind kind, int kappa, const Scalar& scale, int slot);

// Kind of position generator a tag requires.
GeneratorKind kind_for_tag(int tag);

struct ExtensionProfile {
  int m = 1;
  int n = 1;
  Scalar c;
  Coeff L0;
  int kappa = 0;
  Coeff A;
  Coeff omega;
  Coeff alpha;
  Coeff beta;
  Coeff gamma;
  bool l0_forced_zero = false;

  bool c_zero_column() const { return c == 0; }
  std::string column_name() const { return c_zero_column() ? "c=0" : "c!=0"; }
  Scalar ratio_squared() const { return reduced(m * m, n * n); }  // m^2/n^2
  Scalar u_operator_factor() const { return reduced(m, n * n); }  // m/n^2
  PositionVar extension_var() const;
  // Same profile with different (m, n).
  ExtensionProfile with_mn(int m2, int n2) const;
};

// Builds the profile and checks alpha = -gamma', beta = L0 gamma^2 (c = 0)
// or 0 (c != 0), and gamma'' + 2 c gamma' gamma = 0. When c != 0, L0 is set
// to zero. Rejects c = L0 = 0.
ExtensionProfile make_profile(int m, int n, const Scalar& c, const Coeff& L0, int kappa,
                              const Coeff& A = Coeff::param(Param::A),
                              const Coeff& omega = Coeff::param(Param::omega));

// Residuals of the three profile relations; all zero for a valid profile.
struct ProfileResiduals {
  Coeff alpha_relation;
  Coeff beta_relation;
  Coeff gamma_ode;
  bool ok() const { return alpha_relation.is_zero() && beta_relation.is_zero() && gamma_ode.is_zero(); }
};
ProfileResiduals profile_residuals(const ExtensionProfile& p);

}  // namespace hamext
