#include "hamext/operators.hpp"

#include <stdexcept>

namespace hamext {

SpacePtr extended_space(const PhaseSpace& base, const ExtensionProfile& profile) {
  return PhaseSpace::extend(base, profile.extension_var());
}

PPoly apply_U(const ExtensionProfile& profile, const PPoly& l, const PPoly& f) {
  if (!f.space().has_extension()) throw std::invalid_argument("apply_U: phase space has no extension pair");
  const int slot = f.space().extension_slot();
  PPoly r = f.times_momentum(slot);
  if (profile.gamma.is_zero()) return r;
  const PPoly x = apply_XL(l, f);
  if (!x.is_zero()) r += x.scaled(Coeff(profile.u_operator_factor()) * profile.gamma);
  return r;
}

PPoly apply_U_power(const ExtensionProfile& profile, const PPoly& l, const PPoly& f, int k) {
  if (k < 0) throw std::invalid_argument("apply_U_power: negative exponent");
  PPoly r = f;
  for (int i = 0; i < k; ++i) r = apply_U(profile, l, r);
  return r;
}

PPoly apply_W(const ExtensionProfile& profile, const PPoly& l, const PPoly& f) {
  if (profile.gamma.is_zero()) throw std::invalid_argument("apply_W: gamma is identically zero");
  const Coeff g2 = (profile.gamma * profile.gamma).inverse();
  return apply_U_power(profile, l, f, 2) + f.scaled(Coeff(2) * profile.omega * g2);
}

}  // namespace hamext
