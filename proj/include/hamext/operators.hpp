// The extension operators U = p_u + (m/n^2) gamma X_L and
// W = U^2 + 2 omega gamma^-2 acting on polynomials over the extended space.
#pragma once

#include "hamext/ppoly.hpp"
#include "hamext/profile.hpp"

namespace hamext {

// Extended phase space for a base space and a profile.
SpacePtr extended_space(const PhaseSpace& base, const ExtensionProfile& profile);

// F must live on a space with an extension pair; L is lifted if needed.
PPoly apply_U(const ExtensionProfile& profile, const PPoly& l, const PPoly& f);
PPoly apply_U_power(const ExtensionProfile& profile, const PPoly& l, const PPoly& f, int k);
// Throws std::invalid_argument when gamma is identically zero.
PPoly apply_W(const ExtensionProfile& profile, const PPoly& l, const PPoly& f);

}  // namespace hamext
