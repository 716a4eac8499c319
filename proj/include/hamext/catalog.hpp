// Built-in models: the TTW family, the caged anisotropic oscillator and a
// harmonic seed, plus the printed lambda = 1 integral and the polar map.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hamext/extension.hpp"

namespace hamext {

struct ModelSpec {
  std::string name;
  int m = 1;  // lambda = m/n in lowest terms
  int n = 1;
  std::map<std::string, Coeff> parameters;
  ExtensionProfile profile;
  SeedSolution seed;
  PPoly H;                           // modified extended Hamiltonian
  std::optional<ModifiedIntegral> K;  // filled unless construction skipped it
  std::vector<std::string> coordinate_maps;
};

// c1 = (alpha1 + alpha2)/(2 lambda^2), c2 = (alpha2 - alpha1)/(2 lambda^2).
ModelSpec ttw_model(int m, int n, const Coeff& alpha1 = Coeff::param(Param::alpha1),
                    const Coeff& alpha2 = Coeff::param(Param::alpha2),
                    const Coeff& omega = Coeff::param(Param::omega), bool build_integral = true);
// Same family with the potential constants c1, c2 given directly.
ModelSpec ttw_model_c(int m, int n, const Coeff& c1 = Coeff::param(Param::c1),
                      const Coeff& c2 = Coeff::param(Param::c2), const Coeff& omega = Coeff::param(Param::omega),
                      bool build_integral = true);
ModelSpec cage_model(int m, int n, const Coeff& L0 = Coeff::param(Param::L0),
                     const Coeff& b = Coeff::param(Param::b), const Coeff& omega = Coeff::param(Param::omega),
                     const Coeff& A = Coeff(1), bool build_integral = true);
// L = p^2/2 + L0 q^2, G = p, c = 0.
ModelSpec harmonic_model(int m, int n, const Coeff& L0 = Coeff::param(Param::L0),
                         const Coeff& omega = Coeff::param(Param::omega), const Coeff& A = Coeff(1),
                         bool build_integral = true);

PPoly ttw_lagrangian(const SpacePtr& space, const Coeff& c1, const Coeff& c2);

// The printed cubic integral of the lambda = 1 modified TTW system, on the
// given extended space (q circular, u linear).
PPoly golden_K21(const SpacePtr& space, const Coeff& alpha1 = Coeff::param(Param::alpha1),
                 const Coeff& alpha2 = Coeff::param(Param::alpha2),
                 const Coeff& omega = Coeff::param(Param::omega));
PPoly golden_K21_c(const SpacePtr& space, const Coeff& c1, const Coeff& c2, const Coeff& omega);

// Base system L = p^2/2 + V(q) with seed G = eta(q) p on a position of the
// given kind; throws SeedConditionFailed when the seed condition fails.
ModelSpec inline_model(int m, int n, const Coeff& V, const Coeff& eta, GeneratorKind kind, const Scalar& c,
                       const Coeff& L0, int kappa, const Coeff& A = Coeff(1),
                       const Coeff& omega = Coeff::param(Param::omega), bool build_integral = true);

struct CatalogEntry {
  std::string name;
  std::string summary;
  std::vector<std::string> parameters;
};
const std::vector<CatalogEntry>& catalog_entries();

enum class MapDirection { polar_to_cartesian, cartesian_to_polar };

// (r, theta, p_r, p_theta) <-> (x, y, p_x, p_y). Throws std::domain_error
// at the origin.
PhasePoint<double> polar_cartesian_map(const PhasePoint<double>& x, MapDirection dir);

}  // namespace hamext
