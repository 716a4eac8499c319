#include "hamext/catalog.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace hamext {

namespace {

constexpr int q = kBaseSlot;

void require_coprime(int m, int n) {
  if (m < 1 || n < 1) throw std::invalid_argument("m and n must be positive");
  if (std::gcd(m, n) != 1) throw std::invalid_argument(fmt::format("m/n = {}/{} is not in lowest terms", m, n));
}

PPoly kinetic(const SpacePtr& s) { return PPoly::momentum(s, q, 2).scaled(Coeff::ratio(1, 2)); }

ModelSpec assemble(std::string name, int m, int n, std::map<std::string, Coeff> params,
                   const ExtensionProfile& profile, SeedSolution seed, std::vector<std::string> maps,
                   bool build_integral) {
  PPoly H = build_modified_H(profile, seed.L());
  std::optional<ModifiedIntegral> K;
  if (build_integral) K = build_modified_K(profile, seed);
  return {std::move(name), m, n, std::move(params), profile, std::move(seed), std::move(H), std::move(K),
          std::move(maps)};
}

}  // namespace

PPoly ttw_lagrangian(const SpacePtr& space, const Coeff& c1, const Coeff& c2) {
  const Coeff s = Coeff::fn(q, Fn::sin);
  return kinetic(space) + PPoly::constant(space, (c1 + c2 * Coeff::fn(q, Fn::cos)) / (s * s));
}

ModelSpec ttw_model_c(int m, int n, const Coeff& c1, const Coeff& c2, const Coeff& omega, bool build_integral) {
  require_coprime(m, n);
  const SpacePtr base = base_space_for_tag(1);
  SeedSolution seed(ttw_lagrangian(base, c1, c2), PPoly::momentum(base, q).scaled(Coeff::fn(q, Fn::sin)), 1,
                    Coeff(0));
  const ExtensionProfile profile = make_profile(2 * m, n, 1, Coeff(0), 0, Coeff::param(Param::A), omega);
  return assemble("ttw", m, n, {{"c1", c1}, {"c2", c2}, {"omega", omega}}, profile, std::move(seed),
                  {fmt::format("q = 2*({}/{})*theta", m, n), "u = r", "p_q = p_theta*" + fmt::format("{}/{}", n, 2 * m)},
                  build_integral);
}

ModelSpec ttw_model(int m, int n, const Coeff& alpha1, const Coeff& alpha2, const Coeff& omega,
                    bool build_integral) {
  require_coprime(m, n);
  const Coeff inv = Coeff(Scalar(n * n, 2 * m * m));
  ModelSpec spec = ttw_model_c(m, n, inv * (alpha1 + alpha2), inv * (alpha2 - alpha1), omega, build_integral);
  spec.parameters["alpha1"] = alpha1;
  spec.parameters["alpha2"] = alpha2;
  return spec;
}

ModelSpec cage_model(int m, int n, const Coeff& L0, const Coeff& b, const Coeff& omega, const Coeff& A,
                     bool build_integral) {
  require_coprime(m, n);
  const SpacePtr base = base_space_for_tag(0);
  const Coeff x = Coeff::var(q);
  const PPoly L = kinetic(base) + PPoly::constant(base, L0 * Coeff::ratio(1, 4) * x * x + b / (x * x));
  SeedSolution seed(L, PPoly::momentum(base, q).scaled(x), 0, L0);
  const ExtensionProfile profile = make_profile(m, n, 0, L0, 0, A, omega);
  return assemble("cage", m, n, {{"L0", L0}, {"b", b}, {"omega", omega}, {"A", A}}, profile, std::move(seed),
                  {fmt::format("x = ({}/{})*q", n, m), fmt::format("p_x = ({}/{})*p_q", m, n)}, build_integral);
}

ModelSpec harmonic_model(int m, int n, const Coeff& L0, const Coeff& omega, const Coeff& A, bool build_integral) {
  require_coprime(m, n);
  const SpacePtr base = base_space_for_tag(0);
  const Coeff x = Coeff::var(q);
  SeedSolution seed(kinetic(base) + PPoly::constant(base, L0 * x * x), PPoly::momentum(base, q), 0, L0);
  const ExtensionProfile profile = make_profile(m, n, 0, L0, 0, A, omega);
  return assemble("harmonic", m, n, {{"L0", L0}, {"omega", omega}, {"A", A}}, profile, std::move(seed), {},
                  build_integral);
}

ModelSpec inline_model(int m, int n, const Coeff& V, const Coeff& eta, GeneratorKind kind, const Scalar& c,
                       const Coeff& L0, int kappa, const Coeff& A, const Coeff& omega, bool build_integral) {
  if (m < 1 || n < 1) throw std::invalid_argument("m and n must be positive");
  if (c != 0 && !L0.is_zero()) {
    throw std::invalid_argument("L0 must be 0 when c != 0; a constant shift of V absorbs it");
  }
  const SpacePtr base = PhaseSpace::base({"q", "p_q", kind});
  base->validate(V);
  base->validate(eta);
  SeedSolution seed(kinetic(base) + PPoly::constant(base, V), PPoly::momentum(base, q).scaled(eta), c, L0);
  const ExtensionProfile profile = make_profile(m, n, c, L0, kappa, A, omega);
  return assemble("inline", m, n, {{"V", V}, {"eta", eta}, {"c", Coeff(c)}, {"L0", L0}, {"A", A}, {"omega", omega}},
                  profile, std::move(seed), {}, build_integral);
}

PPoly golden_K21_c(const SpacePtr& space, const Coeff& c1, const Coeff& c2, const Coeff& omega) {
  const int us = space->extension_slot();
  const Coeff s = Coeff::fn(q, Fn::sin);
  const Coeff c = Coeff::fn(q, Fn::cos);
  const Coeff u = Coeff::var(us);
  const Coeff iu = u.inverse();
  const PPoly pq = PPoly::momentum(space, q);
  const PPoly pu = PPoly::momentum(space, us);
  PPoly k = (pq * pu * pu).scaled(s);
  k += (pu * pq * pq).scaled(Coeff(4) * iu * c);
  k += pq.pow(3).scaled(Coeff(-4) * iu * iu * s);
  k += pu.scaled(Coeff(4) * iu * (c2 * (c * c + Coeff(1)) + Coeff(2) * c1 * c) / (s * s));
  k += pq.scaled(Coeff(2) * iu * iu * (omega * u.pow(4) * s * s - Coeff(4) * (c1 + c2 * c)) / s);
  return k;
}

PPoly golden_K21(const SpacePtr& space, const Coeff& alpha1, const Coeff& alpha2, const Coeff& omega) {
  const Coeff half = Coeff::ratio(1, 2);
  return golden_K21_c(space, half * (alpha1 + alpha2), half * (alpha2 - alpha1), omega);
}

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries{
      {"ttw", "TTW family, lambda = m/n, built as the (2m, n) modified extension with c = 1",
       {"m", "n", "alpha1", "alpha2", "omega"}},
      {"cage", "caged anisotropic oscillator, (m, n) modified extension with c = 0",
       {"m", "n", "L0", "b", "omega", "A"}},
      {"harmonic", "harmonic seed L = p^2/2 + L0 q^2, G = p, c = 0", {"m", "n", "L0", "omega", "A"}},
  };
  return entries;
}

PhasePoint<double> polar_cartesian_map(const PhasePoint<double>& x, MapDirection dir) {
  if (x.q.size() != 2 || x.p.size() != 2) throw std::invalid_argument("polar map needs a 2-dimensional point");
  if (dir == MapDirection::polar_to_cartesian) {
    const double r = x.q[0];
    const double th = x.q[1];
    if (r <= 0) throw std::domain_error("polar map is singular at r = 0");
    const double c = std::cos(th);
    const double s = std::sin(th);
    return {{r * c, r * s}, {c * x.p[0] - s * x.p[1] / r, s * x.p[0] + c * x.p[1] / r}};
  }
  const double r = std::hypot(x.q[0], x.q[1]);
  if (r == 0) throw std::domain_error("polar map is singular at r = 0");
  return {{r, std::atan2(x.q[1], x.q[0])},
          {(x.q[0] * x.p[0] + x.q[1] * x.p[1]) / r, x.q[0] * x.p[1] - x.q[1] * x.p[0]}};
}

}  // namespace hamext
