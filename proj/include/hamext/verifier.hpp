// Exact and sampled checks of commutation, functional independence, golden
// integrals and symbolic derivatives, collected into a JSON report.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hamext/catalog.hpp"
#include "hamext/ppoly.hpp"

namespace hamext {

using ParamValues = std::map<Param, Scalar>;

// Parameters appearing in any coefficient.
std::vector<Param> used_params(const std::vector<PPoly>& fs);

// Fills every missing parameter in `needed` with a rational in [1/2, 3/2]
// drawn from the seed. Given values are kept.
ParamValues complete_params(ParamValues given, const std::vector<Param>& needed, std::uint64_t seed);

template <class T>
Valuation<T> param_valuation(const ParamValues& params, int digits, double guard = kDefaultGuard) {
  Valuation<T> v(digits, guard);
  for (const auto& [p, x] : params) v.set_param(p, v.real(x));
  return v;
}

struct SampleConfig {
  int samples = 100;
  std::uint64_t seed = 1;
  int digits = kDefaultDigits;
  double pos_lo = 0.3;
  double pos_hi = 1.2;
  double mom_lo = -1.0;
  double mom_hi = 1.0;
};

// Positions uniform in [pos_lo, pos_hi], momenta uniform in [mom_lo, mom_hi].
std::vector<PhasePoint<double>> sample_points(int dims, const SampleConfig& cfg);

struct SymbolicCommute {
  bool zero = false;
  PPoly residual;
};
SymbolicCommute symbolic_commute_check(const PPoly& h, const PPoly& k);

struct NumericStats {
  double max_value = 0;  // largest residual or error over accepted samples
  int accepted = 0;
  int rejected = 0;
};

// max |{H,K}| / (1 + |grad H| |grad K|) with the gradients evaluated at
// cfg.digits and combined numerically.
NumericStats numeric_commute_check(const PPoly& h, const PPoly& k, const ParamValues& params,
                                   const SampleConfig& cfg);
// Same with separate parameter values for H and K.
NumericStats numeric_commute_check(const PPoly& h, const ParamValues& hp, const PPoly& k, const ParamValues& kp,
                                   const SampleConfig& cfg);

struct RankStats {
  std::map<int, int> histogram;  // rank -> sample count
  int accepted = 0;
  int rejected = 0;
  int full_rank = 0;  // samples with rank == number of functions
  double full_fraction() const { return accepted == 0 ? 0.0 : static_cast<double>(full_rank) / accepted; }
};

// Gradient rows are normalized; singular values below rel_threshold *
// largest count as zero.
RankStats independence_rank(const std::vector<PPoly>& fs, const ParamValues& params, const SampleConfig& cfg,
                            double rel_threshold = 1e-8);

struct GoldenComparison {
  double constant = 0;       // least-squares lambda with generated ~ lambda * golden
  double max_deviation = 0;  // max |generated - lambda golden| / max |generated|
  int accepted = 0;
  int rejected = 0;
  bool symbolic_proportional = false;
  std::optional<Scalar> symbolic_constant;  // exact lambda when it is a number
};
// Throws std::invalid_argument when golden is identically zero.
GoldenComparison golden_compare(const PPoly& generated, const PPoly& golden, const ParamValues& params,
                                const SampleConfig& cfg);

// Symbolic partial derivatives against 5-point central differences in
// double precision; error normalized by max(|exact|, 1).
NumericStats fd_crosscheck(const PPoly& f, const std::vector<PhasePoint<double>>& points,
                           const ParamValues& params, double step = 1e-4);
NumericStats fd_crosscheck(const PPoly& f, const ParamValues& params, const SampleConfig& cfg,
                           double step = 1e-4);

// Max relative difference between the lambda = 1 TTW form and the cage
// (2, 1) form of the modified Hamiltonian at mapped polar points.
NumericStats polar_cage_check(const SampleConfig& cfg, double alpha1, double alpha2, double omega);

struct ClaimResult {
  std::string id;
  bool passed = false;
  std::optional<bool> symbolic;
  std::optional<double> max_residual;
  int samples = 0;
  int rejected = 0;
  std::map<int, int> rank_histogram;
  std::optional<double> constant;
  std::optional<std::string> exact_constant;
  std::string note;
};

struct VerificationReport {
  std::uint64_t seed = 0;
  int digits = kDefaultDigits;
  nlohmann::json metadata = nlohmann::json::object();
  std::map<std::string, std::string> parameters;
  std::vector<ClaimResult> claims;
  bool all_passed() const;
  nlohmann::json to_json() const;
};

struct VerifyOptions {
  SampleConfig sampling;
  double tol = 1e-40;           // numeric commutation bound
  double fd_tol = 1e-6;
  double rank_fraction = 0.95;
  ParamValues params;           // missing ones are drawn from the seed
  // Built K is replaced by this one when set (defect injection).
  std::optional<PPoly> k_override;
};

// Construction metadata for a model (effective m, n, branch, degrees).
nlohmann::json construction_metadata(const ModelSpec& spec);

// Runs every claim on a model that carries its modified integral.
VerificationReport verify_model(const ModelSpec& spec, const VerifyOptions& opts);

}  // namespace hamext
