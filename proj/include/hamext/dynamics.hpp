// Numerical Hamiltonian flow with an adaptive Dormand-Prince 5(4) pair and
// conservation monitoring.
#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "hamext/verifier.hpp"

namespace hamext {

// A PPoly flattened to double coefficients for fast repeated evaluation.
class CompiledPPoly {
 public:
  CompiledPPoly(const PPoly& f, const ParamValues& params, double guard = kDefaultGuard);
  int dims() const { return dims_; }
  // y = (q_0..q_{d-1}, p_0..p_{d-1}). Throws SampleRejected at poles.
  double operator()(const std::vector<double>& y) const;

 private:
  struct Mono {
    double coef = 1;
    std::vector<std::pair<int, int>> powers;  // (generator, exponent)
  };
  struct CPoly {
    std::vector<Mono> terms;
  };
  struct CCoeff {
    CPoly num;
    Mono den;
    std::vector<std::pair<CPoly, int>> atoms;
  };
  struct Term {
    CCoeff c;
    std::vector<int> momentum;
  };

  double eval(const CPoly& p, const std::vector<double>& g) const;
  double eval(const Mono& m, const std::vector<double>& g) const;

  int dims_;
  double guard_;
  std::vector<double> params_;  // generator values of the parameters
  std::vector<Term> terms_;
};

using Field = std::function<void(double t, const std::vector<double>& y, std::vector<double>& dy)>;

// (q', p') = (dH/dp, -dH/dq) from symbolic derivatives of H.
Field hamiltons_equations(const PPoly& h, const ParamValues& params, double guard = kDefaultGuard);

// The field with time reversed: y' = -f(y).
Field reversed(Field f);

struct TrajectoryConfig {
  PhasePoint<double> initial;
  double t_end = 1;
  double rtol = 1e-10;
  double atol = 1e-10;
  double stride = 0.1;  // spacing of dense output samples
  long max_steps = 10'000'000;
  void validate() const;  // throws std::invalid_argument
};

enum class IntegrationStatus { ok, step_underflow, max_steps };

struct Trajectory {
  int dims = 0;
  std::vector<double> t;
  std::vector<std::vector<double>> y;  // (q, p) per sample
  long steps = 0;
  long rejected = 0;
  IntegrationStatus status = IntegrationStatus::ok;
  std::string diagnostic;
  bool ok() const { return status == IntegrationStatus::ok; }
};

// Dormand-Prince 5(4) with step-size control on the mixed error norm and
// the free 4th-order dense output at the stride points. A step size below
// 1e-14 (|t| + 1), or too many steps, ends the run with the samples so far.
Trajectory integrate_adaptive(const TrajectoryConfig& cfg, const Field& f);

// Runs independent configurations on separate threads.
std::vector<Trajectory> integrate_batch(const std::vector<TrajectoryConfig>& cfgs, const Field& f);

struct InvariantDrift {
  std::string name;
  double initial = 0;
  double max_drift = 0;  // relative to |initial|, absolute when initial is 0
  bool relative = true;
};

struct DriftReport {
  std::vector<InvariantDrift> invariants;
  long steps = 0;
  long rejected = 0;
  double max_drift() const;
};

DriftReport monitor_invariants(const Trajectory& traj, const std::vector<std::pair<std::string, PPoly>>& invariants,
                               const ParamValues& params);

// Header row t, positions, momenta, invariants; 17 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const PhaseSpace& space,
                          const std::vector<std::pair<std::string, PPoly>>& invariants, const ParamValues& params);

}  // namespace hamext
