#include "hamext/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

namespace hamext {

namespace {

std::vector<std::pair<int, int>> sparse(const Monomial& m) {
  std::vector<std::pair<int, int>> out;
  for (int g = 0; g < kGenCount; ++g) {
    if (m.e[g] != 0) out.emplace_back(g, m.e[g]);
  }
  return out;
}

}  // namespace

CompiledPPoly::CompiledPPoly(const PPoly& f, const ParamValues& params, double guard)
    : dims_(f.space().dims()), guard_(guard), params_(kGenCount, std::numeric_limits<double>::quiet_NaN()) {
  for (const auto& [p, x] : params) params_[gen_index(p)] = x.get_d();
  auto compile_poly = [](const Poly& p) {
    CPoly out;
    for (const auto& t : p.terms()) out.terms.push_back({t.coef.get_d(), sparse(t.mono)});
    return out;
  };
  auto check_params = [&](const std::vector<std::pair<int, int>>& powers) {
    for (const auto& [g, k] : powers) {
      if (is_param_gen(g) && std::isnan(params_[g])) {
        throw std::invalid_argument("no value for parameter " +
                                    std::string(kParamNames[g - kPositionSlots * kFnCount]));
      }
    }
  };
  for (const auto& [idx, c] : f.terms()) {
    Term t;
    t.c.num = compile_poly(c.numerator());
    t.c.den = {1.0, sparse(c.denominator_monomial())};
    for (const auto& a : c.atoms()) t.c.atoms.emplace_back(compile_poly(a.poly), a.power);
    for (const auto& m : t.c.num.terms) check_params(m.powers);
    check_params(t.c.den.powers);
    for (const auto& [ap, k] : t.c.atoms) {
      for (const auto& m : ap.terms) check_params(m.powers);
    }
    t.momentum.assign(idx.begin(), idx.end());
    terms_.push_back(std::move(t));
  }
}

double CompiledPPoly::eval(const Mono& m, const std::vector<double>& g) const {
  double r = m.coef;
  for (const auto& [gen, k] : m.powers) {
    const double x = g[gen];
    if (k > 0) {
      for (int i = 0; i < k; ++i) r *= x;
    } else {
      if (std::abs(x) < guard_) throw SampleRejected("point on a coefficient pole");
      for (int i = 0; i < -k; ++i) r /= x;
    }
  }
  return r;
}

double CompiledPPoly::eval(const CPoly& p, const std::vector<double>& g) const {
  double s = 0;
  for (const auto& m : p.terms) s += eval(m, g);
  return s;
}

double CompiledPPoly::operator()(const std::vector<double>& y) const {
  std::vector<double> g = params_;
  for (int i = 0; i < dims_; ++i) {
    const double x = y[i];
    g[gen_index(i, Fn::id)] = x;
    g[gen_index(i, Fn::sin)] = std::sin(x);
    g[gen_index(i, Fn::cos)] = std::cos(x);
    g[gen_index(i, Fn::sinh)] = std::sinh(x);
    g[gen_index(i, Fn::cosh)] = std::cosh(x);
  }
  double sum = 0;
  for (const auto& t : terms_) {
    double den = eval(t.c.den, g);
    for (const auto& [ap, k] : t.c.atoms) den *= std::pow(eval(ap, g), k);
    if (std::abs(den) < guard_) throw SampleRejected("near-singular denominator");
    double v = eval(t.c.num, g) / den;
    for (int i = 0; i < dims_; ++i) {
      for (int k = 0; k < t.momentum[i]; ++k) v *= y[dims_ + i];
    }
    sum += v;
  }
  return sum;
}

Field hamiltons_equations(const PPoly& h, const ParamValues& params, double guard) {
  const int d = h.space().dims();
  std::vector<CompiledPPoly> dq, dp;
  for (int i = 0; i < d; ++i) {
    dp.emplace_back(h.d_momentum(i), params, guard);
    dq.emplace_back(h.d_position(i), params, guard);
  }
  return [d, dq = std::move(dq), dp = std::move(dp)](double, const std::vector<double>& y, std::vector<double>& dy) {
    dy.resize(2 * d);
    for (int i = 0; i < d; ++i) {
      dy[i] = dp[i](y);
      dy[d + i] = -dq[i](y);
    }
  };
}

Field reversed(Field f) {
  return [f = std::move(f)](double t, const std::vector<double>& y, std::vector<double>& dy) {
    f(t, y, dy);
    for (double& v : dy) v = -v;
  };
}

void TrajectoryConfig::validate() const {
  if (!(t_end > 0)) throw std::invalid_argument("time span must be positive");
  if (!(rtol > 0) || !(atol > 0)) throw std::invalid_argument("tolerances must be positive");
  if (!(stride > 0)) throw std::invalid_argument("output stride must be positive");
  if (initial.q.empty() || initial.q.size() != initial.p.size()) {
    throw std::invalid_argument("initial point needs one momentum per position");
  }
  for (double v : initial.q) {
    if (!std::isfinite(v)) throw std::invalid_argument("initial point is not finite");
  }
  for (double v : initial.p) {
    if (!std::isfinite(v)) throw std::invalid_argument("initial point is not finite");
  }
}

namespace {

// Dormand-Prince 5(4) tableau and dense output weights.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

using Vec = std::vector<double>;

double error_norm(const Vec& err, const Vec& y0, const Vec& y1, double rtol, double atol) {
  double s = 0;
  for (std::size_t i = 0; i < err.size(); ++i) {
    const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    s += (err[i] / sc) * (err[i] / sc);
  }
  return std::sqrt(s / static_cast<double>(err.size()));
}

double initial_step(const Field& f, double t, const Vec& y, const Vec& k1, double rtol, double atol, double span) {
  const std::size_t n = y.size();
  double d0 = 0, d1n = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sc = atol + rtol * std::abs(y[i]);
    d0 += (y[i] / sc) * (y[i] / sc);
    d1n += (k1[i] / sc) * (k1[i] / sc);
  }
  d0 = std::sqrt(d0 / n);
  d1n = std::sqrt(d1n / n);
  double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
  h0 = std::min(h0, span);
  Vec y1(n), k2(n);
  for (std::size_t i = 0; i < n; ++i) y1[i] = y[i] + h0 * k1[i];
  try {
    f(t + h0, y1, k2);
  } catch (const SampleRejected&) {
    return h0 * 1e-3;
  }
  double d2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sc = atol + rtol * std::abs(y[i]);
    d2 += ((k2[i] - k1[i]) / sc) * ((k2[i] - k1[i]) / sc);
  }
  d2 = std::sqrt(d2 / n) / h0;
  const double mx = std::max(d1n, d2);
  const double h1 = mx <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / mx, 1.0 / 5);
  return std::min({100 * h0, h1, span});
}

}  // namespace

Trajectory integrate_adaptive(const TrajectoryConfig& cfg, const Field& f) {
  cfg.validate();
  const int d = static_cast<int>(cfg.initial.q.size());
  const std::size_t n = 2 * static_cast<std::size_t>(d);
  Trajectory out;
  out.dims = d;
  Vec y(cfg.initial.q);
  y.insert(y.end(), cfg.initial.p.begin(), cfg.initial.p.end());

  Vec k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), y1(n), err(n);
  try {
    f(0.0, y, k1);
  } catch (const SampleRejected& e) {
    throw std::invalid_argument(std::string("initial point is singular: ") + e.what());
  }
  out.t.push_back(0.0);
  out.y.push_back(y);

  double t = 0;
  const double T = cfg.t_end;
  long next_sample = 1;
  const long last_sample = static_cast<long>(std::ceil(T / cfg.stride - 1e-9));
  auto sample_time = [&](long k) { return std::min(T, static_cast<double>(k) * cfg.stride); };
  double h = initial_step(f, t, y, k1, cfg.rtol, cfg.atol, T);
  double err_prev = 1e-4;
  bool last_rejected = false;

  while (t < T) {
    if (out.steps + out.rejected >= cfg.max_steps) {
      out.status = IntegrationStatus::max_steps;
      out.diagnostic = fmt::format("step limit {} reached at t = {:.17g}", cfg.max_steps, t);
      return out;
    }
    if (h < 1e-14 * (std::abs(t) + 1)) {
      out.status = IntegrationStatus::step_underflow;
      out.diagnostic = fmt::format("step size underflow at t = {:.17g} (h = {:.3g}); likely near a singularity", t, h);
      return out;
    }
    if (t + h > T) h = T - t;

    bool singular = false;
    try {
      auto stage = [&](Vec& k, double ct, std::initializer_list<std::pair<double, const Vec*>> a) {
        for (std::size_t i = 0; i < n; ++i) {
          double s = 0;
          for (const auto& [c, v] : a) s += c * (*v)[i];
          tmp[i] = y[i] + h * s;
        }
        f(t + ct * h, tmp, k);
      };
      stage(k2, c2, {{a21, &k1}});
      stage(k3, c3, {{a31, &k1}, {a32, &k2}});
      stage(k4, c4, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
      stage(k5, c5, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
      stage(k6, 1.0, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
      for (std::size_t i = 0; i < n; ++i) {
        y1[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
      }
      f(t + h, y1, k7);
    } catch (const SampleRejected&) {
      singular = true;
    }

    double e = std::numeric_limits<double>::infinity();
    if (!singular) {
      for (std::size_t i = 0; i < n; ++i) {
        err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      }
      e = error_norm(err, y, y1, cfg.rtol, cfg.atol);
      for (double v : y1) {
        if (!std::isfinite(v)) e = std::numeric_limits<double>::infinity();
      }
    }

    if (e <= 1.0) {
      // Dense output on [t, t + h] for every sample time inside.
      const double t1 = t + h;
      while (next_sample <= last_sample && sample_time(next_sample) <= t1) {
        const double ts = sample_time(next_sample);
        const double th = (ts - t) / h;
        const double th1 = 1 - th;
        Vec ys(n);
        for (std::size_t i = 0; i < n; ++i) {
          const double r1 = y[i];
          const double r2 = y1[i] - y[i];
          const double r3 = h * k1[i] - r2;
          const double r4 = r2 - h * k7[i] - r3;
          const double r5 = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
          ys[i] = r1 + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
        }
        if (ts == t1) ys = y1;
        out.t.push_back(ts);
        out.y.push_back(std::move(ys));
        ++next_sample;
      }
      t = t1;
      y.swap(y1);
      k1.swap(k7);
      ++out.steps;
      // Lund-stabilized controller.
      double fac = 0.9 * std::pow(std::max(e, 1e-10), -0.7 / 5) * std::pow(err_prev, 0.4 / 5);
      fac = std::clamp(fac, 0.2, 10.0);
      if (last_rejected) fac = std::min(fac, 1.0);
      err_prev = std::max(e, 1e-4);
      h *= fac;
      last_rejected = false;
    } else {
      ++out.rejected;
      h *= singular || !std::isfinite(e) ? 0.25 : std::max(0.2, 0.9 * std::pow(e, -1.0 / 5));
      last_rejected = true;
    }
  }
  return out;
}

std::vector<Trajectory> integrate_batch(const std::vector<TrajectoryConfig>& cfgs, const Field& f) {
  std::vector<std::future<Trajectory>> jobs;
  for (const auto& c : cfgs) jobs.push_back(std::async(std::launch::async, [&c, &f] { return integrate_adaptive(c, f); }));
  std::vector<Trajectory> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

double DriftReport::max_drift() const {
  double m = 0;
  for (const auto& i : invariants) m = std::max(m, i.max_drift);
  return m;
}

DriftReport monitor_invariants(const Trajectory& traj, const std::vector<std::pair<std::string, PPoly>>& invariants,
                               const ParamValues& params) {
  DriftReport rep;
  rep.steps = traj.steps;
  rep.rejected = traj.rejected;
  for (const auto& [name, f] : invariants) {
    const CompiledPPoly c(f, params);
    InvariantDrift d;
    d.name = name;
    if (traj.y.empty()) {
      rep.invariants.push_back(d);
      continue;
    }
    d.initial = c(traj.y.front());
    d.relative = d.initial != 0;
    for (const auto& y : traj.y) {
      const double diff = std::abs(c(y) - d.initial);
      d.max_drift = std::max(d.max_drift, d.relative ? diff / std::abs(d.initial) : diff);
    }
    rep.invariants.push_back(d);
  }
  return rep;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const PhaseSpace& space,
                          const std::vector<std::pair<std::string, PPoly>>& invariants, const ParamValues& params) {
  std::vector<CompiledPPoly> cs;
  for (const auto& [name, f] : invariants) cs.emplace_back(f, params);
  os << "t";
  for (const auto& v : space.positions()) os << "," << v.name;
  for (const auto& v : space.positions()) os << "," << v.momentum;
  for (const auto& [name, f] : invariants) os << "," << name;
  os << "\n";
  for (std::size_t k = 0; k < traj.t.size(); ++k) {
    os << fmt::format("{:.17g}", traj.t[k]);
    for (double v : traj.y[k]) os << fmt::format(",{:.17g}", v);
    for (const auto& c : cs) os << fmt::format(",{:.17g}", c(traj.y[k]));
    os << "\n";
  }
}

}  // namespace hamext
