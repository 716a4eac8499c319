#include "hamext/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include <Eigen/SVD>

namespace hamext {

namespace {

// dF/dq_0 .. dF/dq_{d-1}, dF/dp_0 .. dF/dp_{d-1}.
std::vector<PPoly> gradient(const PPoly& f) {
  std::vector<PPoly> g;
  const int d = f.space().dims();
  for (int i = 0; i < d; ++i) g.push_back(f.d_position(i));
  for (int i = 0; i < d; ++i) g.push_back(f.d_momentum(i));
  return g;
}

template <class T>
std::vector<T> evaluate_all(const std::vector<PPoly>& fs, const PhasePoint<T>& x, const Valuation<T>& v) {
  std::vector<T> out;
  out.reserve(fs.size());
  for (const auto& f : fs) out.push_back(evaluate_ppoly(f, x, v));
  return out;
}

PhasePoint<BigFloat> to_big(const PhasePoint<double>& x, mpfr_prec_t bits) {
  PhasePoint<BigFloat> r;
  for (double v : x.q) r.q.emplace_back(v, bits);
  for (double v : x.p) r.p.emplace_back(v, bits);
  return r;
}

ClaimResult claim(std::string id, bool passed, std::optional<bool> symbolic = std::nullopt) {
  ClaimResult c;
  c.id = std::move(id);
  c.passed = passed;
  c.symbolic = symbolic;
  return c;
}

double norm(const std::vector<BigFloat>& g, mpfr_prec_t bits) {
  BigFloat s(0.0, bits);
  for (const auto& x : g) s = s + x * x;
  return sqrt(s).to_double();
}

}  // namespace

std::vector<Param> used_params(const std::vector<PPoly>& fs) {
  std::set<int> seen;
  auto scan = [&](const Poly& p) {
    for (int i = 0; i < kParamCount; ++i) {
      if (p.uses_generator(gen_index(static_cast<Param>(i)))) seen.insert(i);
    }
  };
  for (const auto& f : fs) {
    for (const auto& [idx, c] : f.terms()) {
      scan(c.numerator());
      scan(c.denominator());
    }
  }
  std::vector<Param> out;
  for (int i : seen) out.push_back(static_cast<Param>(i));
  return out;
}

ParamValues complete_params(ParamValues given, const std::vector<Param>& needed, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x5eedULL);
  std::uniform_int_distribution<int> pick(500, 1500);
  // Draw for every parameter in a fixed order so values do not depend on
  // which ones happen to be needed.
  std::array<Scalar, kParamCount> drawn;
  for (int i = 0; i < kParamCount; ++i) drawn[i] = reduced(pick(rng), 1000);
  for (Param p : needed) {
    if (!given.count(p)) given[p] = drawn[static_cast<int>(p)];
  }
  return given;
}

std::vector<PhasePoint<double>> sample_points(int dims, const SampleConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> pos(cfg.pos_lo, cfg.pos_hi);
  std::uniform_real_distribution<double> mom(cfg.mom_lo, cfg.mom_hi);
  std::vector<PhasePoint<double>> out;
  for (int s = 0; s < cfg.samples; ++s) {
    PhasePoint<double> x;
    for (int i = 0; i < dims; ++i) x.q.push_back(pos(rng));
    for (int i = 0; i < dims; ++i) x.p.push_back(mom(rng));
    out.push_back(std::move(x));
  }
  return out;
}

SymbolicCommute symbolic_commute_check(const PPoly& h, const PPoly& k) {
  PPoly r = poisson_bracket(h, k);
  const bool zero = r.is_zero();
  return {zero, std::move(r)};
}

NumericStats numeric_commute_check(const PPoly& h, const PPoly& k, const ParamValues& params,
                                   const SampleConfig& cfg) {
  return numeric_commute_check(h, params, k, params, cfg);
}

NumericStats numeric_commute_check(const PPoly& h, const ParamValues& hp, const PPoly& k, const ParamValues& kp,
                                   const SampleConfig& cfg) {
  require_same_space(h, k, "numeric_commute_check");
  const int d = h.space().dims();
  const auto gh = gradient(h);
  const auto gk = gradient(k);
  const auto vh = param_valuation<BigFloat>(hp, cfg.digits);
  const auto vk = param_valuation<BigFloat>(kp, cfg.digits);
  NumericStats st;
  for (const auto& x : sample_points(d, cfg)) {
    try {
      const auto xb = to_big(x, vh.bits());
      const auto a = evaluate_all(gh, xb, vh);
      const auto b = evaluate_all(gk, xb, vk);
      BigFloat br(0.0, vh.bits());
      for (int i = 0; i < d; ++i) br = br + a[i] * b[d + i] - a[d + i] * b[i];
      const double res = abs(br).to_double() / (1.0 + norm(a, vh.bits()) * norm(b, vh.bits()));
      st.max_value = std::max(st.max_value, res);
      ++st.accepted;
    } catch (const SampleRejected&) {
      ++st.rejected;
    }
  }
  return st;
}

RankStats independence_rank(const std::vector<PPoly>& fs, const ParamValues& params, const SampleConfig& cfg,
                            double rel_threshold) {
  if (fs.size() < 1) throw std::invalid_argument("independence_rank needs at least one function");
  for (const auto& f : fs) require_same_space(fs.front(), f, "independence_rank");
  const int d = fs.front().space().dims();
  std::vector<std::vector<PPoly>> grads;
  for (const auto& f : fs) grads.push_back(gradient(f));
  const auto v = param_valuation<BigFloat>(params, cfg.digits);
  RankStats st;
  for (const auto& x : sample_points(d, cfg)) {
    try {
      const auto xb = to_big(x, v.bits());
      Eigen::MatrixXd J(static_cast<Eigen::Index>(fs.size()), 2 * d);
      for (std::size_t r = 0; r < fs.size(); ++r) {
        const auto row = evaluate_all(grads[r], xb, v);
        for (int c = 0; c < 2 * d; ++c) J(static_cast<Eigen::Index>(r), c) = row[c].to_double();
        const double rn = J.row(static_cast<Eigen::Index>(r)).norm();
        if (rn > 0) J.row(static_cast<Eigen::Index>(r)) /= rn;
      }
      const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(J).singularValues();
      int rank = 0;
      const double top = sv.size() > 0 ? sv(0) : 0.0;
      for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (top > 0 && sv(i) > rel_threshold * top) ++rank;
      }
      ++st.histogram[rank];
      ++st.accepted;
      if (rank == static_cast<int>(fs.size())) ++st.full_rank;
    } catch (const SampleRejected&) {
      ++st.rejected;
    }
  }
  return st;
}

GoldenComparison golden_compare(const PPoly& generated, const PPoly& golden, const ParamValues& params,
                                const SampleConfig& cfg) {
  require_same_space(generated, golden, "golden_compare");
  if (golden.is_zero()) throw std::invalid_argument("golden polynomial is identically zero");
  GoldenComparison out;
  for (const auto& [idx, g0] : golden.terms()) {
    const Coeff f0 = generated.coeff(idx);
    if (f0.is_zero()) continue;
    out.symbolic_proportional = (generated.scaled(g0) - golden.scaled(f0)).is_zero();
    if (out.symbolic_proportional) out.symbolic_constant = (f0 / g0).as_scalar();
    break;
  }
  const auto v = param_valuation<BigFloat>(params, cfg.digits);
  std::vector<std::pair<double, double>> vals;
  for (const auto& x : sample_points(generated.space().dims(), cfg)) {
    try {
      const auto xb = to_big(x, v.bits());
      vals.emplace_back(evaluate_ppoly(generated, xb, v).to_double(), evaluate_ppoly(golden, xb, v).to_double());
      ++out.accepted;
    } catch (const SampleRejected&) {
      ++out.rejected;
    }
  }
  double num = 0, den = 0, scale = 0;
  for (const auto& [g, f] : vals) {
    num += g * f;
    den += f * f;
    scale = std::max(scale, std::abs(g));
  }
  out.constant = den > 0 ? num / den : 0.0;
  for (const auto& [g, f] : vals) {
    out.max_deviation = std::max(out.max_deviation, std::abs(g - out.constant * f) / (scale > 0 ? scale : 1.0));
  }
  return out;
}

NumericStats fd_crosscheck(const PPoly& f, const std::vector<PhasePoint<double>>& points,
                           const ParamValues& params, double step) {
  const int d = f.space().dims();
  const auto grad = gradient(f);
  const auto v = param_valuation<double>(params, 17);
  NumericStats st;
  for (const auto& x : points) {
    try {
      const auto exact = evaluate_all(grad, x, v);
      double worst = 0;
      for (int c = 0; c < 2 * d; ++c) {
        auto shifted = [&](double k) {
          PhasePoint<double> y = x;
          (c < d ? y.q[c] : y.p[c - d]) += k * step;
          return evaluate_ppoly(f, y, v);
        };
        const double fd = (-shifted(2) + 8 * shifted(1) - 8 * shifted(-1) + shifted(-2)) / (12 * step);
        worst = std::max(worst, std::abs(fd - exact[c]) / std::max(std::abs(exact[c]), 1.0));
      }
      st.max_value = std::max(st.max_value, worst);
      ++st.accepted;
    } catch (const SampleRejected&) {
      ++st.rejected;
    }
  }
  return st;
}

NumericStats fd_crosscheck(const PPoly& f, const ParamValues& params, const SampleConfig& cfg, double step) {
  return fd_crosscheck(f, sample_points(f.space().dims(), cfg), params, step);
}

NumericStats polar_cage_check(const SampleConfig& cfg, double alpha1, double alpha2, double omega) {
  // TTW: q = 2 theta, u = r. Cage (2, 1): q = 2x, u = y, with L0 = omega/4,
  // b = alpha1 and the cage omega equal to alpha2.
  const ModelSpec ttw = ttw_model(1, 1, Coeff::param(Param::alpha1), Coeff::param(Param::alpha2),
                                  Coeff::param(Param::omega), false);
  const ModelSpec cage = cage_model(2, 1, Coeff::param(Param::L0), Coeff::param(Param::b),
                                    Coeff::param(Param::omega), Coeff(1), false);
  const ParamValues tp{{Param::alpha1, Scalar(alpha1)}, {Param::alpha2, Scalar(alpha2)}, {Param::omega, Scalar(omega)}};
  const ParamValues cp{{Param::L0, Scalar(omega) / 4}, {Param::b, Scalar(alpha1)}, {Param::omega, Scalar(alpha2)}};
  const auto vt = param_valuation<BigFloat>(tp, cfg.digits);
  const auto vc = param_valuation<BigFloat>(cp, cfg.digits);
  NumericStats st;
  for (const auto& polar : sample_points(2, cfg)) {
    try {
      const PhasePoint<double> cart = polar_cartesian_map(polar, MapDirection::polar_to_cartesian);
      const PhasePoint<double> xt{{2 * polar.q[1], polar.q[0]}, {polar.p[1] / 2, polar.p[0]}};
      const PhasePoint<double> xc{{2 * cart.q[0], cart.q[1]}, {cart.p[0] / 2, cart.p[1]}};
      const double a = evaluate_ppoly(ttw.H, to_big(xt, vt.bits()), vt).to_double();
      const double b = evaluate_ppoly(cage.H, to_big(xc, vc.bits()), vc).to_double();
      st.max_value = std::max(st.max_value, std::abs(a - b) / std::max(std::abs(a), 1e-300));
      ++st.accepted;
    } catch (const SampleRejected&) {
      ++st.rejected;
    }
  }
  return st;
}

bool VerificationReport::all_passed() const {
  return std::all_of(claims.begin(), claims.end(), [](const ClaimResult& c) { return c.passed; });
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j;
  j["seed"] = seed;
  j["precision_digits"] = digits;
  j["metadata"] = metadata;
  j["parameters"] = parameters;
  j["claims"] = nlohmann::json::array();
  for (const auto& c : claims) {
    nlohmann::json e;
    e["id"] = c.id;
    e["passed"] = c.passed;
    if (c.symbolic) e["symbolic_zero"] = *c.symbolic;
    if (c.max_residual) e["max_residual"] = *c.max_residual;
    e["samples"] = c.samples;
    e["rejected_samples"] = c.rejected;
    if (!c.rank_histogram.empty()) {
      nlohmann::json h = nlohmann::json::object();
      for (const auto& [r, n] : c.rank_histogram) h[std::to_string(r)] = n;
      e["rank_histogram"] = h;
    }
    if (c.constant) e["constant"] = *c.constant;
    if (c.exact_constant) e["exact_constant"] = *c.exact_constant;
    if (!c.note.empty()) e["note"] = c.note;
    j["claims"].push_back(e);
  }
  j["all_passed"] = all_passed();
  return j;
}

nlohmann::json construction_metadata(const ModelSpec& spec) {
  nlohmann::json j;
  j["model"] = spec.name;
  j["lambda"] = std::to_string(spec.m) + "/" + std::to_string(spec.n);
  j["profile"] = {{"m", spec.profile.m},
                  {"n", spec.profile.n},
                  {"c", to_string(spec.profile.c)},
                  {"kappa", spec.profile.kappa},
                  {"column", spec.profile.column_name()},
                  {"L0_forced_zero", spec.profile.l0_forced_zero}};
  j["H_degree"] = spec.H.degree();
  j["H_terms"] = spec.H.size();
  if (spec.K) {
    j["effective_m"] = spec.K->effective.m;
    j["effective_n"] = spec.K->effective.n;
    j["parity_branch"] = spec.K->odd_branch ? "odd" : "even";
    j["W_exponent"] = spec.K->exponent;
    j["G_index"] = spec.K->g_index;
    j["K_degree"] = spec.K->K.degree();
    j["K_terms"] = spec.K->K.size();
  }
  j["coordinate_maps"] = spec.coordinate_maps;
  return j;
}

VerificationReport verify_model(const ModelSpec& spec, const VerifyOptions& opts) {
  if (!spec.K) throw std::invalid_argument("verify_model needs a model with its integral built");
  const PPoly& H = spec.H;
  const PPoly K = opts.k_override ? *opts.k_override : spec.K->K;
  const PPoly L = spec.seed.L().lift(H.space_ptr());
  const SampleConfig& cfg = opts.sampling;

  VerificationReport rep;
  rep.seed = cfg.seed;
  rep.digits = cfg.digits;
  rep.metadata = construction_metadata(spec);
  const ParamValues params = complete_params(opts.params, used_params({H, K, L}), cfg.seed);
  for (const auto& [p, x] : params) rep.parameters[std::string(kParamNames[static_cast<int>(p)])] = to_string(x);

  const SymbolicCommute sym = symbolic_commute_check(H, K);
  ClaimResult c1 = claim("symbolic_commutation", sym.zero, sym.zero);
  if (!sym.zero) c1.note = "residual has " + std::to_string(sym.residual.size()) + " momentum terms";
  rep.claims.push_back(c1);

  const NumericStats num = numeric_commute_check(H, K, params, cfg);
  const double tol = opts.tol;
  ClaimResult c2 = claim("numeric_commutation", num.accepted >= 30 && num.max_value < tol);
  c2.max_residual = num.max_value;
  c2.samples = num.accepted;
  c2.rejected = num.rejected;
  rep.claims.push_back(c2);

  const RankStats rank = independence_rank({H, K, L}, params, cfg);
  ClaimResult c3 = claim("independence_rank", rank.accepted >= 30 && rank.full_fraction() >= opts.rank_fraction);
  c3.samples = rank.accepted;
  c3.rejected = rank.rejected;
  c3.rank_histogram = rank.histogram;
  c3.note = "functions: H, K, L";
  rep.claims.push_back(c3);

  const PPoly gn = recursion_Gn(spec.seed, spec.K->g_index);
  const bool nontrivial = !apply_XL(spec.seed.L(), gn).is_zero();
  ClaimResult c4 = claim("nontrivial_extension", nontrivial, nontrivial);
  c4.note = "X_L(G_n) not identically zero";
  rep.claims.push_back(c4);

  if (spec.name == "ttw" && spec.m == 1 && spec.n == 1) {
    const PPoly golden = golden_K21_c(H.space_ptr(), spec.parameters.at("c1"), spec.parameters.at("c2"),
                                      spec.parameters.at("omega"));
    const GoldenComparison g = golden_compare(K, golden, params, cfg);
    ClaimResult c5 = claim("golden_K21", g.accepted >= 30 && g.max_deviation < 1e-12 && g.symbolic_proportional);
    c5.symbolic = g.symbolic_proportional;
    c5.max_residual = g.max_deviation;
    c5.samples = g.accepted;
    c5.rejected = g.rejected;
    c5.constant = g.constant;
    if (g.symbolic_constant) c5.exact_constant = to_string(*g.symbolic_constant);
    rep.claims.push_back(c5);
  }

  for (const auto& [name, f] : {std::pair<const char*, const PPoly*>{"fd_crosscheck_H", &H}, {"fd_crosscheck_K", &K}}) {
    const NumericStats fd = fd_crosscheck(*f, params, cfg);
    ClaimResult c = claim(name, fd.accepted >= 30 && fd.max_value < opts.fd_tol);
    c.max_residual = fd.max_value;
    c.samples = fd.accepted;
    c.rejected = fd.rejected;
    rep.claims.push_back(c);
  }
  return rep;
}

}  // namespace hamext
