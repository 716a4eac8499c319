#include "hamext/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "hamext/catalog.hpp"
#include "hamext/dynamics.hpp"
#include "hamext/parse.hpp"
#include "hamext/verifier.hpp"

namespace hamext {

namespace {

const std::set<std::string> kCommands{"build", "verify", "simulate", "catalog", "solve-linear"};

std::optional<Param> param_by_name(const std::string& name) {
  for (int i = 0; i < kParamCount; ++i) {
    if (kParamNames[i] == name) return static_cast<Param>(i);
  }
  return std::nullopt;
}

Scalar exact_value(const std::string& text, const std::string& what) {
  ParsedCoeff p;
  try {
    p = parse_coeff(text);
  } catch (const ParseError& e) {
    throw ConfigError(what + ": " + e.what());
  }
  const std::optional<Scalar> v = p.value.is_zero() ? std::optional<Scalar>(0) : p.value.as_scalar();
  if (!v) throw ConfigError(what + " must be a number, got '" + text + "'");
  return *v;
}

// JSON scalar as expression text; numbers keep their shortest decimal form.
std::string text_of(const nlohmann::json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return v.dump();
  throw ConfigError("'" + key + "' must be a number or a string");
}

struct Built {
  ModelSpec spec;
  ParamValues given;  // numeric values for parameters left symbolic
};

Built build_model(const JobConfig& cfg, bool with_integral) {
  auto value = [&](const std::string& name) -> std::optional<Scalar> {
    if (name == "omega" && cfg.omega) return exact_value(*cfg.omega, "omega");
    if (name == "L0" && cfg.L0) return exact_value(*cfg.L0, "L0");
    if (name == "c" && cfg.c) return exact_value(*cfg.c, "c");
    auto it = cfg.params.find(name);
    if (it != cfg.params.end()) return exact_value(it->second, "parameter " + name);
    return std::nullopt;
  };
  auto coeff = [&](const std::string& name, Param p) -> Coeff {
    auto v = value(name);
    return v ? Coeff(*v) : Coeff::param(p);
  };

  if (cfg.model == "inline") {
    if (!cfg.V || !cfg.eta) throw ConfigError("inline model needs both V and eta");
    for (const auto& [k, v] : cfg.params) {
      if (!param_by_name(k)) throw ConfigError("unknown parameter '" + k + "'");
    }
    ParsedCoeff V, eta;
    try {
      V = parse_coeff(*cfg.V);
    } catch (const ParseError& e) {
      throw ConfigError(std::string("V: ") + e.what());
    }
    try {
      eta = parse_coeff(*cfg.eta);
    } catch (const ParseError& e) {
      throw ConfigError(std::string("eta: ") + e.what());
    }
    GeneratorKind kind;
    try {
      kind = combined_kind(V.kind, eta.kind);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    const Scalar c = cfg.c ? exact_value(*cfg.c, "c") : Scalar(0);
    const Coeff L0 = cfg.L0 ? Coeff(exact_value(*cfg.L0, "L0")) : (c == 0 ? Coeff::param(Param::L0) : Coeff(0));
    const Coeff A = value("A") ? Coeff(*value("A")) : Coeff(1);
    Built b{inline_model(cfg.m, cfg.n, V.value, eta.value, kind, c, L0, cfg.kappa, A, coeff("omega", Param::omega),
                         with_integral),
            {}};
    for (const auto& [k, v] : cfg.params) b.given[*param_by_name(k)] = exact_value(v, "parameter " + k);
    return b;
  }

  const auto& entries = catalog_entries();
  auto entry = std::find_if(entries.begin(), entries.end(), [&](const CatalogEntry& e) { return e.name == cfg.model; });
  if (entry == entries.end()) throw ConfigError("unknown model '" + cfg.model + "'");
  for (const auto& [k, v] : cfg.params) {
    if (k == "m" || k == "n" ||
        std::find(entry->parameters.begin(), entry->parameters.end(), k) == entry->parameters.end()) {
      throw ConfigError("model " + cfg.model + " has no parameter '" + k + "'");
    }
  }
  if (cfg.c) throw ConfigError("--c applies to inline models only");
  if (cfg.model == "ttw") {
    if (cfg.L0) throw ConfigError("model ttw has no parameter 'L0'");
    return {ttw_model(cfg.m, cfg.n, coeff("alpha1", Param::alpha1), coeff("alpha2", Param::alpha2),
                      coeff("omega", Param::omega), with_integral),
            {}};
  }
  const Coeff A = value("A") ? Coeff(*value("A")) : Coeff(1);
  if (cfg.model == "cage") {
    return {cage_model(cfg.m, cfg.n, coeff("L0", Param::L0), coeff("b", Param::b), coeff("omega", Param::omega), A,
                       with_integral),
            {}};
  }
  return {harmonic_model(cfg.m, cfg.n, coeff("L0", Param::L0), coeff("omega", Param::omega), A, with_integral), {}};
}

void emit(const JobConfig& cfg, const std::string& doc, std::ostream& out) {
  if (cfg.out.empty()) {
    out << doc;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + cfg.out);
  f << doc;
}

int cmd_build(const JobConfig& cfg, std::ostream& out) {
  const Built b = build_model(cfg, true);
  nlohmann::json j;
  j["metadata"] = construction_metadata(b.spec);
  j["H"] = to_string(b.spec.H);
  j["K"] = to_string(b.spec.K->K);
  emit(cfg, j.dump(2) + "\n", out);
  return kExitOk;
}

int cmd_verify(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.samples < 1) throw ConfigError("samples must be positive");
  if (cfg.precision < 20 || cfg.precision > 1000) throw ConfigError("precision must be between 20 and 1000 digits");
  const Built b = build_model(cfg, true);
  VerifyOptions o;
  o.sampling.samples = cfg.samples;
  o.sampling.seed = cfg.seed;
  o.sampling.digits = cfg.precision;
  o.tol = cfg.tol ? *cfg.tol : std::pow(10.0, -(cfg.precision - 10));
  o.params = b.given;
  if (cfg.inject_defect) {
    ExtensionProfile bad = b.spec.profile;
    bad.omega = bad.omega + Coeff::ratio(1, 1000);
    o.k_override = build_modified_K(bad, b.spec.seed).K;
  }
  const VerificationReport r = verify_model(b.spec, o);
  emit(cfg, r.to_json().dump(2) + "\n", out);
  if (!r.all_passed()) {
    for (const auto& c : r.claims) {
      if (!c.passed) err << "claim failed: " << c.id << "\n";
    }
    return kExitClaim;
  }
  return kExitOk;
}

int cmd_simulate(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  const Built b = build_model(cfg, true);
  const ModelSpec& s = b.spec;
  const auto e = s.H.space_ptr();
  std::vector<std::pair<std::string, PPoly>> inv{
      {"H", s.H}, {"K", s.K->K}, {"L", s.seed.L().lift(e)}, {"p_u_control", PPoly::momentum(e, e->extension_slot())}};
  std::vector<PPoly> polys;
  for (const auto& [k, f] : inv) polys.push_back(f);
  const ParamValues params = complete_params(b.given, used_params(polys), cfg.seed);

  TrajectoryConfig tc;
  tc.initial.q = cfg.q0.empty() ? std::vector<double>{1.0, 1.0} : cfg.q0;
  tc.initial.p = cfg.p0.empty() ? std::vector<double>{0.3, 0.2} : cfg.p0;
  tc.t_end = cfg.t_end;
  tc.rtol = tc.atol = cfg.tol ? *cfg.tol : 1e-12;
  tc.stride = cfg.stride;
  if (tc.initial.q.size() != 2 || tc.initial.p.size() != 2) {
    throw ConfigError("initial point needs two positions and two momenta");
  }
  try {
    tc.validate();
    std::vector<double> y0 = tc.initial.q;
    y0.insert(y0.end(), tc.initial.p.begin(), tc.initial.p.end());
    for (const auto& [k, f] : inv) CompiledPPoly(f, params)(y0);
  } catch (const SampleRejected& x) {
    throw ConfigError(std::string("initial point is not regular: ") + x.what());
  } catch (const std::invalid_argument& x) {
    throw ConfigError(x.what());
  }

  const Trajectory t = integrate_adaptive(tc, hamiltons_equations(s.H, params));
  const DriftReport d = monitor_invariants(t, inv, params);

  if (!cfg.out.empty()) {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + cfg.out);
    write_trajectory_csv(f, t, *e, inv, params);
  }
  nlohmann::json j;
  j["model"] = s.name;
  j["status"] = t.ok() ? "ok" : (t.status == IntegrationStatus::step_underflow ? "step_underflow" : "max_steps");
  if (!t.ok()) j["diagnostic"] = t.diagnostic;
  j["t_final"] = t.t.empty() ? 0.0 : t.t.back();
  j["steps"] = d.steps;
  j["rejected_steps"] = d.rejected;
  j["tolerance"] = tc.rtol;
  for (const auto& [p, x] : params) j["parameters"][std::string(kParamNames[static_cast<int>(p)])] = to_string(x);
  double conserved = 0;
  for (const auto& i : d.invariants) {
    j["invariants"].push_back(
        {{"name", i.name}, {"initial", i.initial}, {"max_drift", i.max_drift}, {"relative", i.relative}});
    if (i.name != "p_u_control") conserved = std::max(conserved, i.max_drift);
  }
  j["conserved_max_drift"] = conserved;
  if (!t.y.empty()) {
    const auto& y = t.y.back();
    double dist = 0;
    for (int i = 0; i < 2; ++i) {
      dist = std::max({dist, std::abs(y[i] - tc.initial.q[i]), std::abs(y[2 + i] - tc.initial.p[i])});
    }
    j["final_state"] = y;
    j["return_distance"] = dist;
  }
  out << j.dump(2) << "\n";
  if (!t.ok()) {
    err << "integration aborted: " << t.diagnostic << "\n";
    return kExitIntegration;
  }
  return kExitOk;
}

int cmd_catalog(std::ostream& out) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& e : catalog_entries()) j.push_back({{"name", e.name}, {"summary", e.summary}, {"parameters", e.parameters}});
  j.push_back({{"name", "inline"},
               {"summary", "L = p^2/2 + V(q), G = eta(q) p from expression text"},
               {"parameters", {"m", "n", "V", "eta", "c", "L0", "kappa", "A", "omega"}}});
  out << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_solve_linear(const JobConfig& cfg, std::ostream& out) {
  LinearSeedInputs in;
  in.c = cfg.c ? exact_value(*cfg.c, "c") : Scalar(0);
  if (cfg.L0) in.L0 = Coeff(exact_value(*cfg.L0, "L0"));
  for (const auto& [k, v] : cfg.params) {
    const Coeff x(exact_value(v, "parameter " + k));
    if (k == "a1") {
      in.a1 = x;
    } else if (k == "a2") {
      in.a2 = x;
    } else if (k == "c1") {
      in.c1 = x;
    } else if (k == "c2") {
      in.c2 = x;
    } else if (k == "L0") {
      in.L0 = x;
    } else {
      throw ConfigError("solve-linear has no parameter '" + k + "' (a1, a2, c1, c2, L0)");
    }
  }
  if (cfg.linear_case) {
    for (LinearCase c : {LinearCase::trig, LinearCase::linear_eta, LinearCase::constant_eta}) {
      if (to_string(c) == *cfg.linear_case) in.requested = c;
    }
    if (!in.requested) throw ConfigError("unknown case '" + *cfg.linear_case + "' (c!=0, c=0,a1!=0, c=0,a1=0)");
  }
  LinearSeedFamily f = [&] {
    try {
      return solve_linear_seed(in);
    } catch (const SeedConditionFailed&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }();
  nlohmann::json j;
  j["case"] = to_string(f.which);
  j["eta"] = to_string(f.eta);
  j["V"] = to_string(f.V);
  j["residual_eta"] = to_string(f.residual_eta);
  j["residual_V"] = to_string(f.residual_V);
  j["certified"] = f.residual_eta.is_zero() && f.residual_V.is_zero();
  out << j.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

JobConfig job_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  JobConfig c;
  auto str = [](const nlohmann::json& v, const std::string& k) {
    if (!v.is_string()) throw ConfigError("'" + k + "' must be a string");
    return v.get<std::string>();
  };
  auto integer = [](const nlohmann::json& v, const std::string& k) {
    if (!v.is_number_integer()) throw ConfigError("'" + k + "' must be an integer");
    return v.get<long long>();
  };
  auto real = [](const nlohmann::json& v, const std::string& k) {
    if (!v.is_number()) throw ConfigError("'" + k + "' must be a number");
    return v.get<double>();
  };
  auto reals = [&](const nlohmann::json& v, const std::string& k) {
    if (!v.is_array()) throw ConfigError("'" + k + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) out.push_back(real(x, k));
    return out;
  };
  for (const auto& [k, v] : j.items()) {
    if (k == "command") {
      c.command = str(v, k);
    } else if (k == "model") {
      c.model = str(v, k);
    } else if (k == "m") {
      c.m = static_cast<int>(integer(v, k));
    } else if (k == "n") {
      c.n = static_cast<int>(integer(v, k));
    } else if (k == "omega") {
      c.omega = text_of(v, k);
    } else if (k == "c") {
      c.c = text_of(v, k);
    } else if (k == "L0") {
      c.L0 = text_of(v, k);
    } else if (k == "kappa") {
      c.kappa = static_cast<int>(integer(v, k));
    } else if (k == "params") {
      if (!v.is_object()) throw ConfigError("'params' must be an object");
      for (const auto& [pk, pv] : v.items()) c.params[pk] = text_of(pv, pk);
    } else if (k == "V") {
      c.V = str(v, k);
    } else if (k == "eta") {
      c.eta = str(v, k);
    } else if (k == "case") {
      c.linear_case = str(v, k);
    } else if (k == "samples") {
      c.samples = static_cast<int>(integer(v, k));
    } else if (k == "tol") {
      c.tol = real(v, k);
    } else if (k == "precision") {
      c.precision = static_cast<int>(integer(v, k));
    } else if (k == "seed") {
      const long long s = integer(v, k);
      if (s < 0) throw ConfigError("'seed' must be non-negative");
      c.seed = static_cast<std::uint64_t>(s);
    } else if (k == "q0") {
      c.q0 = reals(v, k);
    } else if (k == "p0") {
      c.p0 = reals(v, k);
    } else if (k == "t_end") {
      c.t_end = real(v, k);
    } else if (k == "stride") {
      c.stride = real(v, k);
    } else if (k == "out") {
      c.out = str(v, k);
    } else {
      throw ConfigError("unknown config field '" + k + "'");
    }
  }
  return c;
}

int run_job(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (!kCommands.count(cfg.command)) throw ConfigError("unknown command '" + cfg.command + "'");
    if (cfg.command == "catalog") return cmd_catalog(out);
    if (cfg.command == "solve-linear") return cmd_solve_linear(cfg, out);
    if (cfg.command == "build") return cmd_build(cfg, out);
    if (cfg.command == "verify") return cmd_verify(cfg, out, err);
    return cmd_simulate(cfg, out, err);
  } catch (const SeedConditionFailed& e) {
    err << "seed condition failed: " << e.what() << "\n";
    return kExitSeed;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Modified extensions of natural Hamiltonians: build, verify, simulate"};
  JobConfig flags;
  std::string config_path;
  std::vector<std::string> params;
  std::string q0, p0;
  double tol = 0;
  app.add_option("command", flags.command, "build | verify | simulate | catalog | solve-linear")->required();
  app.add_option("--config", config_path, "JSON job file; explicit flags override its fields");
  auto* o_model = app.add_option("--model", flags.model, "ttw | cage | harmonic | inline");
  auto* o_m = app.add_option("--m", flags.m);
  auto* o_n = app.add_option("--n", flags.n);
  auto* o_omega = app.add_option("--omega", flags.omega);
  auto* o_kappa = app.add_option("--kappa", flags.kappa);
  auto* o_c = app.add_option("--c", flags.c);
  auto* o_L0 = app.add_option("--L0", flags.L0);
  auto* o_param = app.add_option("--param", params, "k=v, repeatable");
  auto* o_V = app.add_option("--V", flags.V, "inline potential, e.g. 'L0/4*q^2 + b/q^2'");
  auto* o_eta = app.add_option("--eta", flags.eta, "inline seed factor, e.g. 'q'");
  auto* o_case = app.add_option("--case", flags.linear_case, "solve-linear case");
  auto* o_samples = app.add_option("--samples", flags.samples);
  auto* o_tol = app.add_option("--tol", tol, "verify: commutation bound; simulate: integrator tolerance");
  auto* o_precision = app.add_option("--precision", flags.precision, "decimal digits for sampled residuals");
  auto* o_seed = app.add_option("--seed", flags.seed);
  auto* o_q0 = app.add_option("--q0", q0, "initial positions, comma separated");
  auto* o_p0 = app.add_option("--p0", p0, "initial momenta, comma separated");
  auto* o_t = app.add_option("--t-end", flags.t_end);
  auto* o_stride = app.add_option("--stride", flags.stride);
  auto* o_out = app.add_option("--out", flags.out);
  auto* o_defect = app.add_flag("--inject-defect", flags.inject_defect, "test only: perturb omega in K");

  std::vector<std::string> rev(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(rev.begin(), rev.end());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  JobConfig cfg;
  try {
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw ConfigError("cannot read " + config_path);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(f);
      } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON in ") + config_path + ": " + e.what());
      }
      cfg = job_from_json(j);
    }
    cfg.command = flags.command;
    auto split = [](const std::string& s) {
      std::vector<double> v;
      std::stringstream ss(s);
      std::string item;
      while (std::getline(ss, item, ',')) {
        try {
          std::size_t used = 0;
          v.push_back(std::stod(item, &used));
          if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
          throw ConfigError("not a number: '" + item + "'");
        }
      }
      return v;
    };
    if (o_model->count()) cfg.model = flags.model;
    if (o_m->count()) cfg.m = flags.m;
    if (o_n->count()) cfg.n = flags.n;
    if (o_omega->count()) cfg.omega = flags.omega;
    if (o_kappa->count()) cfg.kappa = flags.kappa;
    if (o_c->count()) cfg.c = flags.c;
    if (o_L0->count()) cfg.L0 = flags.L0;
    if (o_V->count()) cfg.V = flags.V;
    if (o_eta->count()) cfg.eta = flags.eta;
    if (o_case->count()) cfg.linear_case = flags.linear_case;
    if (o_samples->count()) cfg.samples = flags.samples;
    if (o_tol->count()) cfg.tol = tol;
    if (o_precision->count()) cfg.precision = flags.precision;
    if (o_seed->count()) cfg.seed = flags.seed;
    if (o_q0->count()) cfg.q0 = split(q0);
    if (o_p0->count()) cfg.p0 = split(p0);
    if (o_t->count()) cfg.t_end = flags.t_end;
    if (o_stride->count()) cfg.stride = flags.stride;
    if (o_out->count()) cfg.out = flags.out;
    if (o_defect->count()) cfg.inject_defect = true;
    if (o_param->count()) {
      for (const auto& kv : params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("--param expects k=v, got '" + kv + "'");
        cfg.params[kv.substr(0, eq)] = kv.substr(eq + 1);
      }
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  return run_job(cfg, out, err);
}

}  // namespace hamext
