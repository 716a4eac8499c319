// Batch front door: build | verify | simulate | catalog | solve-linear.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace hamext {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitSeed = 2, kExitClaim = 3, kExitIntegration = 4 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct JobConfig {
  std::string command;
  std::string model = "ttw";
  int m = 1;
  int n = 1;
  // Exact values are kept as expression text (integers, decimals, a/b).
  std::optional<std::string> omega;
  std::optional<std::string> c;
  std::optional<std::string> L0;
  int kappa = 0;
  std::map<std::string, std::string> params;
  std::optional<std::string> V;    // inline model
  std::optional<std::string> eta;  // inline model
  std::optional<std::string> linear_case;
  int samples = 100;
  std::optional<double> tol;
  int precision = 50;
  std::uint64_t seed = 1;
  std::vector<double> q0;
  std::vector<double> p0;
  double t_end = 10;
  double stride = 0.1;
  std::string out;
  bool inject_defect = false;
};

// Strict reader: unknown keys and wrong types raise ConfigError.
JobConfig job_from_json(const nlohmann::json& j);

// Runs one job and returns its exit code. Documents go to `out` (or to the
// --out file), diagnostics to `err`.
int run_job(const JobConfig& cfg, std::ostream& out, std::ostream& err);

// Parses command-line arguments (args[0] is the program name), merges an
// optional --config file under explicit flags, and runs the job.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hamext
