#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sladm/admissibility.hpp"
#include "sladm/error.hpp"
#include "sladm/potential.hpp"

namespace sladm::cli {

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Flat `key = value` text. Values are numbers or double-quoted strings;
/// keys have at most one dot ("problem.q"). '#' starts a comment.
std::map<std::string, std::string> parse_key_values(std::string_view text);

struct RunConfig {
  std::string preset;

  // problem
  std::string q;
  std::string q1;    // with q1pp and q2: q = q1 + q2, kappa tables enabled
  std::string q1pp;
  std::string q2;
  std::string mu = "1";
  std::string theta = "1";
  std::string f = "exp(-x^2)";
  double p = 2.0;

  // numerics
  double lo = -10.0;
  double hi = 10.0;
  int samples = 401;
  int max_exponent = 20;
  double tol_H = 0.05;
  double tol_agree = 0.05;
  int stability_trials = 0;
  std::uint64_t seed = 0;
  std::vector<double> probes;  // empty: the default schedule

  // output
  std::string report = "report.json";
  std::string profile = "profile.csv";
};

/// Known presets: constant, quadratic, periodic, example6.
const std::vector<std::string>& preset_names();

/// Fills every problem field of the preset; throws ConfigError if unknown.
void apply_preset(RunConfig& cfg, std::string_view name);

/// Applies `preset` first (if present), then every other key. Unknown keys
/// and malformed values throw ConfigError.
RunConfig config_from_map(const std::map<std::string, std::string>& kv, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

/// "1,2.5,-3" -> {1, 2.5, -3}.
std::vector<double> parse_probe_list(std::string_view text);

/// Everything a command needs, built from a RunConfig.
struct Problem {
  localscale::PotentialPtr q;
  hardy::HardyWeights weights;
  realline::ScalarFn f;
  std::string mu_source;
  std::string theta_source;
};

Problem make_problem(const RunConfig& cfg);

admissibility::AdmissibilityConfig numerics(const RunConfig& cfg);

}  // namespace sladm::cli
