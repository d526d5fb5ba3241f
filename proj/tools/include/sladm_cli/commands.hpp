#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sladm_cli/config.hpp"

namespace sladm::cli {

struct OutputFile {
  std::string name;
  std::string content;
};

struct CommandResult {
  nlohmann::json report;
  std::vector<OutputFile> files;  // report JSON is added by run_cli
  int exit_code = 0;
};

/// Profile of d, d^, q*, nu (and kappa1, kappa2 for split potentials).
CommandResult cmd_scale(const RunConfig& cfg);
/// Fundamental system on [lo, hi]: u, v, rho and structural diagnostics.
CommandResult cmd_fss(const RunConfig& cfg);
/// y = G f on [lo, hi] with residual and the weighted norm ratio.
CommandResult cmd_solve(const RunConfig& cfg);
/// Full admissibility report; exit 0 / 1 / 2 as the verdict.
CommandResult cmd_verdict(const RunConfig& cfg);
/// Both claims about the built-in example end to end. Exit 0 when every
/// tolerance holds, 1 otherwise.
CommandResult cmd_example6(const RunConfig& cfg);

/// Parses arguments, runs one subcommand, writes files unless --json-only
/// and prints the report. Configuration errors exit with 3.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace sladm::cli
