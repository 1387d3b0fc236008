#pragma once
#include <iosfwd>
#include <string>
#include <vector>

#include "pinwheel/config.hpp"

namespace pinwheel {

enum ExitCode { kExitOk = 0, kExitVerifyFailed = 1, kExitConfig = 2, kExitNumerical = 3 };

struct SuiteResult {
  std::string name;
  bool pass = false;
  std::string detail;
};
std::vector<SuiteResult> run_verification(const RunConfig& cfg);

// Subcommands write their artifacts under cfg.out and a summary to `out`.
int cmd_groundstate(const RunConfig& cfg, std::ostream& out);
int cmd_orbit(const RunConfig& cfg, std::ostream& out);
int cmd_verify(const RunConfig& cfg, std::ostream& out);
int cmd_ansatz_scan(const RunConfig& cfg, std::ostream& out);
int cmd_solve(const RunConfig& cfg, std::ostream& out);
int cmd_continuate(const RunConfig& cfg, std::ostream& out);
int cmd_report(const RunConfig& cfg, std::ostream& out);

// Full front end: argument parsing, config loading, env overrides, exit-code mapping.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pinwheel
