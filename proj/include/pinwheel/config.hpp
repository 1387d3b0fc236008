#pragma once
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "pinwheel/grid.hpp"
#include "pinwheel/params.hpp"
#include "pinwheel/solver.hpp"

namespace pinwheel {

struct ConfigKey {
  std::string name;
  std::string default_value;
  std::string units;  // "-" when dimensionless
  std::string help;
};

// Every recognized key. Environment overrides use PINWHEEL_<NAME> with the name upper-cased.
const std::vector<ConfigKey>& config_schema();
inline constexpr const char* kEnvPrefix = "PINWHEEL_";

struct RunConfig {
  std::map<std::string, std::string> values;  // resolved key -> text, all schema keys present

  Params params;
  int grid_n = 128;
  double grid_half_width = 8.0;
  std::vector<double> R_grid;  // empty: module default
  double init_R = 0;           // 0: best radius of an ansatz scan
  std::string init = "ansatz";
  bool cutoff = false;
  SolveOptions solve;
  ContinuationSchedule schedule;
  std::string out = "out";
  std::uint64_t seed = 0;
  int threads = 1;
  DumpFormat format = DumpFormat::text;

  // Parses "key = value" lines; '#' starts a comment. Unknown or repeated keys throw ParameterError.
  static RunConfig parse(std::istream& is, const std::string& origin = "<config>");
  static RunConfig load(const std::string& path);
  static RunConfig defaults();

  void set(const std::string& key, const std::string& value);
  // Applies PINWHEEL_* variables from the given environment block (nullptr: process environment).
  void apply_env(char** envp = nullptr);
  void resolve();  // re-derives the typed fields from `values` and validates
  Grid grid() const;
  void echo(std::ostream& os) const;
};

}  // namespace pinwheel
