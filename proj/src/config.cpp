#include "pinwheel/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "pinwheel/errors.hpp"
#include "pinwheel/numerics.hpp"

extern char** environ;

namespace pinwheel {

const std::vector<ConfigKey>& config_schema() {
  static const std::vector<ConfigKey> keys = {
      {"d", "2", "-", "spatial dimension of the grid problem (1..3); ansatz quadrature accepts any d >= 1"},
      {"p", "2", "-", "nonlinearity exponent, 1 < p < d/(d-2) when d >= 3"},
      {"beta", "-1", "-", "coupling constant, <= 0"},
      {"ell", "2", "-", "number of components"},
      {"m", "6", "-", "order of the rotation group, even"},
      {"V_inf", "1", "energy", "limit value of the potential"},
      {"potential", "none", "-", "none | exp_tail | table"},
      {"pot_A", "0", "energy", "exp_tail amplitude A in V = V_inf + A exp(-kappa sqrt(V_inf) r)"},
      {"pot_kappa", "0", "-", "exp_tail rate multiplier kappa"},
      {"pot_table", "", "length:energy", "table samples r:V separated by commas, linear in between"},
      {"stencil", "isotropic", "-", "isotropic | standard Laplacian in the (x0, x1) plane"},
      {"grid_n", "128", "nodes", "nodes per axis"},
      {"grid_half_width", "16", "length", "Dirichlet walls at +-half_width"},
      {"R_min", "0", "length", "scan start; 0 selects the module default grid"},
      {"R_max", "0", "length", "scan end"},
      {"R_count", "25", "-", "scan points, geometric spacing"},
      {"cutoff", "false", "-", "ansatz-scan: evaluate the truncated (segregated) bound"},
      {"init", "ansatz", "-", "solve initializer: ansatz | centered"},
      {"init_R", "0", "length", "ansatz radius; 0 picks the best radius of an ansatz scan"},
      {"max_iters", "3000", "-", "solver iteration cap"},
      {"method", "conjugate", "-", "steepest | conjugate"},
      {"step", "backtracking", "-", "backtracking | fixed"},
      {"fixed_step", "0.5", "-", "step length for the fixed rule"},
      {"armijo", "1e-4", "-", "Armijo factor in (0, 1)"},
      {"tol", "1e-5", "-", "relative gradient tolerance over pinwheel states"},
      {"perturbation", "0", "-", "relative amplitude of seeded noise on the initial state"},
      {"drift_every", "50", "iterations", "cadence of drift checks"},
      {"betas", "-1,-4,-16,-64,-256", "-", "continuation schedule, strictly monotone, all <= 0"},
      {"warm_start", "true", "-", "continuation starts each beta from the previous solution"},
      {"out", "out", "path", "output directory"},
      {"seed", "0", "-", "seed for random perturbations and property suites"},
      {"threads", "1", "-", "worker threads for parallel sections"},
      {"format", "text", "-", "field dump format: text | binary"},
  };
  return keys;
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const ConfigKey* find_key(const std::string& name) {
  for (const auto& k : config_schema())
    if (k.name == name) return &k;
  return nullptr;
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw ParameterError("config key '" + key + "': not a number: '" + v + "'");
  return x;
}

long long to_int(const std::string& key, const std::string& v) {
  long long x = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw ParameterError("config key '" + key + "': not an integer: '" + v + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ParameterError("config key '" + key + "': not a boolean: '" + v + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

RunConfig RunConfig::defaults() {
  RunConfig c;
  for (const auto& k : config_schema()) c.values[k.name] = k.default_value;
  c.resolve();
  return c;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (!find_key(key)) throw ParameterError("unknown config key '" + key + "'");
  values[key] = trim(value);
}

RunConfig RunConfig::parse(std::istream& is, const std::string& origin) {
  RunConfig c;
  for (const auto& k : config_schema()) c.values[k.name] = k.default_value;
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    const std::string where = origin + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw ParameterError(where + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    if (!find_key(key)) throw ParameterError(where + ": unknown config key '" + key + "'");
    if (!seen.insert(key).second) throw ParameterError(where + ": repeated config key '" + key + "'");
    c.values[key] = trim(line.substr(eq + 1));
  }
  c.resolve();
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParameterError("cannot open config file '" + path + "'");
  return parse(f, path);
}

void RunConfig::apply_env(char** envp) {
  if (!envp) envp = environ;
  const std::string prefix = kEnvPrefix;
  for (char** e = envp; e && *e; ++e) {
    std::string entry = *e;
    if (entry.rfind(prefix, 0) != 0) continue;
    auto eq = entry.find('=');
    std::string upper = entry.substr(prefix.size(), eq - prefix.size());
    const ConfigKey* hit = nullptr;
    for (const auto& k : config_schema()) {
      std::string u = k.name;
      std::transform(u.begin(), u.end(), u.begin(), [](unsigned char ch) { return char(std::toupper(ch)); });
      if (u == upper) hit = &k;
    }
    if (!hit) throw ParameterError("unknown environment override '" + entry.substr(0, eq) + "'");
    values[hit->name] = trim(entry.substr(eq + 1));
  }
  resolve();
}

void RunConfig::resolve() {
  auto get = [&](const char* k) -> const std::string& { return values.at(k); };
  Params pr;
  pr.d = int(to_int("d", get("d")));
  pr.p = to_double("p", get("p"));
  pr.beta = to_double("beta", get("beta"));
  pr.ell = int(to_int("ell", get("ell")));
  pr.m = int(to_int("m", get("m")));
  pr.pot.V_inf = to_double("V_inf", get("V_inf"));
  const std::string& kind = get("potential");
  if (kind == "none") {
    pr.pot.kind = PotentialSpec::Kind::none;
  } else if (kind == "exp_tail") {
    pr.pot.kind = PotentialSpec::Kind::exp_tail;
    pr.pot.A = to_double("pot_A", get("pot_A"));
    pr.pot.kappa = to_double("pot_kappa", get("pot_kappa"));
  } else if (kind == "table") {
    pr.pot.kind = PotentialSpec::Kind::radial_table;
    for (const auto& item : split(get("pot_table"), ',')) {
      auto colon = item.find(':');
      if (colon == std::string::npos) throw ParameterError("pot_table entries must be r:V");
      pr.pot.table_r.push_back(to_double("pot_table", trim(item.substr(0, colon))));
      pr.pot.table_V.push_back(to_double("pot_table", trim(item.substr(colon + 1))));
    }
  } else {
    throw ParameterError("config key 'potential': expected none, exp_tail or table");
  }
  const std::string& st = get("stencil");
  if (st == "isotropic") pr.stencil = Stencil::isotropic;
  else if (st == "standard") pr.stencil = Stencil::standard;
  else throw ParameterError("config key 'stencil': expected isotropic or standard");
  pr.validate();
  params = pr;

  grid_n = int(to_int("grid_n", get("grid_n")));
  grid_half_width = to_double("grid_half_width", get("grid_half_width"));
  if (grid_n < 3 || !(grid_half_width > 0)) throw ParameterError("grid needs grid_n >= 3 and grid_half_width > 0");

  const double Rlo = to_double("R_min", get("R_min")), Rhi = to_double("R_max", get("R_max"));
  const long long Rc = to_int("R_count", get("R_count"));
  R_grid.clear();
  if (Rlo > 0 || Rhi > 0) {
    if (!(Rlo > 0 && Rhi > Rlo && Rc >= 2)) throw ParameterError("R scan needs 0 < R_min < R_max and R_count >= 2");
    R_grid = geometric_grid(Rlo, Rhi, std::size_t(Rc));
  }
  cutoff = to_bool("cutoff", get("cutoff"));
  init = get("init");
  if (init != "ansatz" && init != "centered") throw ParameterError("config key 'init': expected ansatz or centered");
  init_R = to_double("init_R", get("init_R"));
  if (init_R < 0) throw ParameterError("init_R must be >= 0");

  SolveOptions o;
  o.max_iters = int(to_int("max_iters", get("max_iters")));
  const std::string& method = get("method");
  if (method == "steepest") o.method = SolveOptions::Method::steepest;
  else if (method == "conjugate") o.method = SolveOptions::Method::conjugate;
  else throw ParameterError("config key 'method': expected steepest or conjugate");
  const std::string& step = get("step");
  if (step == "backtracking") o.step = SolveOptions::StepRule::backtracking;
  else if (step == "fixed") o.step = SolveOptions::StepRule::fixed;
  else throw ParameterError("config key 'step': expected backtracking or fixed");
  o.fixed_step = to_double("fixed_step", get("fixed_step"));
  o.armijo = to_double("armijo", get("armijo"));
  o.tol = to_double("tol", get("tol"));
  o.perturbation = to_double("perturbation", get("perturbation"));
  o.drift_every = int(to_int("drift_every", get("drift_every")));
  seed = std::uint64_t(to_int("seed", get("seed")));
  o.seed = seed;
  o.validate();
  solve = o;

  ContinuationSchedule sch;
  for (const auto& b : split(get("betas"), ',')) sch.betas.push_back(to_double("betas", b));
  sch.warm_start = to_bool("warm_start", get("warm_start"));
  sch.validate();
  schedule = sch;

  out = get("out");
  if (out.empty()) throw ParameterError("config key 'out' must not be empty");
  threads = int(to_int("threads", get("threads")));
  if (threads < 1) throw ParameterError("threads must be >= 1");
  const std::string& fmt = get("format");
  if (fmt == "text") format = DumpFormat::text;
  else if (fmt == "binary") format = DumpFormat::binary;
  else throw ParameterError("config key 'format': expected text or binary");
}

Grid RunConfig::grid() const { return Grid::centered(params.d, grid_n, grid_half_width); }

void RunConfig::echo(std::ostream& os) const {
  os << "# resolved configuration\n";
  for (const auto& k : config_schema()) os << k.name << " = " << values.at(k.name) << '\n';
}

}  // namespace pinwheel
