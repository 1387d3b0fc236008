#include "pinwheel/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>

#include "pinwheel/ansatz.hpp"
#include "pinwheel/errors.hpp"
#include "pinwheel/groundstate.hpp"
#include "pinwheel/groups.hpp"
#include "pinwheel/numerics.hpp"
#include "pinwheel/solver.hpp"

namespace pinwheel {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

fs::path prepare_out(const RunConfig& cfg) {
  fs::path dir(cfg.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ParameterError("cannot create output directory '" + cfg.out + "': " + ec.message());
  std::ofstream echo(dir / "config.txt");
  cfg.echo(echo);
  return dir;
}

std::ofstream open_out(const fs::path& p, bool binary = false) {
  std::ofstream f(p, binary ? std::ios::binary : std::ios::out);
  if (!f) throw NumericalError("cannot write '" + p.string() + "'");
  return f;
}

void write_json(const fs::path& p, const json& j) { open_out(p) << j.dump(2) << '\n'; }

std::vector<double> scan_grid(const RunConfig& cfg) {
  if (!cfg.R_grid.empty()) return cfg.R_grid;
  return default_R_grid(cfg.params.pot.V_inf);
}

json state_summary(const SolveResult& r) {
  json j;
  j["energy"] = r.energy;
  j["initial_energy"] = r.diag.initial_energy;
  j["converged"] = r.diag.converged;
  j["iterations"] = r.diag.iterations;
  j["residual"] = r.diag.rows.back().grad_norm;
  j["raw_residual"] = r.diag.rows.back().raw_residual;
  j["nehari_defect"] = r.diag.rows.back().nehari_defect;
  j["warnings"] = r.diag.warnings;
  auto pc = check_pinwheel(r.state);
  j["pinwheel_residual"] = pc.pinwheel;
  j["invariance_residual"] = pc.invariance;
  auto dr = drift_diagnostic(r.state);
  j["drift"] = {{"center_norm", dr.center_norm}, {"boundary_fraction", dr.boundary_fraction}, {"flagged", dr.flagged}};
  return j;
}

void dump_state(const fs::path& dir, const std::string& stem, const SystemState& s, DumpFormat fmt) {
  for (int i = 0; i < s.ell(); ++i) {
    const bool bin = fmt == DumpFormat::binary;
    auto f = open_out(dir / (stem + "_u" + std::to_string(i) + (bin ? ".bin" : ".txt")), bin);
    write_field(f, s.u[i], fmt);
  }
}

struct Initial {
  SystemState state;
  double ansatz_R = 0;
  double ansatz_energy = 0;
};

Initial initial_state(const RunConfig& cfg) {
  const Params& pr = cfg.params;
  if (pr.d > 3) throw ParameterError("grid solves need d <= 3");
  Grid g = cfg.grid();
  RadialProfile prof = solve_ground_state(pr.d, pr.p, pr.pot.V_inf);
  Initial in;
  if (cfg.init == "centered") {
    Field b = embed_radial(prof, {0, 0, 0}, g);
    in.state.params = pr;
    in.state.u.assign(pr.ell, b);
    return in;
  }
  double R = cfg.init_R;
  if (R == 0) {
    std::vector<double> grid = cfg.R_grid;
    if (grid.empty()) grid = geometric_grid(1.0 / std::sqrt(pr.pot.V_inf), 0.8 * cfg.grid_half_width, 25);
    AnsatzScan sc = analog_ansatz_scan(pr, g, prof, grid);
    if (sc.R.empty()) throw NumericalError("no feasible ansatz radius in the scan");
    R = sc.best_R;
  }
  in.state = ansatz_state(pr, g, prof, R);
  in.ansatz_R = R;
  in.ansatz_energy = nehari_energy(in.state);
  return in;
}

}  // namespace

std::vector<SuiteResult> run_verification(const RunConfig& cfg) {
  const Params& pr = cfg.params;
  std::vector<SuiteResult> out;

  {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> qd(2.0, 4.0), ad(0.0, 10.0);
    std::uniform_int_distribution<int> nd(1, 6);
    int violations = 0;
    for (int k = 0; k < 10000; ++k) {
      std::vector<double> a(nd(rng));
      for (double& x : a) x = ad(rng);
      violations += !power_inequality_check(qd(rng), a);
    }
    out.push_back({"power_inequality", violations == 0, std::to_string(violations) + " violations in 10000 instances"});
  }
  {
    bool ok = true;
    std::string detail;
    for (int d : {1, 3}) {
      ConvolutionSweep sw = exp_convolution_sweep(1.0, 2.0, d, 20.0, 21);
      ok = ok && sw.bounded;
      detail += "d=" + std::to_string(d) + " slope_upper=" + g17(sw.slope_upper_rel) + " ";
    }
    out.push_back({"convolution_ratio", ok, detail});
  }
  RadialProfile prof = solve_ground_state(pr.d, pr.p, pr.pot.V_inf);
  {
    AsymptoticsReport a = verify_interaction_asymptotics(prof, scan_grid(cfg), pr.m);
    out.push_back({"interaction_asymptotics", a.pass_linear && a.pass_power && a.pass_potential,
                   "plateau_linear=" + g17(a.plateau_variation_linear) + " ratio_power=" + g17(a.ratio_power) +
                       " ratio_potential=" + g17(a.ratio_potential)});
  }
  {
    // The cutoff radii only exist under the strong separation condition; fall back to the smallest such m.
    int m6 = pr.m;
    while (!separation_constants(m6, pr.ell).strong_ok) m6 += 2;
    const CutoffSpec cut = CutoffSpec::midpoint(m6, pr.ell);
    std::vector<double> s;
    for (double R : scan_grid(cfg)) s.push_back(cut.r * R);
    CutoffLossReport c = cutoff_losses(prof, cut.epsilon, s);
    const bool ok = std::abs(c.rate_V / c.expected_V - 1) < 0.05 && std::abs(c.rate_2p / c.expected_2p - 1) < 0.05;
    out.push_back({"cutoff_losses", ok,
                   "m=" + std::to_string(m6) + " eps=" + g17(cut.epsilon) + " rate_V=" + g17(c.rate_V) + "/" +
                       g17(c.expected_V) + " rate_2p=" + g17(c.rate_2p) + "/" + g17(c.expected_2p)});
  }
  return out;
}

int cmd_groundstate(const RunConfig& cfg, std::ostream& out) {
  const Params& pr = cfg.params;
  fs::path dir = prepare_out(cfg);
  RadialProfile prof = solve_ground_state(pr.d, pr.p, pr.pot.V_inf);
  {
    auto f = open_out(dir / "profile.csv");
    write_profile(f, prof);
  }
  json j = {{"d", pr.d},
            {"p", pr.p},
            {"V_inf", pr.pot.V_inf},
            {"omega0", prof.omega0()},
            {"norm_V2", norm_V2(prof)},
            {"norm_2p", norm_2p(prof)},
            {"c_inf", ground_energy(prof)},
            {"a_N", prof.fit.a_N},
            {"exponent", prof.fit.exponent},
            {"fit_residual", prof.fit.residual},
            {"ode_residual", ode_residual(prof)}};
  write_json(dir / "groundstate.json", j);
  out << "c_inf " << g17(ground_energy(prof)) << "\na_N " << g17(prof.fit.a_N) << "\nexponent "
      << g17(prof.fit.exponent) << '\n';
  return kExitOk;
}

int cmd_orbit(const RunConfig& cfg, std::ostream& out) {
  const Params& pr = cfg.params;
  GroupSpec spec;
  spec.m = pr.m;
  spec.ell = pr.ell;
  spec.mode = GroupMode::paper;
  spec.dim = 4;
  spec.validate();
  fs::path dir = prepare_out(cfg);
  Eigen::VectorXd base = Eigen::VectorXd::Zero(4);
  base(0) = 1;
  OrbitSet orb = orbit_points(base, spec);
  {
    auto f = open_out(dir / "orbit.csv");
    f << "component,index,x0,x1,x2,x3\n";
    for (std::size_t k = 0; k < orb.points.size(); ++k) {
      f << orb.labels[k].first << ',' << orb.labels[k].second;
      for (int a = 0; a < 4; ++a) f << ',' << g17(orb.points[k](a));
      f << '\n';
    }
  }
  OrbitDistances od = orbit_distances(orb);
  SeparationConstants sc = separation_constants(pr.m, pr.ell);
  json j = {{"m", pr.m},           {"ell", pr.ell},
            {"intra", sc.intra},   {"inter", sc.inter},
            {"orbit_intra", od.intra}, {"orbit_inter", od.inter},
            {"existence_ok", sc.existence_ok}, {"strong_ok", sc.strong_ok}};
  write_json(dir / "orbit.json", j);
  out << "intra " << g17(sc.intra) << "\ninter " << g17(sc.inter) << "\nexistence_ok " << sc.existence_ok
      << "\nstrong_ok " << sc.strong_ok << '\n';
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  fs::path dir = prepare_out(cfg);
  auto res = run_verification(cfg);
  json j = json::array();
  bool all = true;
  for (const auto& r : res) {
    out << (r.pass ? "PASS " : "FAIL ") << r.name << "  " << r.detail << '\n';
    j.push_back({{"suite", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    all = all && r.pass;
  }
  write_json(dir / "verify.json", j);
  return all ? kExitOk : kExitVerifyFailed;
}

int cmd_ansatz_scan(const RunConfig& cfg, std::ostream& out) {
  const Params& pr = cfg.params;
  RadialProfile prof = solve_ground_state(pr.d, pr.p, pr.pot.V_inf);
  const auto R = scan_grid(cfg);
  if (cfg.cutoff) {
    SegregatedReport rep = segregated_bound(prof, pr.m, pr.ell, pr.pot, R);
    fs::path dir = prepare_out(cfg);
    auto f = open_out(dir / "segregated.csv");
    f << "R,eps_R,bound,threshold,crossed,corr_tail,corr_shoulder,corr_grad\n";
    for (const auto& r : rep.rows)
      f << g17(r.R) << ',' << g17(r.eps_R) << ',' << g17(r.bound) << ',' << g17(r.threshold) << ',' << r.crossed
        << ',' << g17(r.corr_tail) << ',' << g17(r.corr_shoulder) << ',' << g17(r.corr_grad) << '\n';
    json j = {{"delta", rep.cutoff.delta}, {"epsilon", rep.cutoff.epsilon}, {"r", rep.cutoff.r},
              {"disjoint", rep.disjoint},  {"threshold", rep.threshold},     {"crossed", rep.crossed},
              {"R_star", rep.R_star}};
    write_json(dir / "segregated.json", j);
    out << "crossed " << rep.crossed << "\nR_star " << g17(rep.R_star) << "\nthreshold " << g17(rep.threshold) << '\n';
    return kExitOk;
  }
  InteractionReport rep = existence_bound(prof, pr.m, pr.ell, pr.beta, pr.pot, R);
  fs::path dir = prepare_out(cfg);
  auto f = open_out(dir / "interaction.csv");
  f << "R,eps_R,rate_residual,bound,threshold,crossed\n";
  for (const auto& r : rep.rows)
    f << g17(r.R) << ',' << g17(r.eps_R) << ',' << g17(r.rate_residual) << ',' << g17(r.bound) << ','
      << g17(r.threshold) << ',' << r.crossed << '\n';
  json j = {{"threshold", rep.threshold},
            {"crossed", rep.crossed},
            {"R_star", rep.R_star},
            {"eps_fit", {{"exponent", rep.eps_fit.exponent}, {"amplitude", rep.eps_fit.amplitude}}},
            {"nearest_fit", {{"exponent", rep.nearest_fit.exponent}, {"amplitude", rep.nearest_fit.amplitude}}},
            {"expected_rate", rep.expected_rate},
            {"dominance_rate", rep.dominance_rate}};
  write_json(dir / "interaction.json", j);
  out << "crossed " << rep.crossed << "\nR_star " << g17(rep.R_star) << "\nthreshold " << g17(rep.threshold) << '\n';
  return kExitOk;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  Initial in = initial_state(cfg);
  fs::path dir = prepare_out(cfg);
  SolveResult r = minimize(in.state, cfg.solve);
  {
    auto f = open_out(dir / "diagnostics.csv");
    r.diag.write_csv(f);
  }
  dump_state(dir, "solve", r.state, cfg.format);
  json j = state_summary(r);
  j["ansatz_R"] = in.ansatz_R;
  j["ansatz_energy"] = in.ansatz_energy;
  write_json(dir / "solve.json", j);
  out << "energy " << g17(r.energy) << "\nconverged " << r.diag.converged << "\niterations " << r.diag.iterations
      << '\n';
  for (const auto& w : r.diag.warnings) out << "warning: " << w << '\n';
  return kExitOk;
}

int cmd_continuate(const RunConfig& cfg, std::ostream& out) {
  Initial in = initial_state(cfg);
  fs::path dir = prepare_out(cfg);
  auto steps = continuation(in.state, cfg.schedule, cfg.solve);
  {
    auto f = open_out(dir / "continuation.csv");
    write_continuation_csv(f, steps);
  }
  json arr = json::array();
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const auto& s = steps[k];
    {
      auto f = open_out(dir / ("diagnostics_" + std::to_string(k) + ".csv"));
      s.result.diag.write_csv(f);
    }
    dump_state(dir, "beta_" + std::to_string(k), s.result.state, cfg.format);
    json j = state_summary(s.result);
    j["beta"] = s.beta;
    j["overlap"] = s.overlap.total;
    j["beta_times_overlap"] = s.overlap.beta_times_total;
    j["support_fraction"] = s.overlap.support_fraction;
    try {
      PartitionResult pa = extract_partition(s.result.state);
      j["partition"] = {{"measure", pa.measure},
                        {"mapping_residual", pa.mapping_residual},
                        {"connected_sets", pa.connected_sets},
                        {"domain_energy", pa.domain_energy}};
    } catch (const NumericalError& e) {
      j["partition"] = {{"error", e.what()}};
    }
    if (s.result.state.ell() == 2) {
      SignChanging sc = sign_changing(s.result.state);
      j["sign_changing"] = {{"residual", sc.residual}, {"antisymmetry", sc.antisymmetry}, {"min", sc.min}, {"max", sc.max}};
    }
    arr.push_back(j);
    out << "beta " << g17(s.beta) << " energy " << g17(s.result.energy) << " overlap " << g17(s.overlap.total)
        << " converged " << s.result.diag.converged << '\n';
  }
  write_json(dir / "continuation.json", arr);
  return kExitOk;
}

int cmd_report(const RunConfig& cfg, std::ostream& out) {
  fs::path dir(cfg.out);
  if (!fs::is_directory(dir)) throw ParameterError("no output directory '" + cfg.out + "'");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ParameterError("no JSON artifacts in '" + cfg.out + "'");
  for (const auto& p : files) {
    std::ifstream f(p);
    json j = json::parse(f, nullptr, false);
    if (j.is_discarded()) throw NumericalError("malformed artifact '" + p.string() + "'");
    out << "== " << p.filename().string() << '\n' << j.dump(2) << '\n';
  }
  return kExitOk;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pinwheel solutions of competitive Schrodinger systems"};
  app.require_subcommand(1);
  std::string config_path, out_dir, format;
  std::uint64_t seed = 0;
  int threads = 0;
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--format", format, "field dump format")->check(CLI::IsMember({"text", "binary"}));
  const std::vector<std::pair<std::string, int (*)(const RunConfig&, std::ostream&)>> commands = {
      {"groundstate", cmd_groundstate}, {"orbit", cmd_orbit},       {"verify", cmd_verify},
      {"ansatz-scan", cmd_ansatz_scan}, {"solve", cmd_solve},       {"continuate", cmd_continuate},
      {"report", cmd_report}};
  for (const auto& [name, fn] : commands) app.add_subcommand(name)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig::defaults() : RunConfig::load(config_path);
    cfg.apply_env();
    if (!out_dir.empty()) cfg.set("out", out_dir);
    if (app.count("--seed")) cfg.set("seed", std::to_string(seed));
    if (threads > 0) cfg.set("threads", std::to_string(threads));
    if (!format.empty()) cfg.set("format", format);
    cfg.resolve();
    Eigen::setNbThreads(cfg.threads);
    for (const auto& [name, fn] : commands)
      if (app.got_subcommand(name)) return fn(cfg, out);
  } catch (const ParameterError& e) {
    err << "parameter error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitConfig;
}

}  // namespace pinwheel
