#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pinwheel/cli.hpp"
#include "pinwheel/config.hpp"
#include "pinwheel/errors.hpp"

using namespace pinwheel;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("pinwheel_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  fs::path f = dir / "run.cfg";
  std::ofstream(f) << text;
  return f;
}

int run(std::vector<std::string> args, std::string* out_text = nullptr) {
  args.insert(args.begin(), "pinwheel");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(int(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  return code;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parsing") {
  std::istringstream good("# comment\nm = 4\nbeta = -2   # trailing\n\nbetas = -1, -2\n");
  RunConfig c = RunConfig::parse(good);
  CHECK(c.params.m == 4);
  CHECK(c.params.beta == -2.0);
  CHECK(c.schedule.betas == std::vector<double>{-1, -2});
  CHECK(c.grid_n == 128);

  std::istringstream unknown("mm = 4\n");
  CHECK_THROWS_AS(RunConfig::parse(unknown), ParameterError);
  std::istringstream repeated("m = 4\nm = 6\n");
  CHECK_THROWS_AS(RunConfig::parse(repeated), ParameterError);
  std::istringstream junk("m = four\n");
  CHECK_THROWS_AS(RunConfig::parse(junk), ParameterError);
  std::istringstream bad_beta("beta = 0.5\n");
  CHECK_THROWS_AS(RunConfig::parse(bad_beta), ParameterError);
}

TEST_CASE("environment overrides") {
  RunConfig c = RunConfig::defaults();
  std::string a = "PINWHEEL_BETA=-3", b = "PINWHEEL_GRID_N=64", other = "HOME=/x";
  char* env[] = {a.data(), b.data(), other.data(), nullptr};
  c.apply_env(env);
  CHECK(c.params.beta == -3.0);
  CHECK(c.grid_n == 64);

  std::string typo = "PINWHEEL_BETTA=-3";
  char* env2[] = {typo.data(), nullptr};
  CHECK_THROWS_AS(c.apply_env(env2), ParameterError);
}

TEST_CASE("echoed configuration parses back to itself") {
  RunConfig c = RunConfig::defaults();
  c.set("potential", "exp_tail");
  c.set("pot_A", "-0.25");
  c.set("pot_kappa", "0.5");
  c.resolve();
  std::ostringstream os;
  c.echo(os);
  std::istringstream is(os.str());
  RunConfig back = RunConfig::parse(is);
  CHECK(back.values == c.values);
  CHECK(back.params.pot.A == -0.25);
}

TEST_CASE("exit codes") {
  fs::path dir = scratch("codes");
  CHECK(run({"--config", write_config(dir, "m = 5\n").string(), "--out", dir.string(), "groundstate"}) == kExitConfig);
  CHECK(run({"--config", write_config(dir, "d = 3\np = 3.5\n").string(), "--out", dir.string(), "groundstate"}) ==
        kExitConfig);
  CHECK(run({"--out", dir.string(), "no-such-command"}) == kExitConfig);
  CHECK(run({"--config", (dir / "missing.cfg").string(), "groundstate"}) == kExitConfig);
  CHECK(run({"--out", (dir / "empty").string(), "report"}) == kExitConfig);
}

TEST_CASE("groundstate command in one dimension") {
  fs::path dir = scratch("gs");
  std::string text;
  CHECK(run({"--config", write_config(dir, "d = 1\n").string(), "--out", dir.string(), "groundstate"}, &text) ==
        kExitOk);
  CHECK(text.find("c_inf 1.3333") == 0);
  auto j = nlohmann::json::parse(slurp(dir / "groundstate.json"));
  CHECK(j["c_inf"].get<double>() == doctest::Approx(4.0 / 3).epsilon(1e-6));
  CHECK(fs::exists(dir / "profile.csv"));
  CHECK(fs::exists(dir / "config.txt"));

  std::string first = slurp(dir / "profile.csv");
  CHECK(run({"--config", (dir / "run.cfg").string(), "--out", dir.string(), "groundstate"}) == kExitOk);
  CHECK(slurp(dir / "profile.csv") == first);

  CHECK(run({"--out", dir.string(), "report"}, &text) == kExitOk);
  CHECK(text.find("groundstate.json") != std::string::npos);
}

TEST_CASE("ansatz scan writes its table") {
  fs::path dir = scratch("scan");
  CHECK(run({"--config", write_config(dir, "R_min = 1\nR_max = 20\nR_count = 12\n").string(), "--out",
             dir.string(), "ansatz-scan"}) == kExitOk);
  CHECK(fs::exists(dir / "interaction.csv"));
  CHECK(fs::exists(dir / "interaction.json"));
}
