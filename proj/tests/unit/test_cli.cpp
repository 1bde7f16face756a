#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "spintorsion/app/commands.hpp"
#include "spintorsion/app/run_config.hpp"

using namespace spintorsion::app;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("spintorsion_test_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

}  // namespace

TEST_CASE("configuration precedence: defaults, file, flags") {
  const auto dir = scratch("precedence");
  const auto file = dir / "cfg.json";
  std::ofstream(file) << R"({"field_T": 0.03, "theta_points": 11, "lmg_N_list": [4, 6]})";

  const RunConfig defaults = resolve_config("", {});
  CHECK(defaults.field_T == 0.05);
  CHECK(defaults.theta_points == 181);

  const RunConfig from_file = resolve_config(file.string(), {});
  CHECK(from_file.field_T == 0.03);
  CHECK(from_file.theta_points == 11);
  CHECK(from_file.lmg_N_list == std::vector<int>{4, 6});
  CHECK(from_file.D_hz == defaults.D_hz);

  const RunConfig flags = resolve_config(file.string(), {{"field_T", "0.07"}, {"lmg_N_list", "3,5,9"}});
  CHECK(flags.field_T == 0.07);
  CHECK(flags.theta_points == 11);
  CHECK(flags.lmg_N_list == std::vector<int>{3, 5, 9});
}

TEST_CASE("configuration errors") {
  const auto dir = scratch("errors");
  const auto file = dir / "bad.json";
  std::ofstream(file) << R"({"feild_T": 0.03})";
  CHECK_THROWS_AS(resolve_config(file.string(), {}), ConfigError);
  CHECK_THROWS_AS(resolve_config("", {{"nope", "1"}}), ConfigError);
  CHECK_THROWS_AS(resolve_config("", {{"theta_points", "many"}}), ConfigError);
  CHECK_THROWS_AS(resolve_config("", {{"tier", "medium"}}), ConfigError);
  CHECK_THROWS_AS(resolve_config((dir / "missing.json").string(), {}), ConfigError);
}

TEST_CASE("config round trip through JSON") {
  RunConfig c;
  c.field_T = 0.0123;
  c.fringe_times_s = {0.0, 0.002};
  const nlohmann::json j = c;
  const RunConfig back = j.get<RunConfig>();
  CHECK(back.field_T == c.field_T);
  CHECK(back.fringe_times_s == c.fringe_times_s);
  CHECK(config_keys().size() == j.size());
}

TEST_CASE("number format") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(2.8e9) == "2800000000");
  CHECK(format_number(-1.5e-20) == "-1.5e-20");
}

TEST_CASE("commands are deterministic with fixed headers") {
  RunConfig cfg;
  cfg.theta_points = 21;
  cfg.field_points = 3;
  cfg.map_theta_points = 19;
  cfg.lmg_N_list = {4, 7};
  cfg.lmg_ratio_points = 41;

  const std::map<std::string, std::pair<std::string, std::string>> headers{
      {"levels", {"levels.csv", "theta_rad,E_plus1,E_0,E_minus1,E_gap,vieta_residual"}},
      {"coupling-map", {"coupling_map.csv", "field_T,theta_rad,gN_hz"}},
  };

  for (const std::string name : {"levels", "coupling-map", "lmg-phase"}) {
    cfg.output_dir = scratch("run_a").string();
    const auto a = run_command(name, cfg);
    cfg.output_dir = scratch("run_b").string();
    const auto b = run_command(name, cfg);
    CHECK(a.exit_code == 0);
    REQUIRE(a.files == b.files);
    CHECK(fs::exists(a.directory / "config.json"));
    CHECK(fs::exists(a.directory / "versions.json"));
    for (const auto& f : a.files)
      if (fs::path(f).extension() == ".csv") CHECK(slurp(a.directory / f) == slurp(b.directory / f));
    if (auto it = headers.find(name); it != headers.end())
      CHECK(first_line(a.directory / it->second.first) == it->second.second);
  }
  CHECK_THROWS(run_command("bogus", cfg));
}
