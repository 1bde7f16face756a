// Command-line front end: one subcommand per data product.
//
//   spintorsion [--config FILE] [--<key> VALUE ...] <command>
//
// Keys are the RunConfig field names; list values are comma separated.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "spintorsion/app/commands.hpp"
#include "spintorsion/app/run_config.hpp"

int main(int argc, char** argv) {
  using namespace spintorsion::app;

  CLI::App cli{"Spin-torsional coupling, LMG and rotor interference toolkit"};
  cli.require_subcommand(1);
  cli.fallthrough();

  std::string config_path;
  cli.add_option("--config", config_path, "JSON file with RunConfig defaults")
      ->check(CLI::ExistingFile);

  const nlohmann::json defaults = RunConfig{};
  std::map<std::string, std::string> raw;
  for (const auto& key : config_keys()) {
    std::string description = "default: " + defaults.at(key).dump();
    cli.add_option("--" + key, raw[key], description);
  }

  const std::map<std::string, std::string> help{
      {"levels", "NV eigenenergies against theta"},
      {"coupling-map", "g_N over the (B, theta) grid and its maximum per field"},
      {"lmg-phase", "finite-N LMG order parameters"},
      {"cat", "cat-state closed form against brute-force dynamics"},
      {"fringes", "free-rotor interference profiles and fringe metrics"},
      {"validate", "oracle suite; nonzero exit on failure"}};
  for (const auto& name : command_names()) cli.add_subcommand(name, help.at(name));

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return cli.exit(e);
  }

  std::map<std::string, std::string> overrides;
  for (const auto& key : config_keys())
    if (cli.get_option("--" + key)->count() > 0) overrides[key] = raw[key];

  try {
    const RunConfig cfg = resolve_config(config_path, overrides);
    const std::string command = cli.get_subcommands().front()->get_name();
    const CommandResult result = run_command(command, cfg);
    std::cout << result.summary << '\n';
    for (const auto& f : result.files) std::cout << "  " << (result.directory / f).string() << '\n';
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
