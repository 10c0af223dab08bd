#include <CLI11.hpp>
#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) {
  using ckrlie::cli::Invocation;
  Invocation inv;
  CLI::App app{"ckr-lie: Cayley-Klein Riccati flows, their Lie-Hamilton structure and consistency checks"};
  std::string config;
  std::size_t points = 0;

  app.add_option("command", inv.command, "Subcommand")
      ->required()
      ->check(CLI::IsMember(ckrlie::cli::command_names()));
  app.add_option("-c,--config", config, "Run configuration (INI)")->check(CLI::ExistingFile);
  app.add_option("--set", inv.overrides, "Override a config key: section.key=value")->take_all();
  app.add_option("--seed", inv.seed, "Seed for random phase points")->capture_default_str();
  app.add_option("--points", points, "Random points (verify-algebra) or grid size (other commands)");
  app.add_option("--jobs", inv.jobs, "Worker threads for independent sweep entries")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_flag("--validate", inv.validate_only, "Check the configuration and exit");
  std::string out_dir;
  app.add_option("-o,--out-dir", out_dir, "Output directory (overrides output.directory)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ckrlie::cli::kExitInvalid;
  }
  if (!config.empty()) inv.config_path = config;
  if (app.count("--points") != 0) inv.points = points;
  if (!out_dir.empty()) inv.out_dir = out_dir;
  return ckrlie::cli::run(inv, std::cout, std::cerr);
}
