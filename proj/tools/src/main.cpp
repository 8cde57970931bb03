#include <iostream>

#include <CLI11.hpp>

#include "mpnet_cli/commands.hpp"

int main(int argc, char** argv) {
  namespace cli = mpnet::cli;
  CLI::App app{"Pulsed magnon-phonon network simulator"};
  app.set_version_flag("--version", cli::tool_version());
  app.require_subcommand(1);

  cli::CommandOptions options;
  std::string config;
  std::string out;
  int truncation = 0;

  struct Spec {
    const char* name;
    const char* help;
    bool needs_config;
  };
  const Spec specs[] = {
      {"transfer", "magnon-to-phonon state transfer; CSV per initial state", true},
      {"entangle", "magnon-phonon entanglement at W = 1 and the configured W", true},
      {"fig5", "E_N versus r for W in {1, 0.8, 0.5, 0.2}", false},
      {"validate", "device-regime checks and derived pulse parameters", true},
      {"qle", "moment integration versus the adiabatic closed forms", true},
  };
  for (const auto& spec : specs) {
    auto* sub = app.add_subcommand(spec.name, spec.help);
    auto* cfg = sub->add_option("config", config, "scenario file (INI)");
    if (spec.needs_config) cfg->required();
    sub->add_option("--out", out, "output file (default: stdout)");
    sub->add_option("--truncation", truncation, "per-mode Fock truncation override");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitConfig;
  }

  options.command = app.get_subcommands().front()->get_name();
  if (!config.empty()) options.config_path = config;
  if (!out.empty()) options.out = out;
  if (app.get_subcommands().front()->count("--truncation") > 0) options.truncation = truncation;
  return cli::run_command(options, std::cout, std::cerr);
}
