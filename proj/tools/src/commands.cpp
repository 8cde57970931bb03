#include "mpnet_cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include <fmt/format.h>

#include "mpnet/errors.hpp"
#include "mpnet/metrics.hpp"
#include "mpnet/protocol.hpp"
#include "mpnet/qle.hpp"
#include "mpnet_cli/config.hpp"

#ifndef MPNET_VERSION
#define MPNET_VERSION "unknown"
#endif

namespace mpnet::cli {
namespace {

constexpr double kFig5Step = 0.05;
constexpr int kFig5Points = 31;
constexpr double kFig5W[] = {1.0, 0.8, 0.5, 0.2};
constexpr int kFig5Truncation = 30;
constexpr double kFig5LeakTol = 1e-2;

std::string csv_line(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) line += ',';
    line += cells[i];
  }
  line += '\n';
  return line;
}

RunManifest make_manifest(const CommandOptions& options, const LoadedConfig* config) {
  RunManifest m;
  m.tool_version = tool_version();
  m.command = options.command;
  m.config_path = config ? config->path : "none";
  m.config_hash = config ? "fnv1a64:" + config->hash : "none";
  m.outputs.push_back(options.out.value_or("-"));
  return m;
}

void emit(const CommandOptions& options, const RunManifest& manifest, const std::string& body,
          std::ostream& out) {
  const std::string text = manifest.render() + body;
  if (!options.out) {
    out << text;
    return;
  }
  std::ofstream file(*options.out, std::ios::binary | std::ios::trunc);
  if (!file) throw ConfigError(fmt::format("cannot write output '{}'", *options.out));
  file << text;
  if (!file) throw ConfigError(fmt::format("failed writing output '{}'", *options.out));
}

LoadedConfig require_config(const CommandOptions& options) {
  if (!options.config_path) throw ConfigError(options.command + " needs a config file");
  return load_config(*options.config_path);
}

void report_warnings(const std::vector<Check>& checks, std::ostream& err) {
  for (const auto& c : checks) {
    if (!c.passed) {
      err << fmt::format("warning: check {} failed: {} = {} > {}\n", c.name, c.detail,
                         format_number(c.value), format_number(c.limit));
    }
  }
}

int cmd_transfer(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  auto config = require_config(options);
  if (options.truncation) config.scenario.transfer_truncation = *options.truncation;
  report_warnings(validate(config.scenario), err);

  std::string body = csv_line({"state", "S", "W", "T", "F_engine", "F_closed", "abs_diff"});
  for (const auto& rep : run_transfer(config.scenario)) {
    for (const auto& w : rep.warnings) err << "warning: " << rep.state << ": " << w << '\n';
    body += csv_line({rep.state, format_number(rep.s), format_number(rep.w), format_number(rep.t),
                      format_number(rep.fidelity_engine), format_number(rep.fidelity_closed),
                      format_number(std::abs(rep.fidelity_engine - rep.fidelity_closed))});
  }
  emit(options, make_manifest(options, &config), body, out);
  return kExitOk;
}

int cmd_entangle(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  auto config = require_config(options);
  auto& sc = config.scenario;
  if (options.truncation) sc.entangle_truncation = *options.truncation;
  report_warnings(validate(sc), err);

  const double r = config.stokes_off ? 0.0 : squeezing_parameter(sc.stokes).squeezing;
  const double w = conversion_efficiency(sc.optomech).efficiency;
  const double t = sc.include_loss_in_entanglement ? transmittance(sc.fiber) : 1.0;
  if (sc.include_loss_in_entanglement) {
    err << "note: fiber loss included in the entanglement pipeline (extension)\n";
  }

  std::string body = csv_line({"r", "W", "EN_closed", "EN_fock", "truncation", "leak"});
  for (const double wv : {1.0, w}) {
    const auto rep = run_entanglement(r, wv, t, sc.entangle_truncation, sc.leak_tol);
    body += csv_line({format_number(rep.r), format_number(rep.w),
                      format_number(rep.log_negativity_closed), format_number(rep.log_negativity_fock),
                      std::to_string(rep.truncation), format_number(rep.leak)});
  }
  emit(options, make_manifest(options, &config), body, out);
  return kExitOk;
}

int cmd_fig5(const CommandOptions& options, std::ostream& out, std::ostream&) {
  std::optional<LoadedConfig> config;
  if (options.config_path) config = load_config(*options.config_path);
  const int truncation = options.truncation.value_or(kFig5Truncation);

  std::vector<double> rs;
  for (int i = 0; i < kFig5Points; ++i) rs.push_back(kFig5Step * i);
  const auto rows = fig5_curves(rs, kFig5W, truncation, kFig5LeakTol);

  std::string body = csv_line({"r", "W", "EN_closed", "EN_fock", "truncation", "leak"});
  for (const auto& row : rows) {
    body += csv_line({format_number(row.r), format_number(row.w),
                      format_number(row.log_negativity_closed), format_number(row.log_negativity_fock),
                      std::to_string(row.truncation), format_number(row.leak)});
  }
  emit(options, make_manifest(options, config ? &*config : nullptr), body, out);
  return kExitOk;
}

int cmd_validate(const CommandOptions& options, std::ostream& out, std::ostream&) {
  const auto config = require_config(options);
  const auto& sc = config.scenario;
  const auto checks = validate(sc);

  std::string body = fmt::format("{:<38} {:>14} {:>14}  {}\n", "check", "value", "limit", "status");
  bool all = true;
  for (const auto& c : checks) {
    all = all && c.passed;
    body += fmt::format("{:<38} {:>14} {:>14}  {}\n", c.name, format_number(c.value),
                        format_number(c.limit), c.passed ? "pass" : "WARN");
  }
  body += '\n';
  const auto stokes = config.stokes_off ? SqueezeResult{} : squeezing_parameter(sc.stokes);
  const auto anti = conversion_efficiency(sc.antistokes);
  const auto mech = conversion_efficiency(sc.optomech);
  body += fmt::format("{:<38} {:>14}\n", "stokes rate*tau", format_number(stokes.exponent));
  body += fmt::format("{:<38} {:>14}\n", "squeezing r", format_number(stokes.squeezing));
  body += fmt::format("{:<38} {:>14}\n", "E_N = 2r", format_number(2.0 * stokes.squeezing));
  body += fmt::format("{:<38} {:>14}\n", "antistokes rate*tau", format_number(anti.exponent));
  body += fmt::format("{:<38} {:>14}\n", "S", format_number(anti.efficiency));
  body += fmt::format("{:<38} {:>14}\n", "optomech rate*tau", format_number(mech.exponent));
  body += fmt::format("{:<38} {:>14}\n", "W", format_number(mech.efficiency));
  body += fmt::format("{:<38} {:>14}\n", "fiber T", format_number(transmittance(sc.fiber)));
  body += fmt::format("\n{}\n", all ? "all checks pass" : "some checks failed (warnings)");

  if (options.out) {
    emit(options, make_manifest(options, &config), body, out);
  } else {
    out << body;
  }
  return kExitOk;
}

int cmd_qle(const CommandOptions& options, std::ostream& out, std::ostream&) {
  const auto config = require_config(options);
  const auto& sc = config.scenario;
  AdiabaticSweepOptions sweep;
  sweep.process = config.qle.process;
  const bool anti = sweep.process == AdiabaticCase::antistokes;
  sweep.cavity_linewidth = anti ? sc.magnonic.kappa_2 : sc.magnonic.kappa_1;
  sweep.exponent = anti ? sc.antistokes.exponent() : sc.stokes.exponent();
  sweep.initial_occupation = config.qle.initial_occupation;
  sweep.dt_scale = config.qle.dt_scale;

  std::string body = csv_line({"G_over_kappa", "eta_integrated", "eta_closed", "rel_err"});
  for (const auto& row : validate_adiabatic(sweep, config.qle.coupling_ratios)) {
    body += csv_line({format_number(row.coupling_ratio), format_number(row.eta_integrated),
                      format_number(row.eta_closed), format_number(row.rel_err)});
  }
  emit(options, make_manifest(options, &config), body, out);
  return kExitOk;
}

}  // namespace

std::string tool_version() { return MPNET_VERSION; }

std::string format_number(double value) {
  if (value == 0.0) return "0";  // folds -0
  return fmt::format("{:.12g}", value);
}

std::string RunManifest::render() const {
  std::string text = fmt::format("# tool: mpnet {}\n", tool_version);
  text += fmt::format("# command: {}\n", command);
  text += fmt::format("# config: {}\n", config_path);
  text += fmt::format("# config_hash: {}\n", config_hash);
  for (const auto& o : outputs) text += fmt::format("# output: {}\n", o);
  return text;
}

int run_command(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  try {
    if (options.truncation && *options.truncation < 2) {
      throw ConfigError("--truncation must be >= 2");
    }
    if (options.command == "transfer") return cmd_transfer(options, out, err);
    if (options.command == "entangle") return cmd_entangle(options, out, err);
    if (options.command == "fig5") return cmd_fig5(options, out, err);
    if (options.command == "validate") return cmd_validate(options, out, err);
    if (options.command == "qle") return cmd_qle(options, out, err);
    throw ConfigError("unknown command '" + options.command + "'");
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const LeakBudgetExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const NumericalInstability& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const UnphysicalState& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "error: invalid scenario: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace mpnet::cli
