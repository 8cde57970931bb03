#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mpnet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

struct CommandOptions {
  std::string command;
  std::optional<std::string> config_path;
  std::optional<std::string> out;
  std::optional<int> truncation;
};

/// Header comment lines written at the top of every CSV.
struct RunManifest {
  std::string tool_version;
  std::string command;
  std::string config_path;
  std::string config_hash;
  std::vector<std::string> outputs;

  std::string render() const;
};

/// 12 significant digits, '.' decimal point.
std::string format_number(double value);

/// Runs one subcommand. Diagnostics go to `err`; tables go to `out` unless
/// options.out names a file. Returns the process exit code.
int run_command(const CommandOptions& options, std::ostream& out, std::ostream& err);

std::string tool_version();

}  // namespace mpnet::cli
