#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mpnet/protocol.hpp"
#include "mpnet/qle.hpp"

namespace mpnet::cli {

/// Unreadable file, unknown section or key, or a value that does not parse.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QleSettings {
  AdiabaticCase process = AdiabaticCase::antistokes;
  std::vector<double> coupling_ratios{0.005, 0.02, 0.1};
  double initial_occupation = 1.0;
  double dt_scale = 0.02;
};

struct LoadedConfig {
  ScenarioConfig scenario;
  QleSettings qle;
  std::string path;
  std::string hash;
  /// Set by a zero Stokes coupling or duration: no squeezing pulse (r = 0).
  /// scenario.stokes then keeps its default so the regime checks still run.
  bool stokes_off = false;
};

/// INI text on top of the built-in default scenario. Frequencies are given as
/// `*_over_2pi_hz` and converted to rad/s; durations in seconds.
LoadedConfig parse_config(std::string_view text, std::string path = "<memory>");
LoadedConfig load_config(const std::string& path);

/// "fock:N", "superposition:C0:C1" (real amplitudes, normalized on load) or
/// "mixture:P0:P1:..." (diagonal table).
MagnonState parse_state(std::string_view spec);

/// 64-bit FNV-1a as 16 lowercase hex digits.
std::string fnv1a64_hex(std::string_view bytes);

}  // namespace mpnet::cli
