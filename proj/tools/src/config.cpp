#include "mpnet_cli/config.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "mpnet/units.hpp"

namespace mpnet::cli {
namespace {

double parse_double(const std::string& key, const std::string& text) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError(fmt::format("key '{}': '{}' is not a number", key, text));
  }
  return value;
}

int parse_int(const std::string& key, const std::string& text) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError(fmt::format("key '{}': '{}' is not an integer", key, text));
  }
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError(fmt::format("key '{}': '{}' is not true or false", key, text));
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (const char ch : text) {
    if (ch == sep) {
      parts.push_back(current);
      current.clear();
    } else if (ch != ' ' && ch != '\t') {
      current.push_back(ch);
    }
  }
  parts.push_back(current);
  return parts;
}

// Pulse fields are rebuilt after all keys are read, since PulseSpec validates on construction.
struct PulseDraft {
  double coupling = 0.0;
  double linewidth = 0.0;
  double duration = 0.0;
};

struct Drafts {
  PulseDraft stokes;
  PulseDraft antistokes;
  PulseDraft optomech;
};

PulseDraft draft_of(const PulseSpec& p) { return {p.coupling(), p.linewidth(), p.duration()}; }

std::map<std::string, std::function<void(LoadedConfig&, Drafts&, const std::string&,
                                         const std::string&)>>
key_table() {
  using Fn = std::function<void(LoadedConfig&, Drafts&, const std::string&, const std::string&)>;
  std::map<std::string, Fn> t;
  auto rate = [](auto member) {
    return Fn([member](LoadedConfig& c, Drafts&, const std::string& k, const std::string& v) {
      member(c) = units::angular(parse_double(k, v));
    });
  };
  t["magnonic.omega_1_over_2pi_hz"] = rate([](LoadedConfig& c) -> double& { return c.scenario.magnonic.omega_1; });
  t["magnonic.omega_2_over_2pi_hz"] = rate([](LoadedConfig& c) -> double& { return c.scenario.magnonic.omega_2; });
  t["magnonic.omega_m_over_2pi_hz"] = rate([](LoadedConfig& c) -> double& { return c.scenario.magnonic.omega_m; });
  t["magnonic.kappa_1_over_2pi_hz"] = rate([](LoadedConfig& c) -> double& { return c.scenario.magnonic.kappa_1; });
  t["magnonic.kappa_2_over_2pi_hz"] = rate([](LoadedConfig& c) -> double& { return c.scenario.magnonic.kappa_2; });
  t["magnonic.kappa_m_over_2pi_hz"] = rate([](LoadedConfig& c) -> double& { return c.scenario.magnonic.kappa_m; });
  t["magnonic.g0_over_2pi_hz"] = rate([](LoadedConfig& c) -> double& { return c.scenario.magnonic.single_photon_coupling; });

  t["mechanical.omega_c_over_2pi_hz"] = rate([](LoadedConfig& c) -> double& { return c.scenario.mechanical.omega_c; });
  t["mechanical.omega_M_over_2pi_hz"] = rate([](LoadedConfig& c) -> double& { return c.scenario.mechanical.omega_M; });
  t["mechanical.kappa_c_over_2pi_hz"] = rate([](LoadedConfig& c) -> double& { return c.scenario.mechanical.kappa_c; });
  t["mechanical.gamma_over_2pi_hz"] = rate([](LoadedConfig& c) -> double& { return c.scenario.mechanical.gamma; });
  t["mechanical.g0_over_2pi_hz"] = rate([](LoadedConfig& c) -> double& { return c.scenario.mechanical.single_photon_coupling; });
  t["mechanical.detuning_over_2pi_hz"] = rate([](LoadedConfig& c) -> double& { return c.scenario.mechanical.effective_detuning; });
  t["mechanical.thermal_occupancy"] = [](LoadedConfig& c, Drafts&, const std::string& k, const std::string& v) {
    c.scenario.mechanical.thermal_occupancy = parse_double(k, v);
  };

  auto pulse = [&t](const std::string& section, PulseDraft Drafts::*draft) {
    t[section + ".coupling_over_2pi_hz"] = [draft](LoadedConfig&, Drafts& d, const std::string& k, const std::string& v) {
      (d.*draft).coupling = units::angular(parse_double(k, v));
    };
    t[section + ".linewidth_over_2pi_hz"] = [draft](LoadedConfig&, Drafts& d, const std::string& k, const std::string& v) {
      (d.*draft).linewidth = units::angular(parse_double(k, v));
    };
    t[section + ".duration_s"] = [draft](LoadedConfig&, Drafts& d, const std::string& k, const std::string& v) {
      (d.*draft).duration = parse_double(k, v);
    };
  };
  pulse("pulse.stokes", &Drafts::stokes);
  pulse("pulse.antistokes", &Drafts::antistokes);
  pulse("pulse.optomech", &Drafts::optomech);

  t["fiber.length_km"] = [](LoadedConfig& c, Drafts&, const std::string& k, const std::string& v) {
    c.scenario.fiber.length_km = parse_double(k, v);
  };
  t["fiber.attenuation_db_per_km"] = [](LoadedConfig& c, Drafts&, const std::string& k, const std::string& v) {
    c.scenario.fiber.attenuation_db_per_km = parse_double(k, v);
  };
  t["fiber.extra_loss_db"] = [](LoadedConfig& c, Drafts&, const std::string& k, const std::string& v) {
    c.scenario.fiber.extra_loss_db = parse_double(k, v);
  };

  t["run.transfer_truncation"] = [](LoadedConfig& c, Drafts&, const std::string& k, const std::string& v) {
    c.scenario.transfer_truncation = parse_int(k, v);
  };
  t["run.entangle_truncation"] = [](LoadedConfig& c, Drafts&, const std::string& k, const std::string& v) {
    c.scenario.entangle_truncation = parse_int(k, v);
  };
  t["run.leak_tol"] = [](LoadedConfig& c, Drafts&, const std::string& k, const std::string& v) {
    c.scenario.leak_tol = parse_double(k, v);
  };
  t["run.include_loss_in_entanglement"] = [](LoadedConfig& c, Drafts&, const std::string& k, const std::string& v) {
    c.scenario.include_loss_in_entanglement = parse_bool(k, v);
  };
  t["run.states"] = [](LoadedConfig& c, Drafts&, const std::string& k, const std::string& v) {
    std::vector<MagnonState> states;
    for (const auto& item : split(v, ',')) {
      try {
        states.push_back(parse_state(item));
      } catch (const std::exception& e) {
        throw ConfigError(fmt::format("key '{}': {}", k, e.what()));
      }
    }
    c.scenario.initial_states = std::move(states);
  };

  t["qle.process"] = [](LoadedConfig& c, Drafts&, const std::string& k, const std::string& v) {
    if (v == "antistokes") {
      c.qle.process = AdiabaticCase::antistokes;
    } else if (v == "stokes") {
      c.qle.process = AdiabaticCase::stokes;
    } else {
      throw ConfigError(fmt::format("key '{}': '{}' is not antistokes or stokes", k, v));
    }
  };
  t["qle.coupling_ratios"] = [](LoadedConfig& c, Drafts&, const std::string& k, const std::string& v) {
    c.qle.coupling_ratios.clear();
    for (const auto& item : split(v, ',')) c.qle.coupling_ratios.push_back(parse_double(k, item));
  };
  t["qle.initial_occupation"] = [](LoadedConfig& c, Drafts&, const std::string& k, const std::string& v) {
    c.qle.initial_occupation = parse_double(k, v);
  };
  t["qle.dt_scale"] = [](LoadedConfig& c, Drafts&, const std::string& k, const std::string& v) {
    c.qle.dt_scale = parse_double(k, v);
  };
  return t;
}

PulseSpec build_pulse(const char* name, const PulseDraft& d) {
  try {
    return PulseSpec(d.coupling, d.linewidth, d.duration);
  } catch (const std::exception& e) {
    throw ConfigError(fmt::format("section '{}': {}", name, e.what()));
  }
}

}  // namespace

MagnonState parse_state(std::string_view spec) {
  const auto parts = split(spec, ':');
  const std::string& kind = parts.front();
  if (kind == "fock" && parts.size() == 2) return MagnonState::fock(parse_int("fock", parts[1]));
  if (kind == "superposition" && parts.size() == 3) {
    return MagnonState::superposition(parse_double("superposition", parts[1]),
                                      parse_double("superposition", parts[2]));
  }
  if (kind == "mixture" && parts.size() >= 3) {
    Eigen::MatrixXcd table = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(parts.size() - 1),
                                                    static_cast<Eigen::Index>(parts.size() - 1));
    for (std::size_t n = 1; n < parts.size(); ++n) {
      table(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(n - 1)) =
          parse_double("mixture", parts[n]);
    }
    return MagnonState::table(std::move(table), "mixture");
  }
  throw ConfigError(fmt::format("unrecognized state '{}'", spec));
}

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

LoadedConfig parse_config(std::string_view text, std::string path) {
  boost::property_tree::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(fmt::format("{}: line {}: {}", path, e.line(), e.message()));
  }

  LoadedConfig config;
  config.scenario = default_scenario();
  config.path = std::move(path);
  config.hash = fnv1a64_hex(text);
  Drafts drafts{draft_of(config.scenario.stokes), draft_of(config.scenario.antistokes),
                draft_of(config.scenario.optomech)};
  bool stokes_linewidth = false;
  bool antistokes_linewidth = false;
  bool optomech_linewidth = false;

  const auto table = key_table();
  for (const auto& [section, keys] : tree) {
    if (keys.empty() && !keys.data().empty()) {
      throw ConfigError(fmt::format("key '{}' must appear inside a section", section));
    }
    for (const auto& [key, node] : keys) {
      const std::string full = section + "." + key;
      const auto it = table.find(full);
      if (it == table.end()) throw ConfigError(fmt::format("unknown key '{}'", full));
      it->second(config, drafts, full, node.data());
      stokes_linewidth |= full == "pulse.stokes.linewidth_over_2pi_hz";
      antistokes_linewidth |= full == "pulse.antistokes.linewidth_over_2pi_hz";
      optomech_linewidth |= full == "pulse.optomech.linewidth_over_2pi_hz";
    }
  }
  // A pulse without its own linewidth uses its cavity's.
  if (!stokes_linewidth) drafts.stokes.linewidth = config.scenario.magnonic.kappa_1;
  if (!antistokes_linewidth) drafts.antistokes.linewidth = config.scenario.magnonic.kappa_2;
  if (!optomech_linewidth) drafts.optomech.linewidth = config.scenario.mechanical.kappa_c;
  config.stokes_off = drafts.stokes.coupling == 0.0 || drafts.stokes.duration == 0.0;
  if (!config.stokes_off) config.scenario.stokes = build_pulse("pulse.stokes", drafts.stokes);
  config.scenario.antistokes = build_pulse("pulse.antistokes", drafts.antistokes);
  config.scenario.optomech = build_pulse("pulse.optomech", drafts.optomech);
  return config;
}

LoadedConfig load_config(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw ConfigError(fmt::format("cannot read config '{}'", path));
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return parse_config(buffer.str(), path);
}

}  // namespace mpnet::cli
