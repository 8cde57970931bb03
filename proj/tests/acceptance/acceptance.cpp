// Acceptance suite: one PASS/FAIL line per criterion.
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "mpnet/channels.hpp"
#include "mpnet/metrics.hpp"
#include "mpnet/propagators.hpp"
#include "mpnet/protocol.hpp"
#include "mpnet/qle.hpp"
#include "oracles.hpp"

using namespace mpnet;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [out of tolerance]");
  }
};

bool within(double value, double target, double tol) { return std::abs(value - target) <= tol; }

std::string num(double v) { return fmt::format("{:.6g}", v); }

struct Context {
  std::string mpnet;
  std::string config;
};

Outcome efficiencies(const Context&) {
  Outcome o;
  const auto sc = default_scenario();
  const double s = conversion_efficiency(sc.antistokes).efficiency;
  const double w = conversion_efficiency(sc.optomech).efficiency;
  o.require(within(s, 0.18, 0.005), "S = " + num(s) + " (0.18 +/- 0.005)");
  o.require(within(w, 0.93, 0.005), "W = " + num(w) + " (0.93 +/- 0.005)");
  return o;
}

Outcome squeezing(const Context&) {
  Outcome o;
  const auto sq = squeezing_parameter(default_scenario().stokes);
  const auto rep = run_entanglement(sq.squeezing, 1.0, 1.0, 30, 1e-8);
  o.require(within(sq.exponent, 0.075, 0.001), "rate*tau = " + num(sq.exponent) + " (0.075 +/- 0.001)");
  o.require(within(sq.squeezing, 0.39, 0.005), "r = " + num(sq.squeezing) + " (0.39 +/- 0.005)");
  o.require(within(rep.log_negativity_fock, 0.78, 0.01),
            "E_N = " + num(rep.log_negativity_fock) + " (0.78 +/- 0.01)");
  return o;
}

Outcome fiber(const Context&) {
  Outcome o;
  const double t1 = transmittance({.length_km = 1, .attenuation_db_per_km = 0.2});
  const double t10 = transmittance({.length_km = 10, .attenuation_db_per_km = 0.2});
  o.require(within(t1, 0.955, 0.001), "T(1 km) = " + num(t1) + " (0.955 +/- 0.001)");
  o.require(within(t10, 0.631, 0.001), "T(10 km) = " + num(t10) + " (0.631 +/- 0.001)");
  return o;
}

Outcome transfer_fidelity(const Context&) {
  Outcome o;
  auto sc = default_scenario();
  for (const auto& [km, target] : {std::pair{1.0, 0.16}, std::pair{10.0, 0.10}}) {
    sc.fiber.length_km = km;
    const auto rep = run_transfer(sc, MagnonState::fock(1));
    o.require(within(rep.fidelity_engine, target, 0.005),
              fmt::format("F({} km) = {} ({} +/- 0.005)", km, num(rep.fidelity_engine), target));
    const double diff = std::abs(rep.fidelity_engine - rep.fidelity_closed);
    o.require(diff <= 1e-8, fmt::format("|engine - closed| = {:.2e} at {} km", diff, km));
  }
  return o;
}

Outcome lossless(const Context&) {
  Outcome o;
  auto sc = default_scenario();
  sc.fiber.length_km = 0.0;
  sc.transfer_truncation = 24;
  double worst = 0.0;
  double sw = 0.0;
  for (int n = 0; n <= 3; ++n) {
    const auto rep = run_transfer(sc, MagnonState::fock(n));
    sw = rep.s * rep.w;
    worst = std::max(worst, std::abs(rep.fidelity_engine - std::pow(sw, n)));
  }
  const double a = 1.0 / std::numbers::sqrt2;
  const auto sup = run_transfer(sc, MagnonState::superposition(a, a));
  const double sup_err = std::abs(sup.fidelity_engine - 0.25 * std::pow(1 + std::sqrt(sw), 2));
  o.require(worst <= 1e-8, fmt::format("max |F - (SW)^n| over n=0..3 = {:.2e}", worst));
  o.require(sup_err <= 1e-8, fmt::format("|F - (1+sqrt(SW))^2/4| = {:.2e}", sup_err));
  return o;
}

Outcome fig5(const Context&) {
  Outcome o;
  std::vector<double> rs;
  for (int i = 0; i <= 20; ++i) rs.push_back(0.05 * i);
  const double ws[] = {1.0, 0.8, 0.5, 0.2};
  const auto rows = fig5_curves(rs, ws, 30, 1e-2);
  double worst = 0.0;
  bool monotone = true, ordered = true;
  for (std::size_t k = 0; k < 4; ++k) {
    for (std::size_t i = 0; i < rs.size(); ++i) {
      const auto& row = rows[k * rs.size() + i];
      worst = std::max(worst, std::abs(row.log_negativity_fock - row.log_negativity_closed));
      if (i > 0) monotone = monotone && row.log_negativity_fock > rows[k * rs.size() + i - 1].log_negativity_fock;
      if (k > 0 && i > 0) {
        ordered = ordered && row.log_negativity_fock < rows[(k - 1) * rs.size() + i].log_negativity_fock;
      }
    }
  }
  o.require(worst <= 1e-3, fmt::format("max |E_N fock - closed| (r <= 1) = {:.2e}", worst));
  o.require(monotone, "monotone in r");
  o.require(ordered, "ordered by W");
  return o;
}

Outcome channels(const Context&) {
  Outcome o;
  std::mt19937_64 rng(20240607);
  const ModeDims dims{12, 12};
  double worst = 0.0;
  for (int trial = 0; trial < 2; ++trial) {
    const FockDensityMatrix rho(dims, oracle::random_density(dims.total(), rng));
    for (const double t : {0.0, 0.631, 0.955, 1.0}) {
      for (const std::size_t mode : {std::size_t{0}, std::size_t{1}}) {
        const auto k = apply_loss(rho, mode, t, LossMethod::kraus).matrix();
        const auto a = apply_loss(rho, mode, t, LossMethod::ancilla).matrix();
        const auto s = loss_double_sum(rho, mode, t).matrix();
        worst = std::max({worst, (k - a).cwiseAbs().maxCoeff(), (k - s).cwiseAbs().maxCoeff()});
      }
    }
  }
  o.require(worst <= 1e-10, fmt::format("max elementwise difference = {:.2e}", worst));
  return o;
}

Outcome qle(const Context&) {
  Outcome o;
  const double kappa = 2 * std::numbers::pi * 500e6;
  const double ratios[] = {0.005, 0.02, 0.1};
  AdiabaticSweepOptions anti;
  anti.cavity_linewidth = kappa;
  anti.exponent = default_scenario().antistokes.exponent();
  AdiabaticSweepOptions stokes = anti;
  stokes.process = AdiabaticCase::stokes;
  stokes.exponent = default_scenario().stokes.exponent();
  for (const auto& [name, opts] : {std::pair{"anti-Stokes", anti}, std::pair{"Stokes", stokes}}) {
    const auto rows = validate_adiabatic(opts, ratios);
    o.require(rows[1].occupation_rel_err < 0.02,
              fmt::format("{} occupation error at G/kappa = 0.02: {:.3g}%", name,
                          100 * rows[1].occupation_rel_err));
    bool grows = true;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      grows = grows && rows[i].occupation_rel_err > rows[i - 1].occupation_rel_err &&
              rows[i].rel_err > rows[i - 1].rel_err;
    }
    o.require(grows, fmt::format("{} error grows with G/kappa", name));
  }
  return o;
}

Outcome properties(const Context&) {
  Outcome o;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<int> d{6, 6, 6};
  const ModeDims dims(d);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    FockDensityMatrix rho(dims, oracle::random_low_density(d, 3, rng));
    for (int step = 0; step < 4; ++step) {
      const auto a = static_cast<std::size_t>(trial + step) % 3;
      const auto b = (a + 1) % 3;
      switch ((trial * 7 + step * 3) % 4) {
        case 0:
          rho = apply_two_mode_exponential(rho, a, b, GeneratorKind::beamsplitter, 6.28 * u(rng));
          break;
        case 1:
          rho = apply_loss(rho, a, u(rng));
          break;
        case 2:
          rho = apply_local(rho, a, phase_rotation(6, 6.28 * u(rng)));
          break;
        case 3:
          rho = swap_into_vacuum_mode(rho, a, u(rng), SwapPhase::plus_i, Residual::traced).state;
          break;
      }
      const auto rep = rho.physicality();
      worst = std::max({worst, rep.hermiticity_error, std::abs(rep.trace - 1.0), -rep.min_eigenvalue});
    }
  }
  o.require(worst <= 1e-10, fmt::format("200 random pipelines: worst trace/Hermiticity/PSD defect {:.2e}", worst));

  double angle_err = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double e1 = u(rng), e2 = u(rng);
    const auto one = FockDensityMatrix::from_ket(number_ket(ModeDims{2, 2}, {1, 0}));
    const auto out = apply_antistokes_swap(apply_antistokes_swap(one, 0, 1, e1), 0, 1, e2);
    const int moved[] = {0, 1};
    const double expect = std::pow(std::sin(std::asin(std::sqrt(e1)) + std::asin(std::sqrt(e2))), 2);
    angle_err = std::max(angle_err, std::abs(out.population(moved) - expect));
  }
  o.require(angle_err <= 1e-12, fmt::format("angle additivity {:.2e}", angle_err));

  double comp_err = 0.0;
  for (int k = 0; k < 10; ++k) {
    const FockDensityMatrix rho(ModeDims{8}, oracle::random_density(8, rng));
    const double t1 = u(rng), t2 = u(rng);
    const auto twice = apply_loss(apply_loss(rho, 0, t1), 0, t2).matrix();
    comp_err = std::max(comp_err, (twice - apply_loss(rho, 0, t1 * t2).matrix()).cwiseAbs().maxCoeff());
  }
  o.require(comp_err <= 1e-10, fmt::format("loss composition {:.2e}", comp_err));

  double lu_err = 0.0;
  for (int k = 0; k < 10; ++k) {
    const FockDensityMatrix rho(ModeDims{4, 5}, oracle::random_density(20, rng, 2));
    const double e0 = log_negativity_fock(rho, std::size_t{1}).log_negativity;
    auto rot = apply_local(rho, 0, phase_rotation(4, 6.28 * u(rng)));
    rot = apply_local(rot, 1, phase_rotation(5, 6.28 * u(rng)));
    lu_err = std::max(lu_err, std::abs(log_negativity_fock(rot, std::size_t{1}).log_negativity - e0));
  }
  o.require(lu_err <= 1e-10, fmt::format("E_N local-unitary invariance {:.2e}", lu_err));

  double halving = 0.0;
  for (const auto process : {AdiabaticCase::antistokes, AdiabaticCase::stokes}) {
    AdiabaticSweepOptions coarse;
    coarse.process = process;
    coarse.cavity_linewidth = 2 * std::numbers::pi * 500e6;
    auto fine = coarse;
    fine.dt_scale /= 2;
    const double r[] = {0.02};
    halving = std::max(halving, std::abs(validate_adiabatic(coarse, r)[0].occupation_integrated -
                                         validate_adiabatic(fine, r)[0].occupation_integrated));
  }
  o.require(halving <= 1e-6, fmt::format("step halving {:.2e}", halving));
  return o;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism(const Context& ctx) {
  Outcome o;
  if (ctx.mpnet.empty() || ctx.config.empty()) {
    o.require(false, "needs --mpnet and --config");
    return o;
  }
  const auto dir = std::filesystem::temp_directory_path() / "mpnet_acceptance_determinism";
  std::filesystem::create_directories(dir);
  const auto out = (dir / "out.csv").string();
  for (const std::string cmd : {"transfer", "entangle", "fig5", "validate", "qle"}) {
    std::string text[2];
    bool ran = true;
    for (auto& t : text) {
      const std::string line = fmt::format("\"{}\" {} \"{}\" --out \"{}\"", ctx.mpnet, cmd, ctx.config, out);
      ran = ran && std::system(line.c_str()) == 0;
      t = read_file(out);
    }
    o.require(ran && !text[0].empty() && text[0] == text[1], cmd + " byte-identical");
  }
  std::filesystem::remove_all(dir);
  return o;
}

struct Criterion {
  const char* title;
  std::function<Outcome(const Context&)> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {"conversion efficiencies", efficiencies},
      {"squeezing", squeezing},
      {"fiber transmittance", fiber},
      {"transfer fidelity", transfer_fidelity},
      {"lossless formulas", lossless},
      {"entanglement curves", fig5},
      {"loss channel equivalence", channels},
      {"moment integration", qle},
      {"property suites", properties},
      {"determinism", determinism},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mpnet acceptance suite"};
  int only = 0;
  Context ctx;
  app.add_option("--criterion", only, "run a single criterion (1-10)")->check(CLI::Range(1, 10));
  app.add_option("--mpnet", ctx.mpnet, "path of the mpnet executable");
  app.add_option("--config", ctx.config, "scenario file for the CLI runs");
  CLI11_PARSE(app, argc, argv);

  bool all_pass = true;
  for (std::size_t i = 0; i < criteria().size(); ++i) {
    if (only != 0 && static_cast<int>(i) + 1 != only) continue;
    Outcome outcome;
    try {
      outcome = criteria()[i].run(ctx);
    } catch (const std::exception& e) {
      outcome.require(false, std::string("exception: ") + e.what());
    }
    all_pass = all_pass && outcome.pass;
    fmt::print("{} {:>2} {}: {}\n", outcome.pass ? "PASS" : "FAIL", i + 1, criteria()[i].title,
               outcome.detail);
  }
  return all_pass ? 0 : 1;
}
