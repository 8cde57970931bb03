#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mpnet/channels.hpp"
#include "mpnet/fock.hpp"
#include "mpnet/propagators.hpp"
#include "mpnet/qle.hpp"

namespace mpnet {

/// All frequencies and rates are angular (rad/s).
struct MagnonicNodeSpec {
  double omega_1 = 0.0;  ///< TE mode (Stokes)
  double omega_2 = 0.0;  ///< TM mode (anti-Stokes)
  double omega_m = 0.0;  ///< magnon
  double kappa_1 = 0.0;
  double kappa_2 = 0.0;
  double kappa_m = 0.0;
  double single_photon_coupling = 0.0;
  std::vector<DriveSpec> drives;
};

struct MechanicalNodeSpec {
  double omega_c = 0.0;
  double omega_M = 0.0;
  double kappa_c = 0.0;
  double gamma = 0.0;
  double single_photon_coupling = 0.0;
  double effective_detuning = 0.0;  ///< tilde Delta_c; omega_M for a red-detuned swap
  double thermal_occupancy = 0.0;   ///< initial phonon occupation
  std::vector<DriveSpec> drives;
};

/// Initial magnon state: a Fock state, c0|0> + c1|1>, or an explicit
/// density table c(n, s) = <n|rho|s>.
class MagnonState {
 public:
  enum class Kind { fock, superposition, table };

  static MagnonState fock(int n);
  static MagnonState superposition(Complex c0, Complex c1);
  static MagnonState table(Eigen::MatrixXcd coefficients, std::string label = "table");

  Kind kind() const noexcept { return kind_; }
  int number() const noexcept { return n_; }
  Complex c0() const noexcept { return c0_; }
  Complex c1() const noexcept { return c1_; }
  const std::string& label() const noexcept { return label_; }

  /// Smallest truncation that holds the state.
  int min_dim() const;
  /// Density coefficients padded to `dim` levels.
  Eigen::MatrixXcd coefficients(int dim) const;

 private:
  MagnonState(Kind kind, std::string label) : kind_(kind), label_(std::move(label)) {}

  Kind kind_;
  std::string label_;
  int n_ = 0;
  Complex c0_{1.0, 0.0};
  Complex c1_{0.0, 0.0};
  Eigen::MatrixXcd table_;
};

struct ScenarioConfig {
  MagnonicNodeSpec magnonic;
  MechanicalNodeSpec mechanical;
  PulseSpec stokes{1.0, 1.0, 1.0};
  PulseSpec antistokes{1.0, 1.0, 1.0};
  PulseSpec optomech{1.0, 1.0, 1.0};
  FiberSpec fiber;
  int transfer_truncation = 12;
  int entangle_truncation = 30;
  double leak_tol = 1e-8;
  std::vector<MagnonState> initial_states{MagnonState::fock(1)};
  bool include_loss_in_entanglement = false;
};

/// 10 MHz couplings on a 500 MHz optomagnonic cavity (30 ns Stokes, 40 ns
/// anti-Stokes), 50 MHz on a 1.3 GHz optomechanical cavity (55 ns), 1 km of
/// 0.2 dB/km fiber.
ScenarioConfig default_scenario();

struct Check {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool passed = false;
  std::string detail;
};

/// Regime checks. Failures are returned as failed checks; structurally invalid
/// specs (negative rates, non-positive frequencies) throw InvalidArgument.
std::vector<Check> validate(const ScenarioConfig& scenario);

struct ClosedFormTransfer {
  /// tr(rho_target rho') of the double-sum phonon state.
  double fidelity_sum = 0.0;
  /// The family formula (S T W)^n-style for Fock states, the superposition
  /// formula for c0|0> + c1|1>; equal to fidelity_sum for tables.
  double fidelity_family = 0.0;
  /// Diagonal of the (subnormalized) phonon state.
  std::vector<double> populations;
};

/// Phonon state sum_ns c_ns S^((n+s)/2) sum_m sqrt(n!s!/(m!^2(n-m)!(s-m)!)) R^m (TW)^((n+s)/2-m) |n-m><s-m|.
Eigen::MatrixXcd closed_form_phonon_state(const Eigen::MatrixXcd& coefficients, double s,
                                          double w, double t);

ClosedFormTransfer closed_form_transfer(const MagnonState& state, double s, double w, double t);

struct TransferReport {
  std::string state;
  double s = 0.0;
  double w = 0.0;
  double t = 0.0;
  double exponent_antistokes = 0.0;
  double exponent_optomech = 0.0;
  /// Normalized phonon state of the successful branch (both depleted modes in vacuum).
  FockDensityMatrix phonon;
  double success_probability = 0.0;
  /// probability * tr(rho_target rho_phonon), after undoing the net swap phase.
  double fidelity_engine = 0.0;
  double fidelity_uncompensated = 0.0;
  /// tr(rho_target rho) for the unconditional phonon state (depleted modes traced).
  double fidelity_unconditional = 0.0;
  double fidelity_closed = 0.0;
  double leak = 0.0;
  std::vector<std::string> warnings{};
};

std::vector<TransferReport> run_transfer(const ScenarioConfig& scenario);
TransferReport run_transfer(const ScenarioConfig& scenario, const MagnonState& state);

struct EntangleReport {
  double r = 0.0;
  double r_effective = 0.0;
  double w = 0.0;
  double t = 1.0;  ///< fiber transmittance applied (1 unless loss is included)
  bool loss_included = false;
  /// Magnon (mode 0) and phonon (mode 1) state of the successful branch.
  FockDensityMatrix magnon_phonon;
  double success_probability = 0.0;
  double log_negativity_fock = 0.0;
  double log_negativity_closed = 0.0;
  double log_negativity_unconditional = 0.0;
  int truncation = 0;
  double leak = 0.0;
  std::vector<std::string> warnings{};
};

EntangleReport run_entanglement(const ScenarioConfig& scenario);

/// Same pipeline at explicit (r, W, T). Loss is skipped when t == 1.
EntangleReport run_entanglement(double r, double w, double t, int truncation, double leak_tol);

struct Fig5Row {
  double r = 0.0;
  double w = 0.0;
  double log_negativity_closed = 0.0;
  double log_negativity_fock = 0.0;
  int truncation = 0;
  double leak = 0.0;
};

/// Rows ordered by W descending, then r ascending.
std::vector<Fig5Row> fig5_curves(std::span<const double> r_grid, std::span<const double> w_list,
                                 int truncation = 30, double leak_tol = 1e-2);

}  // namespace mpnet
