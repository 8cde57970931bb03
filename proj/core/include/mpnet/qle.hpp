#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mpnet/gaussian.hpp"

namespace mpnet {

/// A classical drive feeding one cavity mode. Frequencies and rates in rad/s.
struct DriveSpec {
  double power = 0.0;               ///< W
  double frequency = 0.0;           ///< drive (laser) frequency
  double external_linewidth = 0.0;  ///< coupling rate of the cavity to the drive port
  double detuning = 0.0;            ///< cavity minus drive frequency (effective)
};

struct DriveAmplitude {
  double rate = 0.0;           ///< E = sqrt(P kappa_e / (hbar omega_d)), in 1/s
  std::complex<double> intracavity;  ///< E / (kappa/2 + i Delta)
};

DriveAmplitude drive_amplitude(const DriveSpec& drive, double total_linewidth);
/// G = g0 |<c>|.
double effective_coupling(double single_photon_coupling, const DriveAmplitude& amplitude);

enum class QleSystem {
  magnonic_antistokes,  ///< cavity a2 and magnon m, beamsplitter coupling
  magnonic_stokes,      ///< cavity a1 and magnon m, two-mode squeezing coupling
  optomech_red_rwa,     ///< cavity c and mechanics b, red sideband after RWA
  optomech_blue_rwa,    ///< blue sideband after RWA
  optomech_full,        ///< linearized optomechanics keeping counter-rotating terms
};

/// Mode 0 is always the cavity, mode 1 the magnon or mechanical mode.
struct QleParams {
  double cavity_linewidth = 0.0;
  double matter_linewidth = 0.0;  ///< kappa_m or gamma
  double coupling = 0.0;          ///< effective G
  double mechanical_frequency = 0.0;  ///< omega_M, optomech_full only
  double effective_detuning = 0.0;    ///< tilde Delta_c, optomech_full only
  double matter_thermal_occupancy = 0.0;
};

/// Linear moment dynamics dV/dt = A(t) V + V A(t)^T + D, d<R>/dt = A(t) <R>.
struct DriftDiffusion {
  int modes = 0;
  std::function<Eigen::MatrixXd(double)> drift;
  Eigen::MatrixXd diffusion;
  bool time_dependent = false;
  /// Largest rate or frequency in the model; integration steps must satisfy dt <= 0.05 / fastest_rate.
  double fastest_rate = 0.0;
};

/// Quadrature drift for da/dt = M(t) a + N(t) a^dag + sqrt(kappa) a_in with
/// vacuum (or thermal) white-noise inputs.
DriftDiffusion drift_from_mode_equations(
    int modes, std::function<void(double, Eigen::MatrixXcd&, Eigen::MatrixXcd&)> coefficients,
    std::span<const double> linewidths, std::span<const double> thermal_occupancies,
    bool time_dependent, double fastest_rate);

DriftDiffusion build_drift(QleSystem system, const QleParams& params);

/// Appends a cascaded filter mode of linewidth `filter_linewidth` driven by the
/// output a_out = sqrt(kappa) a - a_in of `cavity_mode`.
DriftDiffusion with_output_filter(const DriftDiffusion& base, int cavity_mode,
                                  double cavity_linewidth, double filter_linewidth);

/// A normalized pulse-shaped mode of an input or output field over [0, duration].
class TemporalMode {
 public:
  enum class Process { antistokes, stokes };
  enum class Direction { in, out };

  TemporalMode(Process process, Direction direction, double rate, double duration);

  double rate() const noexcept { return rate_; }
  double duration() const noexcept { return duration_; }
  /// True when the weight grows as exp(+rate s).
  bool growing() const noexcept;
  /// Weight w(s) with integral of w^2 over [0, duration] equal to 1.
  double weight(double s) const;

  /// A filter of linewidth 2 rate driven by the field ends in
  /// f = sqrt(admixture) f(0) - sqrt(1 - admixture) A; only growing profiles.
  double filter_linewidth() const;
  double vacuum_admixture() const;

 private:
  Process process_;
  Direction direction_;
  double rate_;
  double duration_;
};

/// Replaces the filter mode's moments by those of the temporal mode it captured.
CovarianceState recover_temporal_mode(const CovarianceState& state, int filter_mode,
                                      const TemporalMode& mode);

struct IntegrationOptions {
  double dt = 0.0;
  double blowup_bound = 1e12;
  /// Uncertainty-relation check every this many steps (0 disables).
  int check_every = 1;
  double physical_tol = 1e-9;
};

/// Fixed-step classical RK4 over [t0, t1]. The step is shrunk to divide the
/// interval evenly. Throws NumericalInstability on blowup or unphysical moments.
CovarianceState integrate(const CovarianceState& initial, const DriftDiffusion& dynamics, double t0,
                          double t1, const IntegrationOptions& options);

enum class AdiabaticCase { antistokes, stokes };

struct AdiabaticSweepOptions {
  AdiabaticCase process = AdiabaticCase::antistokes;
  double cavity_linewidth = 0.0;
  /// rate * duration held fixed across the sweep.
  double exponent = 0.1;
  /// Magnon occupation before the anti-Stokes pulse (ignored for Stokes, which starts in vacuum).
  double initial_occupation = 1.0;
  /// dt = dt_scale / cavity_linewidth.
  double dt_scale = 0.02;
};

/// For anti-Stokes, eta = 1 - n(tau)/n0; for Stokes, eta = n/(n+1) = tanh^2 r.
/// Both are compared with 1 - exp(-2 rate tau).
struct AdiabaticRow {
  double coupling_ratio = 0.0;
  double duration = 0.0;
  double eta_integrated = 0.0;
  double eta_closed = 0.0;
  double rel_err = 0.0;
  double occupation_integrated = 0.0;
  double occupation_closed = 0.0;
  double occupation_rel_err = 0.0;
};

std::vector<AdiabaticRow> validate_adiabatic(const AdiabaticSweepOptions& options,
                                             std::span<const double> coupling_ratios);

struct RwaComparison {
  double occupation_rwa = 0.0;
  double occupation_full = 0.0;
  double efficiency_rwa = 0.0;
  double efficiency_full = 0.0;
};

/// Red-detuned optomechanical swap from a thermal phonon state of occupation
/// n0, integrated with and without counter-rotating terms.
RwaComparison compare_optomech_rwa(const QleParams& params, double duration,
                                   double initial_occupation, double dt_scale = 0.02);

struct StokesEntanglement {
  double log_negativity_integrated = 0.0;
  double log_negativity_closed = 0.0;  ///< 2 r
  double squeezing = 0.0;
  double magnon_occupation = 0.0;
};

/// Integrates the Stokes QLEs (kappa_m = 0) with a cascaded filter on the
/// cavity output and evaluates E_N between the magnon and the output temporal mode.
StokesEntanglement stokes_output_entanglement(double cavity_linewidth, double coupling,
                                              double duration, double dt_scale = 0.02);

}  // namespace mpnet
