#include "mpnet/qle.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "mpnet/errors.hpp"
#include "mpnet/metrics.hpp"
#include "mpnet/units.hpp"

namespace mpnet {
namespace {

using Cplx = std::complex<double>;
constexpr Cplx kI(0.0, 1.0);

Eigen::MatrixXd quadrature_drift(const Eigen::MatrixXcd& m, const Eigen::MatrixXcd& n) {
  const auto modes = m.rows();
  const Eigen::MatrixXcd sum = m + n;
  const Eigen::MatrixXcd diff = m - n;
  Eigen::MatrixXd a(2 * modes, 2 * modes);
  for (Eigen::Index i = 0; i < modes; ++i) {
    for (Eigen::Index j = 0; j < modes; ++j) {
      a(2 * i, 2 * j) = sum(i, j).real();
      a(2 * i, 2 * j + 1) = -diff(i, j).imag();
      a(2 * i + 1, 2 * j) = sum(i, j).imag();
      a(2 * i + 1, 2 * j + 1) = diff(i, j).real();
    }
  }
  return a;
}

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw InvalidArgument(std::string(name) + " must be finite and > 0");
  }
}

Eigen::MatrixXd lyapunov_rhs(const Eigen::MatrixXd& a, const Eigen::MatrixXd& v,
                             const Eigen::MatrixXd& d) {
  return a * v + v * a.transpose() + d;
}

}  // namespace

DriveAmplitude drive_amplitude(const DriveSpec& drive, double total_linewidth) {
  if (drive.power < 0.0) throw InvalidArgument("drive power must be >= 0");
  require_positive(total_linewidth, "total linewidth");
  DriveAmplitude out;
  if (drive.power == 0.0) return out;
  require_positive(drive.frequency, "drive frequency");
  require_positive(drive.external_linewidth, "external linewidth");
  out.rate = std::sqrt(drive.power * drive.external_linewidth / (units::hbar * drive.frequency));
  out.intracavity = out.rate / Cplx(0.5 * total_linewidth, drive.detuning);
  return out;
}

double effective_coupling(double single_photon_coupling, const DriveAmplitude& amplitude) {
  return single_photon_coupling * std::abs(amplitude.intracavity);
}

DriftDiffusion drift_from_mode_equations(
    int modes, std::function<void(double, Eigen::MatrixXcd&, Eigen::MatrixXcd&)> coefficients,
    std::span<const double> linewidths, std::span<const double> thermal_occupancies,
    bool time_dependent, double fastest_rate) {
  if (modes < 1) throw InvalidArgument("need at least one mode");
  if (linewidths.size() != static_cast<std::size_t>(modes) ||
      thermal_occupancies.size() != static_cast<std::size_t>(modes)) {
    throw InvalidArgument("one linewidth and one thermal occupancy per mode");
  }
  DriftDiffusion dd;
  dd.modes = modes;
  dd.diffusion = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    if (linewidths[k] < 0.0 || thermal_occupancies[k] < 0.0) {
      throw InvalidArgument("linewidths and thermal occupancies must be >= 0");
    }
    const double d = linewidths[k] * (2.0 * thermal_occupancies[k] + 1.0);
    dd.diffusion(2 * k, 2 * k) = d;
    dd.diffusion(2 * k + 1, 2 * k + 1) = d;
  }
  dd.time_dependent = time_dependent;
  dd.fastest_rate = fastest_rate;
  dd.drift = [modes, coefficients = std::move(coefficients)](double t) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(modes, modes);
    Eigen::MatrixXcd n = Eigen::MatrixXcd::Zero(modes, modes);
    coefficients(t, m, n);
    return quadrature_drift(m, n);
  };
  return dd;
}

DriftDiffusion build_drift(QleSystem system, const QleParams& p) {
  require_positive(p.cavity_linewidth, "cavity linewidth");
  if (p.matter_linewidth < 0.0 || p.coupling < 0.0) {
    throw InvalidArgument("matter linewidth and coupling must be >= 0");
  }
  const double kc = p.cavity_linewidth;
  const double km = p.matter_linewidth;
  const double g = p.coupling;
  const double linewidths[] = {kc, km};
  const double thermal[] = {0.0, p.matter_thermal_occupancy};
  const double fastest = std::max({kc, km, g});

  switch (system) {
    case QleSystem::magnonic_antistokes:
      // da2/dt = -k2/2 a2 - i G2 m,  dm/dt = -km/2 m - i G2 a2
      return drift_from_mode_equations(
          2,
          [=](double, Eigen::MatrixXcd& m, Eigen::MatrixXcd&) {
            m << -0.5 * kc, -kI * g, -kI * g, -0.5 * km;
          },
          linewidths, thermal, false, fastest);
    case QleSystem::magnonic_stokes:
      // da1/dt = -k1/2 a1 - i G1 m^dag,  dm/dt = -km/2 m - i G1 a1^dag
      return drift_from_mode_equations(
          2,
          [=](double, Eigen::MatrixXcd& m, Eigen::MatrixXcd& n) {
            m(0, 0) = -0.5 * kc;
            m(1, 1) = -0.5 * km;
            n(0, 1) = -kI * g;
            n(1, 0) = -kI * g;
          },
          linewidths, thermal, false, fastest);
    case QleSystem::optomech_red_rwa:
      return drift_from_mode_equations(
          2,
          [=](double, Eigen::MatrixXcd& m, Eigen::MatrixXcd&) {
            m << -0.5 * kc, kI * g, kI * g, -0.5 * km;
          },
          linewidths, thermal, false, fastest);
    case QleSystem::optomech_blue_rwa:
      return drift_from_mode_equations(
          2,
          [=](double, Eigen::MatrixXcd& m, Eigen::MatrixXcd& n) {
            m(0, 0) = -0.5 * kc;
            m(1, 1) = -0.5 * km;
            n(0, 1) = kI * g;
            n(1, 0) = kI * g;
          },
          linewidths, thermal, false, fastest);
    case QleSystem::optomech_full: {
      require_positive(p.mechanical_frequency, "mechanical frequency");
      const double wm = p.mechanical_frequency;
      const double det = p.effective_detuning;
      return drift_from_mode_equations(
          2,
          [=](double t, Eigen::MatrixXcd& m, Eigen::MatrixXcd& n) {
            m(0, 0) = -0.5 * kc;
            m(1, 1) = -0.5 * km;
            m(0, 1) = kI * g * std::exp(kI * (det - wm) * t);
            m(1, 0) = kI * g * std::exp(kI * (wm - det) * t);
            n(0, 1) = kI * g * std::exp(kI * (det + wm) * t);
            n(1, 0) = kI * g * std::exp(kI * (wm + det) * t);
          },
          linewidths, thermal, true, std::max({fastest, wm, std::abs(det)}));
    }
  }
  throw InvalidArgument("unknown QLE system");
}

DriftDiffusion with_output_filter(const DriftDiffusion& base, int cavity_mode,
                                  double cavity_linewidth, double filter_linewidth) {
  if (cavity_mode < 0 || cavity_mode >= base.modes) throw InvalidArgument("cavity mode out of range");
  require_positive(cavity_linewidth, "cavity linewidth");
  require_positive(filter_linewidth, "filter linewidth");
  DriftDiffusion out;
  out.modes = base.modes + 1;
  out.time_dependent = base.time_dependent;
  out.fastest_rate = std::max(base.fastest_rate, filter_linewidth);
  const int f = 2 * base.modes;
  const int c = 2 * cavity_mode;
  const double coupling = std::sqrt(cavity_linewidth * filter_linewidth);

  // df/dt = -kf/2 f - sqrt(kf) a_out = -kf/2 f - sqrt(kf kc) a + sqrt(kf) a_in
  out.diffusion = Eigen::MatrixXd::Zero(2 * out.modes, 2 * out.modes);
  out.diffusion.topLeftCorner(f, f) = base.diffusion;
  for (int q = 0; q < 2; ++q) {
    out.diffusion(f + q, f + q) = filter_linewidth;
    out.diffusion(c + q, f + q) = coupling;
    out.diffusion(f + q, c + q) = coupling;
  }
  out.drift = [base_drift = base.drift, f, c, coupling, filter_linewidth](double t) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(f + 2, f + 2);
    a.topLeftCorner(f, f) = base_drift(t);
    for (int q = 0; q < 2; ++q) {
      a(f + q, f + q) = -0.5 * filter_linewidth;
      a(f + q, c + q) = -coupling;
    }
    return a;
  };
  return out;
}

// ---------------------------------------------------------------- TemporalMode

TemporalMode::TemporalMode(Process process, Direction direction, double rate, double duration)
    : process_(process), direction_(direction), rate_(rate), duration_(duration) {
  require_positive(rate, "temporal mode rate");
  require_positive(duration, "temporal mode duration");
}

bool TemporalMode::growing() const noexcept {
  const bool input = direction_ == Direction::in;
  return process_ == Process::antistokes ? input : !input;
}

double TemporalMode::weight(double s) const {
  const double x = rate_ * duration_;
  if (growing()) return std::sqrt(2.0 * rate_ / std::expm1(2.0 * x)) * std::exp(rate_ * s);
  return std::sqrt(2.0 * rate_ / -std::expm1(-2.0 * x)) * std::exp(-rate_ * s);
}

double TemporalMode::filter_linewidth() const {
  if (!growing()) throw InvalidArgument("a decaying temporal profile is not a passive filter response");
  return 2.0 * rate_;
}

double TemporalMode::vacuum_admixture() const {
  if (!growing()) throw InvalidArgument("a decaying temporal profile is not a passive filter response");
  return std::exp(-2.0 * rate_ * duration_);
}

CovarianceState recover_temporal_mode(const CovarianceState& state, int filter_mode,
                                      const TemporalMode& mode) {
  if (filter_mode < 0 || filter_mode >= state.modes()) throw InvalidArgument("filter mode out of range");
  const double w = mode.vacuum_admixture();
  const double scale = -1.0 / std::sqrt(1.0 - w);
  Eigen::VectorXd mean = state.mean();
  Eigen::MatrixXd cm = state.cm();
  const int f = 2 * filter_mode;
  mean.segment(f, 2) *= scale;
  cm.middleRows(f, 2) *= scale;
  cm.middleCols(f, 2) *= scale;
  // The filter block picked up scale^2 (V_ff); remove the vacuum share.
  cm.block(f, f, 2, 2) -= w / (1.0 - w) * Eigen::Matrix2d::Identity();
  return {mean, cm};
}

// ---------------------------------------------------------------- integration

CovarianceState integrate(const CovarianceState& initial, const DriftDiffusion& dynamics, double t0,
                          double t1, const IntegrationOptions& options) {
  if (initial.modes() != dynamics.modes) throw InvalidArgument("state and dynamics mode counts differ");
  if (!(t1 >= t0)) throw InvalidArgument("integration interval must satisfy t1 >= t0");
  require_positive(options.dt, "dt");
  if (dynamics.fastest_rate > 0.0 && options.dt * dynamics.fastest_rate > 0.05 * (1.0 + 1e-12)) {
    throw InvalidArgument("dt does not resolve the fastest rate: dt * rate = " +
                          std::to_string(options.dt * dynamics.fastest_rate) + " > 0.05");
  }
  const double span = t1 - t0;
  const auto steps = static_cast<long long>(std::ceil(span / options.dt - 1e-9));
  if (steps == 0) return initial;
  const double h = span / static_cast<double>(steps);
  const Eigen::MatrixXd& d = dynamics.diffusion;

  Eigen::VectorXd mean = initial.mean();
  Eigen::MatrixXd v = initial.cm();
  Eigen::MatrixXd a_begin = dynamics.drift(t0);
  for (long long k = 0; k < steps; ++k) {
    const double t = t0 + static_cast<double>(k) * h;
    const Eigen::MatrixXd a_mid = dynamics.time_dependent ? dynamics.drift(t + 0.5 * h) : a_begin;
    const Eigen::MatrixXd a_end = dynamics.time_dependent ? dynamics.drift(t + h) : a_begin;

    const Eigen::MatrixXd k1 = lyapunov_rhs(a_begin, v, d);
    const Eigen::MatrixXd k2 = lyapunov_rhs(a_mid, v + 0.5 * h * k1, d);
    const Eigen::MatrixXd k3 = lyapunov_rhs(a_mid, v + 0.5 * h * k2, d);
    const Eigen::MatrixXd k4 = lyapunov_rhs(a_end, v + h * k3, d);
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    v = 0.5 * (v + v.transpose()).eval();

    const Eigen::VectorXd m1 = a_begin * mean;
    const Eigen::VectorXd m2 = a_mid * (mean + 0.5 * h * m1);
    const Eigen::VectorXd m3 = a_mid * (mean + 0.5 * h * m2);
    const Eigen::VectorXd m4 = a_end * (mean + h * m3);
    mean += (h / 6.0) * (m1 + 2.0 * m2 + 2.0 * m3 + m4);

    if (!v.allFinite() || v.cwiseAbs().maxCoeff() > options.blowup_bound) {
      throw NumericalInstability("covariance matrix exceeded the blowup bound at t = " +
                                 std::to_string(t + h));
    }
    if (options.check_every > 0 && (k + 1) % options.check_every == 0) {
      const CovarianceState current(mean, v);
      const double violation = current.uncertainty_violation();
      if (violation > options.physical_tol) {
        throw NumericalInstability("uncertainty relation violated by " + std::to_string(violation) +
                                   " at t = " + std::to_string(t + h));
      }
    }
    if (dynamics.time_dependent) a_begin = a_end;
  }
  return {mean, v};
}

// ---------------------------------------------------------------- validation runs

std::vector<AdiabaticRow> validate_adiabatic(const AdiabaticSweepOptions& options,
                                             std::span<const double> coupling_ratios) {
  require_positive(options.cavity_linewidth, "cavity linewidth");
  require_positive(options.exponent, "rate * duration");
  require_positive(options.dt_scale, "dt scale");
  const double kappa = options.cavity_linewidth;
  const double x = options.exponent;
  const double eta_closed = -std::expm1(-2.0 * x);

  std::vector<AdiabaticRow> rows;
  for (const double ratio : coupling_ratios) {
    require_positive(ratio, "G / kappa");
    AdiabaticRow row;
    row.coupling_ratio = ratio;
    const double coupling = ratio * kappa;
    const double rate = 2.0 * coupling * coupling / kappa;
    row.duration = x / rate;

    QleParams params;
    params.cavity_linewidth = kappa;
    params.coupling = coupling;
    IntegrationOptions integration;
    integration.dt = options.dt_scale / kappa;

    if (options.process == AdiabaticCase::antistokes) {
      require_positive(options.initial_occupation, "initial occupation");
      const auto dynamics = build_drift(QleSystem::magnonic_antistokes, params);
      const double occ[] = {0.0, options.initial_occupation};
      const auto final_state =
          integrate(CovarianceState::thermal(occ), dynamics, 0.0, row.duration, integration);
      row.occupation_integrated = final_state.occupation(1);
      row.occupation_closed = options.initial_occupation * std::exp(-2.0 * x);
      row.eta_integrated = 1.0 - row.occupation_integrated / options.initial_occupation;
    } else {
      const auto dynamics = build_drift(QleSystem::magnonic_stokes, params);
      const auto final_state =
          integrate(CovarianceState::vacuum(2), dynamics, 0.0, row.duration, integration);
      row.occupation_integrated = final_state.occupation(1);
      row.occupation_closed = std::expm1(2.0 * x);
      row.eta_integrated = row.occupation_integrated / (row.occupation_integrated + 1.0);
    }
    row.eta_closed = eta_closed;
    row.rel_err = std::abs(row.eta_integrated - eta_closed) / eta_closed;
    row.occupation_rel_err =
        std::abs(row.occupation_integrated - row.occupation_closed) / row.occupation_closed;
    rows.push_back(row);
  }
  return rows;
}

RwaComparison compare_optomech_rwa(const QleParams& params, double duration,
                                   double initial_occupation, double dt_scale) {
  require_positive(duration, "duration");
  require_positive(initial_occupation, "initial occupation");
  QleParams red = params;
  red.effective_detuning = params.mechanical_frequency;
  const auto rwa = build_drift(QleSystem::optomech_red_rwa, red);
  const auto full = build_drift(QleSystem::optomech_full, red);
  const double occ[] = {0.0, initial_occupation};
  const auto start = CovarianceState::thermal(occ);

  IntegrationOptions rwa_opts;
  rwa_opts.dt = dt_scale / rwa.fastest_rate;
  IntegrationOptions full_opts;
  full_opts.dt = dt_scale / full.fastest_rate;

  RwaComparison out;
  out.occupation_rwa = integrate(start, rwa, 0.0, duration, rwa_opts).occupation(1);
  out.occupation_full = integrate(start, full, 0.0, duration, full_opts).occupation(1);
  out.efficiency_rwa = 1.0 - out.occupation_rwa / initial_occupation;
  out.efficiency_full = 1.0 - out.occupation_full / initial_occupation;
  return out;
}

StokesEntanglement stokes_output_entanglement(double cavity_linewidth, double coupling,
                                              double duration, double dt_scale) {
  QleParams params;
  params.cavity_linewidth = cavity_linewidth;
  params.coupling = coupling;
  const double rate = 2.0 * coupling * coupling / cavity_linewidth;
  const TemporalMode output(TemporalMode::Process::stokes, TemporalMode::Direction::out, rate,
                            duration);
  const auto dynamics = with_output_filter(build_drift(QleSystem::magnonic_stokes, params), 0,
                                           cavity_linewidth, output.filter_linewidth());
  IntegrationOptions integration;
  integration.dt = dt_scale / dynamics.fastest_rate;
  const auto final_state =
      integrate(CovarianceState::vacuum(3), dynamics, 0.0, duration, integration);
  const auto recovered = recover_temporal_mode(final_state, 2, output);
  const int pair[] = {1, 2};
  const auto magnon_and_pulse = recovered.reduced(pair);
  const int transposed[] = {1};

  StokesEntanglement out;
  out.log_negativity_integrated = log_negativity_gaussian(magnon_and_pulse, transposed).log_negativity;
  out.squeezing = std::atanh(std::sqrt(-std::expm1(-2.0 * rate * duration)));
  out.log_negativity_closed = 2.0 * out.squeezing;
  out.magnon_occupation = final_state.occupation(1);
  return out;
}

}  // namespace mpnet
