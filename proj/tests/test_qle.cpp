#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "mpnet/errors.hpp"
#include "mpnet/gaussian.hpp"
#include "mpnet/qle.hpp"
#include "mpnet/units.hpp"

using namespace mpnet;
using Eigen::MatrixXd;
using Cplx = std::complex<double>;

namespace {

constexpr double kKappa = 2.0 * 3.141592653589793 * 500e6;

QleParams magnonic(double ratio) {
  QleParams p;
  p.cavity_linewidth = kKappa;
  p.coupling = ratio * kKappa;
  return p;
}

// Exact solution of dV/dt = A V + V A^T + D for constant A via the vectorized
// linear system, exponentiated with Eigen's MatrixFunctions module.
MatrixXd lyapunov_exact(const MatrixXd& a, const MatrixXd& d, const MatrixXd& v0, double t) {
  const auto n = a.rows();
  const MatrixXd id = MatrixXd::Identity(n, n);
  MatrixXd l(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) l.block(i * n, j * n, n, n) = a(i, j) * id + (i == j ? a : MatrixXd::Zero(n, n));
  // Augment with the constant source so one exponential does everything.
  MatrixXd big = MatrixXd::Zero(n * n + 1, n * n + 1);
  big.topLeftCorner(n * n, n * n) = l;
  // vec is column-major: V(r, c) -> c * n + r; with l built as (A kron I + I kron A) in that order.
  big.topRightCorner(n * n, 1) = Eigen::Map<const Eigen::VectorXd>(d.data(), n * n);
  Eigen::VectorXd start(n * n + 1);
  start.head(n * n) = Eigen::Map<const Eigen::VectorXd>(v0.data(), n * n);
  start(n * n) = 1.0;
  const MatrixXd prop = (big * t).exp();
  const Eigen::VectorXd end = prop * start;
  return Eigen::Map<const MatrixXd>(end.data(), n, n);
}

}  // namespace

TEST(DriveAmplitude, Basics) {
  DriveSpec d;
  EXPECT_EQ(std::abs(drive_amplitude(d, 1e9).intracavity), 0.0);
  d.power = 1e-3;
  d.frequency = units::angular(193.4e12);
  d.external_linewidth = 1e9;
  const auto a = drive_amplitude(d, 2e9);
  EXPECT_NEAR(a.rate, std::sqrt(d.power * d.external_linewidth / (units::hbar * d.frequency)),
              1e-9 * a.rate);
  EXPECT_NEAR(a.intracavity.real(), 2.0 * a.rate / 2e9, 1e-12 * a.rate);
  EXPECT_EQ(a.intracavity.imag(), 0.0);

  auto d2 = d;
  d2.power *= 2.0;
  const double g0 = 2.0 * 3.141592653589793 * 100.0;
  EXPECT_NEAR(effective_coupling(g0, drive_amplitude(d2, 2e9)) / effective_coupling(g0, a),
              std::sqrt(2.0), 1e-12);
  d.detuning = 1e9;
  EXPECT_LT(std::abs(drive_amplitude(d, 2e9).intracavity), std::abs(a.intracavity));
  d.power = -1.0;
  EXPECT_THROW(drive_amplitude(d, 2e9), InvalidArgument);
}

TEST(DriftFromModeEquations, MatchesClassicalAmplitudeDerivative) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  const int modes = 3;
  Eigen::MatrixXcd m(modes, modes), n(modes, modes);
  for (int i = 0; i < modes; ++i)
    for (int j = 0; j < modes; ++j) {
      m(i, j) = Cplx(g(rng), g(rng));
      n(i, j) = Cplx(g(rng), g(rng));
    }
  const double lw[] = {1.0, 2.0, 0.5};
  const double th[] = {0.0, 0.3, 1.0};
  const auto dd = drift_from_mode_equations(
      modes, [&](double, Eigen::MatrixXcd& mm, Eigen::MatrixXcd& nn) { mm = m; nn = n; }, lw, th,
      false, 3.0);
  const MatrixXd a = dd.drift(0.0);
  // alpha' = M alpha + N conj(alpha); x = 2 Re alpha, p = 2 Im alpha.
  Eigen::VectorXcd alpha(modes);
  for (int i = 0; i < modes; ++i) alpha(i) = Cplx(g(rng), g(rng));
  const Eigen::VectorXcd dalpha = m * alpha + n * alpha.conjugate();
  Eigen::VectorXd r(2 * modes), dr(2 * modes);
  for (int i = 0; i < modes; ++i) {
    r(2 * i) = 2 * alpha(i).real();
    r(2 * i + 1) = 2 * alpha(i).imag();
    dr(2 * i) = 2 * dalpha(i).real();
    dr(2 * i + 1) = 2 * dalpha(i).imag();
  }
  EXPECT_LT((a * r - dr).norm(), 1e-12);
  for (int i = 0; i < modes; ++i) {
    EXPECT_NEAR(dd.diffusion(2 * i, 2 * i), lw[i] * (2 * th[i] + 1), 1e-15);
    EXPECT_NEAR(dd.diffusion(2 * i + 1, 2 * i + 1), lw[i] * (2 * th[i] + 1), 1e-15);
  }
}

TEST(BuildDrift, AntistokesSlowPoleApproachesAdiabaticRate) {
  double previous = 1.0;
  for (double ratio : {0.1, 0.02, 0.005}) {
    const auto p = magnonic(ratio);
    const MatrixXd a = build_drift(QleSystem::magnonic_antistokes, p).drift(0.0);
    const Eigen::VectorXcd ev = a.eigenvalues();
    double slow = -1e300;
    for (auto e : ev) slow = std::max(slow, e.real());
    const double rate = 2 * p.coupling * p.coupling / p.cavity_linewidth;
    const double err = std::abs(-slow - rate) / rate;
    EXPECT_LT(err, previous);
    previous = err;
  }
  EXPECT_LT(previous, 1e-3);
}

TEST(BuildDrift, DecoupledRedRwaDecaysAtHalfLinewidths) {
  QleParams p;
  p.cavity_linewidth = 3.0;
  p.matter_linewidth = 0.2;
  const MatrixXd a = build_drift(QleSystem::optomech_red_rwa, p).drift(0.0);
  MatrixXd expect = MatrixXd::Zero(4, 4);
  expect.diagonal() << -1.5, -1.5, -0.1, -0.1;
  EXPECT_LT((a - expect).norm(), 1e-15);
}

TEST(BuildDrift, BlueRwaInstabilityThreshold) {
  QleParams p;
  p.cavity_linewidth = 4.0;
  p.matter_linewidth = 1.0;
  auto max_real = [&](double g) {
    p.coupling = g;
    const Eigen::VectorXcd ev = build_drift(QleSystem::optomech_blue_rwa, p).drift(0.0).eigenvalues();
    double best = -1e300;
    for (auto e : ev) best = std::max(best, e.real());
    return best;
  };
  // 4 G^2 = kappa gamma at G = 1.
  EXPECT_LT(max_real(0.9), 0.0);
  EXPECT_GT(max_real(1.1), 0.0);
}

TEST(BuildDrift, DiffusionIsPositiveAndInputsValidated) {
  auto p = magnonic(0.02);
  p.matter_linewidth = 1e6;
  p.matter_thermal_occupancy = 2.0;
  for (auto s : {QleSystem::magnonic_antistokes, QleSystem::magnonic_stokes,
                 QleSystem::optomech_red_rwa, QleSystem::optomech_blue_rwa}) {
    const auto dd = build_drift(s, p);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(dd.diffusion);
    EXPECT_GE(es.eigenvalues().minCoeff(), 0.0);
  }
  EXPECT_THROW(build_drift(QleSystem::optomech_full, p), InvalidArgument);
  p.cavity_linewidth = 0.0;
  EXPECT_THROW(build_drift(QleSystem::magnonic_antistokes, p), InvalidArgument);
}

TEST(Integrate, VacuumIsStationary) {
  QleParams p;
  p.cavity_linewidth = 1.0;
  p.matter_linewidth = 0.5;
  const auto dd = build_drift(QleSystem::optomech_red_rwa, p);
  IntegrationOptions o;
  o.dt = 0.01;
  const auto out = integrate(CovarianceState::vacuum(2), dd, 0.0, 100.0, o);  // 10^4 steps
  EXPECT_LT((out.cm() - MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Integrate, MatchesExactLyapunovSolution) {
  const auto p = magnonic(0.1);
  const auto dd = build_drift(QleSystem::magnonic_stokes, p);
  IntegrationOptions o;
  o.dt = 0.02 / kKappa;
  const double t = 40.0 / kKappa;
  const double occ[] = {0.0, 0.5};
  const auto start = CovarianceState::thermal(occ);
  const auto out = integrate(start, dd, 0.0, t, o);
  const MatrixXd ref = lyapunov_exact(dd.drift(0.0), dd.diffusion, start.cm(), t);
  EXPECT_LT((out.cm() - ref).cwiseAbs().maxCoeff() / ref.cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Integrate, GuardsStepAndBlowup) {
  const auto dd = build_drift(QleSystem::magnonic_antistokes, magnonic(0.02));
  IntegrationOptions o;
  o.dt = 0.1 / kKappa;
  EXPECT_THROW(integrate(CovarianceState::vacuum(2), dd, 0.0, 1e-9, o), InvalidArgument);
  o.dt = 0.0;
  EXPECT_THROW(integrate(CovarianceState::vacuum(2), dd, 0.0, 1e-9, o), InvalidArgument);

  QleParams p;
  p.cavity_linewidth = 1.0;
  p.matter_linewidth = 1.0;
  p.coupling = 5.0;
  const auto unstable = build_drift(QleSystem::optomech_blue_rwa, p);
  IntegrationOptions u;
  u.dt = 0.01;
  u.blowup_bound = 1e6;
  EXPECT_THROW(integrate(CovarianceState::vacuum(2), unstable, 0.0, 100.0, u), NumericalInstability);
}

TEST(Integrate, EndpointsAndStepCountAreExact) {
  const auto dd = build_drift(QleSystem::magnonic_antistokes, magnonic(0.02));
  IntegrationOptions o;
  o.dt = 0.02 / kKappa;
  const auto s = CovarianceState::vacuum(2);
  EXPECT_EQ(integrate(s, dd, 1.0, 1.0, o).cm(), s.cm());
  EXPECT_THROW(integrate(s, dd, 1.0, 0.5, o), InvalidArgument);
}

TEST(Integrate, AntistokesResidualOccupation) {
  const double x = 0.1;
  for (double ratio : {0.005, 0.02}) {
    AdiabaticSweepOptions opts;
    opts.cavity_linewidth = kKappa;
    opts.exponent = x;
    opts.initial_occupation = 3.0;
    const double r[] = {ratio};
    const auto row = validate_adiabatic(opts, r).front();
    EXPECT_NEAR(row.occupation_closed, 3.0 * std::exp(-2 * x), 1e-15);
    EXPECT_LT(row.occupation_rel_err, 0.02) << ratio;
  }
}

TEST(Integrate, StokesOccupationInAdiabaticLimit) {
  AdiabaticSweepOptions opts;
  opts.process = AdiabaticCase::stokes;
  opts.cavity_linewidth = kKappa;
  opts.exponent = 0.075;
  const double r[] = {0.005};
  const auto row = validate_adiabatic(opts, r).front();
  EXPECT_NEAR(row.occupation_closed, std::expm1(0.15), 1e-15);
  EXPECT_LT(row.occupation_rel_err, 0.02);
}

TEST(ValidateAdiabatic, ErrorGrowsWithCouplingRatio) {
  for (auto process : {AdiabaticCase::antistokes, AdiabaticCase::stokes}) {
    AdiabaticSweepOptions opts;
    opts.process = process;
    opts.cavity_linewidth = kKappa;
    const double ratios[] = {0.0025, 0.005, 0.02, 0.1};
    const auto rows = validate_adiabatic(opts, ratios);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      EXPECT_GT(rows[i].rel_err, rows[i - 1].rel_err);
      EXPECT_GT(rows[i].occupation_rel_err, rows[i - 1].occupation_rel_err);
    }
    EXPECT_LT(rows.front().rel_err, 1e-3);
  }
}

TEST(Integrate, StepHalvingIsStable) {
  for (auto process : {AdiabaticCase::antistokes, AdiabaticCase::stokes}) {
    AdiabaticSweepOptions coarse;
    coarse.process = process;
    coarse.cavity_linewidth = kKappa;
    auto fine = coarse;
    fine.dt_scale = 0.5 * coarse.dt_scale;
    const double r[] = {0.02};
    const double a = validate_adiabatic(coarse, r).front().occupation_integrated;
    const double b = validate_adiabatic(fine, r).front().occupation_integrated;
    EXPECT_LT(std::abs(a - b), 1e-6);
  }
}

TEST(Integrate, SingleModeBlocksStayAboveVacuumDeterminant) {
  const auto dd = build_drift(QleSystem::magnonic_stokes, magnonic(0.05));
  IntegrationOptions o;
  o.dt = 0.02 / kKappa;
  auto state = CovarianceState::vacuum(2);
  for (int chunk = 0; chunk < 20; ++chunk) {
    state = integrate(state, dd, chunk * 5.0 / kKappa, (chunk + 1) * 5.0 / kKappa, o);
    for (int m = 0; m < 2; ++m) {
      EXPECT_GE(state.cm().block(2 * m, 2 * m, 2, 2).determinant(), 1.0 - 1e-9);
    }
    EXPECT_GE(state.cm().determinant(), 1.0 - 1e-9);
    EXPECT_LT(state.uncertainty_violation(), 1e-9);
  }
}

TEST(OptomechRwa, AgreesWithFullModelInResolvedSidebands) {
  QleParams p;
  p.cavity_linewidth = units::angular(1.3e9);
  p.matter_linewidth = units::angular(4.8e3);
  p.coupling = units::angular(50e6);
  p.mechanical_frequency = units::angular(5.3e9);
  const auto cmp = compare_optomech_rwa(p, 55e-9, 1.0);
  EXPECT_NEAR(cmp.efficiency_full, cmp.efficiency_rwa, 0.05 * cmp.efficiency_rwa);
  EXPECT_NEAR(cmp.efficiency_rwa, 0.93, 0.01);
  // Counter-rotating heating sits near the backaction floor (kappa / 4 omega_M)^2.
  const double floor = std::pow(p.cavity_linewidth / (4 * p.mechanical_frequency), 2);
  EXPECT_GT(cmp.occupation_full, cmp.occupation_rwa);
  EXPECT_LT(cmp.occupation_full - cmp.occupation_rwa, 1.5 * floor);
}

TEST(TemporalMode, WeightsAreNormalized) {
  for (auto proc : {TemporalMode::Process::antistokes, TemporalMode::Process::stokes}) {
    for (auto dir : {TemporalMode::Direction::in, TemporalMode::Direction::out}) {
      const TemporalMode m(proc, dir, 3.0, 0.7);
      // Simpson's rule on w(s)^2.
      const int n = 2000;
      const double h = 0.7 / n;
      double sum = 0.0;
      for (int k = 0; k <= n; ++k) {
        const double w2 = std::pow(m.weight(k * h), 2);
        sum += (k == 0 || k == n ? 1 : (k % 2 ? 4 : 2)) * w2;
      }
      EXPECT_NEAR(sum * h / 3.0, 1.0, 1e-10);
    }
  }
  const TemporalMode stokes_out(TemporalMode::Process::stokes, TemporalMode::Direction::out, 2.0, 0.5);
  EXPECT_TRUE(stokes_out.growing());
  EXPECT_EQ(stokes_out.filter_linewidth(), 4.0);
  EXPECT_NEAR(stokes_out.vacuum_admixture(), std::exp(-2.0), 1e-15);
  const TemporalMode stokes_in(TemporalMode::Process::stokes, TemporalMode::Direction::in, 2.0, 0.5);
  EXPECT_FALSE(stokes_in.growing());
  EXPECT_THROW(stokes_in.filter_linewidth(), InvalidArgument);
  EXPECT_TRUE(TemporalMode(TemporalMode::Process::antistokes, TemporalMode::Direction::in, 1, 1).growing());
}

TEST(StokesOutput, EntanglementApproachesTwoR) {
  const double x = 0.075;
  double previous = 1.0;
  for (double ratio : {0.05, 0.02, 0.005}) {
    const double g = ratio * kKappa;
    const double tau = x / (2 * g * g / kKappa);
    const auto e = stokes_output_entanglement(kKappa, g, tau);
    EXPECT_NEAR(e.log_negativity_closed, 2 * e.squeezing, 1e-15);
    const double err = std::abs(e.log_negativity_integrated - e.log_negativity_closed);
    EXPECT_LT(err, previous);
    previous = err;
  }
  EXPECT_LT(previous, 0.01);
}

TEST(StokesOutput, GaussianEntanglementOfCapturedPulse) {
  // With the filter output mode recovered, the magnon-pulse pair is nearly pure.
  const double g = 0.005 * kKappa;
  const double tau = 0.075 / (2 * g * g / kKappa);
  const auto e = stokes_output_entanglement(kKappa, g, tau);
  EXPECT_NEAR(e.magnon_occupation, std::expm1(0.15), 0.02 * std::expm1(0.15));
}
