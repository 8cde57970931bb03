#include "mpnet/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "mpnet/errors.hpp"
#include "mpnet/metrics.hpp"
#include "mpnet/units.hpp"

namespace mpnet {
namespace {

constexpr double kTripleResonanceTol = 1e-6;
constexpr double kFrequencyRatioMax = 1e-3;
constexpr double kWeakCouplingMax = 0.1;
constexpr double kLifetimeFractionMax = 0.1;
constexpr double kSidebandRatioMax = 0.3;
constexpr double kLinewidthMatchTol = 1e-9;

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

// Phase angle psi with amplitude factor exp(i psi) per transferred excitation.
double phase_angle(SwapPhase phase) {
  return phase == SwapPhase::minus_i ? -std::numbers::pi / 2 : std::numbers::pi / 2;
}

constexpr SwapPhase kMagnonSwap = SwapPhase::minus_i;
constexpr SwapPhase kPhononSwap = SwapPhase::plus_i;

double trace_product(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a.cwiseProduct(b.transpose())).sum().real();
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

void require_rate(double value, const char* name) {
  require(std::isfinite(value) && value >= 0.0, std::string(name) + " must be finite and >= 0");
}

void require_frequency(double value, const char* name) {
  require(std::isfinite(value) && value > 0.0, std::string(name) + " must be finite and > 0");
}

Check ratio_check(std::string name, double value, double limit, std::string detail) {
  return {std::move(name), value, limit, value <= limit, std::move(detail)};
}

double lifetime_fraction(double duration, double linewidth) {
  return linewidth == 0.0 ? 0.0 : duration / (units::two_pi / linewidth);
}

FockDensityMatrix thermal_state(int dim, double occupancy) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  if (occupancy == 0.0) {
    m(0, 0) = 1.0;
  } else {
    const double q = occupancy / (1.0 + occupancy);
    double norm = 0.0;
    for (int n = 0; n < dim; ++n) norm += std::pow(q, n);
    for (int n = 0; n < dim; ++n) m(n, n) = std::pow(q, n) / norm;
  }
  return {ModeDims{dim}, std::move(m)};
}

struct SqueezedPair {
  FockDensityMatrix state;
  double leak;
};

SqueezedPair squeezed_vacuum(double r, int truncation, double leak_tol) {
  ExponentialOptions opts;
  opts.leak_tol = leak_tol;
  auto rho = apply_stokes_squeeze(vacuum(ModeDims{truncation, truncation}), 0, 1, r, opts);
  const double leak = std::max(0.0, 1.0 - rho.trace());
  return {std::move(rho), leak};
}

}  // namespace

// ---------------------------------------------------------------- MagnonState

MagnonState MagnonState::fock(int n) {
  require(n >= 0, "Fock number must be >= 0");
  MagnonState s(Kind::fock, "fock_" + std::to_string(n));
  s.n_ = n;
  return s;
}

MagnonState MagnonState::superposition(Complex c0, Complex c1) {
  const double norm = std::sqrt(std::norm(c0) + std::norm(c1));
  require(norm > 0.0 && std::isfinite(norm), "superposition amplitudes must not both vanish");
  MagnonState s(Kind::superposition, "superposition");
  s.c0_ = c0 / norm;
  s.c1_ = c1 / norm;
  return s;
}

MagnonState MagnonState::table(Eigen::MatrixXcd coefficients, std::string label) {
  require(coefficients.rows() >= 2 && coefficients.rows() == coefficients.cols(),
          "coefficient table must be square with at least 2 levels");
  const FockDensityMatrix check(ModeDims{static_cast<int>(coefficients.rows())}, coefficients);
  require(std::abs(check.trace() - 1.0) <= 1e-10, "coefficient table must have unit trace");
  require(check.physicality().ok(), "coefficient table must be positive semidefinite");
  MagnonState s(Kind::table, std::move(label));
  s.table_ = std::move(coefficients);
  return s;
}

int MagnonState::min_dim() const {
  switch (kind_) {
    case Kind::fock: return std::max(2, n_ + 1);
    case Kind::superposition: return 2;
    case Kind::table: return static_cast<int>(table_.rows());
  }
  return 2;
}

Eigen::MatrixXcd MagnonState::coefficients(int dim) const {
  require(dim >= min_dim(), "truncation " + std::to_string(dim) + " too small for state " + label_);
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(dim, dim);
  switch (kind_) {
    case Kind::fock:
      c(n_, n_) = 1.0;
      break;
    case Kind::superposition:
      c(0, 0) = std::norm(c0_);
      c(0, 1) = c0_ * std::conj(c1_);
      c(1, 0) = c1_ * std::conj(c0_);
      c(1, 1) = std::norm(c1_);
      break;
    case Kind::table:
      c.topLeftCorner(table_.rows(), table_.cols()) = table_;
      break;
  }
  return c;
}

// ---------------------------------------------------------------- scenario

ScenarioConfig default_scenario() {
  using units::angular;
  ScenarioConfig s;
  s.magnonic.omega_m = angular(7e9);
  s.magnonic.omega_1 = angular(193.4e12);
  s.magnonic.omega_2 = s.magnonic.omega_1 + s.magnonic.omega_m;
  s.magnonic.kappa_1 = angular(500e6);
  s.magnonic.kappa_2 = angular(500e6);
  s.magnonic.kappa_m = angular(1e6);

  s.mechanical.omega_c = angular(193.4e12);
  s.mechanical.omega_M = angular(5.3e9);
  s.mechanical.kappa_c = angular(1.3e9);
  s.mechanical.gamma = angular(4.8e3);
  s.mechanical.effective_detuning = s.mechanical.omega_M;

  s.stokes = PulseSpec(angular(10e6), s.magnonic.kappa_1, 30e-9);
  s.antistokes = PulseSpec(angular(10e6), s.magnonic.kappa_2, 40e-9);
  s.optomech = PulseSpec(angular(50e6), s.mechanical.kappa_c, 55e-9);

  s.fiber.length_km = 1.0;
  s.fiber.attenuation_db_per_km = 0.2;
  const double amp = 1.0 / std::numbers::sqrt2;
  s.initial_states = {MagnonState::fock(1), MagnonState::superposition(amp, amp)};
  return s;
}

std::vector<Check> validate(const ScenarioConfig& sc) {
  const auto& mg = sc.magnonic;
  const auto& me = sc.mechanical;
  require_frequency(mg.omega_1, "omega_1");
  require_frequency(mg.omega_2, "omega_2");
  require_frequency(mg.omega_m, "omega_m");
  require_rate(mg.kappa_1, "kappa_1");
  require_rate(mg.kappa_2, "kappa_2");
  require_rate(mg.kappa_m, "kappa_m");
  require_frequency(me.omega_c, "omega_c");
  require_frequency(me.omega_M, "omega_M");
  require_rate(me.kappa_c, "kappa_c");
  require_rate(me.gamma, "gamma");
  require_rate(me.thermal_occupancy, "thermal occupancy");
  require(std::isfinite(me.effective_detuning), "effective detuning must be finite");
  require(sc.transfer_truncation >= 2 && sc.entangle_truncation >= 2, "truncations must be >= 2");
  require(sc.leak_tol > 0.0, "leak_tol must be > 0");
  (void)transmittance(sc.fiber);
  for (const auto& state : sc.initial_states) {
    require(state.min_dim() <= sc.transfer_truncation,
            "transfer truncation " + std::to_string(sc.transfer_truncation) +
                " too small for state " + state.label());
  }

  std::vector<Check> checks;
  checks.push_back(ratio_check("triple_resonance",
                               std::abs(std::abs(mg.omega_1 - mg.omega_2) - mg.omega_m) / mg.omega_m,
                               kTripleResonanceTol, "| |w1 - w2| - wm | / wm"));
  checks.push_back(ratio_check("magnon_below_optical",
                               mg.omega_m / std::min(mg.omega_1, mg.omega_2), kFrequencyRatioMax,
                               "wm / min(w1, w2)"));
  checks.push_back(ratio_check("weak_coupling_stokes", sc.stokes.coupling_ratio(), kWeakCouplingMax,
                               "G1 / kappa1"));
  checks.push_back(ratio_check("weak_coupling_antistokes", sc.antistokes.coupling_ratio(),
                               kWeakCouplingMax, "G2 / kappa2"));
  checks.push_back(ratio_check("weak_coupling_optomech", sc.optomech.coupling_ratio(),
                               kWeakCouplingMax, "G / kappa_c"));
  checks.push_back(ratio_check("stokes_linewidth_match",
                               std::abs(sc.stokes.linewidth() - mg.kappa_1) / sc.stokes.linewidth(),
                               kLinewidthMatchTol, "pulse kappa vs kappa1"));
  checks.push_back(ratio_check("antistokes_linewidth_match",
                               std::abs(sc.antistokes.linewidth() - mg.kappa_2) /
                                   sc.antistokes.linewidth(),
                               kLinewidthMatchTol, "pulse kappa vs kappa2"));
  checks.push_back(ratio_check("optomech_linewidth_match",
                               std::abs(sc.optomech.linewidth() - me.kappa_c) /
                                   sc.optomech.linewidth(),
                               kLinewidthMatchTol, "pulse kappa vs kappa_c"));
  checks.push_back(ratio_check("stokes_pulse_vs_magnon_lifetime",
                               lifetime_fraction(sc.stokes.duration(), mg.kappa_m),
                               kLifetimeFractionMax, "tau1 / (2 pi / kappa_m)"));
  checks.push_back(ratio_check("antistokes_pulse_vs_magnon_lifetime",
                               lifetime_fraction(sc.antistokes.duration(), mg.kappa_m),
                               kLifetimeFractionMax, "tau2 / (2 pi / kappa_m)"));
  checks.push_back(ratio_check("optomech_pulse_vs_phonon_lifetime",
                               lifetime_fraction(sc.optomech.duration(), me.gamma),
                               kLifetimeFractionMax, "tau_b / (2 pi / gamma)"));
  checks.push_back(ratio_check("sideband_resolved_kappa_c", me.kappa_c / me.omega_M,
                               kSidebandRatioMax, "kappa_c / omega_M"));
  checks.push_back(ratio_check("sideband_resolved_gamma", me.gamma / me.omega_M, kSidebandRatioMax,
                               "gamma / omega_M"));
  checks.push_back(ratio_check("sideband_resolved_coupling", sc.optomech.coupling() / me.omega_M,
                               kSidebandRatioMax, "G / omega_M"));
  checks.push_back(ratio_check("red_detuning",
                               std::abs(me.effective_detuning - me.omega_M) / me.omega_M,
                               kTripleResonanceTol, "| tilde Delta_c - omega_M | / omega_M"));
  return checks;
}

// ---------------------------------------------------------------- transfer

Eigen::MatrixXcd closed_form_phonon_state(const Eigen::MatrixXcd& c, double s, double w,
                                          double t) {
  require(s >= 0.0 && s <= 1.0 && w >= 0.0 && w <= 1.0 && t >= 0.0 && t <= 1.0,
          "S, W and T must lie in [0, 1]");
  const auto dim = c.rows();
  const double r = 1.0 - t;
  const double tw = t * w;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) {
    for (int k = 0; k < dim; ++k) {
      if (c(n, k) == Complex(0.0)) continue;
      const double half = 0.5 * (n + k);
      for (int m = 0; m <= std::min(n, k); ++m) {
        const double log_comb = 0.5 * (log_factorial(n) + log_factorial(k)) - log_factorial(m) -
                                0.5 * (log_factorial(n - m) + log_factorial(k - m));
        const double weight =
            std::exp(log_comb) * std::pow(s, half) * std::pow(r, m) * std::pow(tw, half - m);
        out(n - m, k - m) += c(n, k) * weight;
      }
    }
  }
  return out;
}

ClosedFormTransfer closed_form_transfer(const MagnonState& state, double s, double w, double t) {
  const int dim = state.min_dim();
  const Eigen::MatrixXcd c = state.coefficients(dim);
  const Eigen::MatrixXcd phonon = closed_form_phonon_state(c, s, w, t);

  ClosedFormTransfer out;
  out.fidelity_sum = trace_product(c, phonon);
  for (int n = 0; n < dim; ++n) out.populations.push_back(phonon(n, n).real());
  const double stw = s * t * w;
  switch (state.kind()) {
    case MagnonState::Kind::fock:
      out.fidelity_family = std::pow(stw, state.number());
      break;
    case MagnonState::Kind::superposition: {
      const double p0 = std::norm(state.c0());
      const double p1 = std::norm(state.c1());
      out.fidelity_family =
          p0 * (p0 + p1 * s * (1.0 - t)) + p1 * p1 * stw + 2.0 * p0 * p1 * std::sqrt(stw);
      break;
    }
    case MagnonState::Kind::table:
      out.fidelity_family = out.fidelity_sum;
      break;
  }
  return out;
}

TransferReport run_transfer(const ScenarioConfig& sc, const MagnonState& state) {
  const int dim = sc.transfer_truncation;
  ExponentialOptions opts;
  opts.leak_tol = sc.leak_tol;

  TransferReport rep{.state = state.label(), .phonon = vacuum(ModeDims{dim})};
  const auto swap_s = conversion_efficiency(sc.antistokes, kMagnonSwap);
  const auto swap_w = conversion_efficiency(sc.optomech, kPhononSwap);
  rep.s = swap_s.efficiency;
  rep.w = swap_w.efficiency;
  rep.t = transmittance(sc.fiber);
  rep.exponent_antistokes = swap_s.exponent;
  rep.exponent_optomech = swap_w.exponent;

  const Eigen::MatrixXcd c = state.coefficients(dim);
  const FockDensityMatrix magnon(ModeDims{dim}, c);

  // Magnon -> pulse, loss, pulse -> phonon; each depleted mode heralded in vacuum.
  auto pulse = swap_into_vacuum_mode(magnon, 0, rep.s, kMagnonSwap, Residual::heralded_vacuum, 0, opts);
  const auto lossy = apply_loss(pulse.state, 0, rep.t);

  BranchState phonon{vacuum(ModeDims{dim}), 0.0};
  FockDensityMatrix unconditional = vacuum(ModeDims{dim});
  const auto pulse_free = swap_into_vacuum_mode(magnon, 0, rep.s, kMagnonSwap, Residual::traced, 0, opts);
  const auto lossy_free = apply_loss(pulse_free.state, 0, rep.t);
  if (sc.mechanical.thermal_occupancy == 0.0) {
    phonon = swap_into_vacuum_mode(lossy, 0, rep.w, kPhononSwap, Residual::heralded_vacuum, 0, opts);
    unconditional =
        swap_into_vacuum_mode(lossy_free, 0, rep.w, kPhononSwap, Residual::traced, 0, opts).state;
  } else {
    rep.warnings.push_back("thermal phonon start: closed form assumes the ground state");
    const auto bath = thermal_state(dim, sc.mechanical.thermal_occupancy);
    const auto joint = apply_antistokes_swap(tensor(lossy, bath), 0, 1, rep.w, kPhononSwap, opts);
    const auto kept = project_mode(joint, 0, 0);
    phonon = {kept.normalized(), kept.trace()};
    unconditional = partial_trace(
        apply_antistokes_swap(tensor(lossy_free, bath), 0, 1, rep.w, kPhononSwap, opts), 0);
  }
  rep.success_probability = pulse.probability * phonon.probability;
  rep.leak = std::max(0.0, 1.0 - unconditional.trace());

  rep.fidelity_uncompensated = rep.success_probability * trace_product(c, phonon.state.matrix());
  // Undo the net per-excitation phase exp(i psi) of the two swaps.
  const double psi = phase_angle(kMagnonSwap) + phase_angle(kPhononSwap);
  rep.phonon = apply_local(phonon.state, 0, phase_rotation(dim, psi));
  rep.fidelity_engine = rep.success_probability * trace_product(c, rep.phonon.matrix());
  const auto undone = apply_local(unconditional, 0, phase_rotation(dim, psi));
  rep.fidelity_unconditional = trace_product(c, undone.matrix());

  rep.fidelity_closed = closed_form_transfer(state, rep.s, rep.w, rep.t).fidelity_family;
  return rep;
}

std::vector<TransferReport> run_transfer(const ScenarioConfig& sc) {
  std::vector<TransferReport> out;
  out.reserve(sc.initial_states.size());
  for (const auto& state : sc.initial_states) out.push_back(run_transfer(sc, state));
  return out;
}

// ---------------------------------------------------------------- entanglement

namespace {

EntangleReport finish_entanglement(const FockDensityMatrix& squeezed, double r, double w, double t,
                                   int truncation, double leak, double leak_tol,
                                   bool unconditional) {
  ExponentialOptions opts;
  opts.leak_tol = leak_tol;
  FockDensityMatrix rho = squeezed;
  if (t < 1.0) rho = apply_loss(rho, 1, t);
  auto branch = swap_into_vacuum_mode(rho, 1, w, kPhononSwap, Residual::heralded_vacuum, 0, opts);

  EntangleReport rep{.magnon_phonon = std::move(branch.state)};
  rep.r = r;
  rep.w = w;
  rep.t = t;
  rep.loss_included = t < 1.0;
  rep.r_effective = effective_squeezing(r, w);
  rep.success_probability = branch.probability;
  rep.log_negativity_fock = log_negativity_fock(rep.magnon_phonon, std::size_t{1}).log_negativity;
  rep.log_negativity_closed = log_negativity_closed_form(r, w).log_negativity;
  if (unconditional) {
    const auto traced = swap_into_vacuum_mode(rho, 1, w, kPhononSwap, Residual::traced, 0, opts);
    rep.log_negativity_unconditional =
        log_negativity_fock(traced.state, std::size_t{1}).log_negativity;
  }
  rep.truncation = truncation;
  rep.leak = leak;
  if (rep.loss_included) {
    rep.warnings.push_back("extension: fiber loss applied to the Stokes pulse; closed form excludes it");
  }
  return rep;
}

}  // namespace

EntangleReport run_entanglement(double r, double w, double t, int truncation, double leak_tol) {
  require(r >= 0.0 && std::isfinite(r), "squeezing must be finite and >= 0");
  require(w >= 0.0 && w <= 1.0, "W must lie in [0, 1]");
  require(t >= 0.0 && t <= 1.0, "T must lie in [0, 1]");
  const auto sq = squeezed_vacuum(r, truncation, leak_tol);
  return finish_entanglement(sq.state, r, w, t, truncation, sq.leak, leak_tol, true);
}

EntangleReport run_entanglement(const ScenarioConfig& sc) {
  const double r = squeezing_parameter(sc.stokes).squeezing;
  const double w = conversion_efficiency(sc.optomech, kPhononSwap).efficiency;
  const double t = sc.include_loss_in_entanglement ? transmittance(sc.fiber) : 1.0;
  return run_entanglement(r, w, t, sc.entangle_truncation, sc.leak_tol);
}

std::vector<Fig5Row> fig5_curves(std::span<const double> r_grid, std::span<const double> w_list,
                                 int truncation, double leak_tol) {
  for (const double r : r_grid) require(r >= 0.0 && r <= 1.5, "fig5 r grid must lie in [0, 1.5]");
  for (const double w : w_list) require(w > 0.0 && w <= 1.0, "fig5 W values must lie in (0, 1]");
  std::vector<double> ws(w_list.begin(), w_list.end());
  std::stable_sort(ws.begin(), ws.end(), std::greater<>());
  std::vector<double> rs(r_grid.begin(), r_grid.end());
  std::stable_sort(rs.begin(), rs.end());

  // Without fiber loss every state in the pipeline is pure, so the same
  // propagators act on amplitudes; only E_N needs the density matrix.
  ExponentialOptions opts;
  opts.leak_tol = leak_tol;
  const ModeDims dims{truncation, truncation};
  struct Squeezed {
    Eigen::VectorXcd psi;
    double leak;
  };
  std::vector<Squeezed> squeezed;
  squeezed.reserve(rs.size());
  for (const double r : rs) {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dims.total());
    psi(0) = 1.0;
    const auto op = two_mode_propagator(GeneratorKind::two_mode_squeeze, r, truncation, truncation, opts);
    psi = apply_two_mode_ket(psi, dims, 0, 1, op);
    const double leak = std::max(0.0, 1.0 - psi.squaredNorm());
    if (leak > leak_tol) throw LeakBudgetExceeded(leak, leak_tol);
    squeezed.push_back({std::move(psi), leak});
  }

  std::vector<Fig5Row> rows;
  rows.reserve(ws.size() * rs.size());
  for (const double w : ws) {
    const auto heralded = swap_kraus_operators(truncation, truncation, w, kPhononSwap, opts).front();
    for (std::size_t i = 0; i < rs.size(); ++i) {
      const Eigen::VectorXcd out = apply_local_ket(squeezed[i].psi, dims, 1, heralded);
      const auto rho = FockDensityMatrix::from_ket(FockKet::normalized(dims, out));
      rows.push_back({rs[i], w, log_negativity_closed_form(rs[i], w).log_negativity,
                      log_negativity_fock(rho, std::size_t{1}).log_negativity, truncation,
                      squeezed[i].leak});
    }
  }
  return rows;
}

}  // namespace mpnet
