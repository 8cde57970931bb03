#include "mpnet/propagators.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mpnet/errors.hpp"

namespace mpnet {
namespace {

void check_efficiency(double efficiency) {
  if (!(efficiency >= 0.0 && efficiency <= 1.0)) {
    throw InvalidArgument("efficiency " + std::to_string(efficiency) + " outside [0, 1]");
  }
}

}  // namespace

PulseSpec::PulseSpec(double coupling, double linewidth, double duration)
    : coupling_(coupling), linewidth_(linewidth), duration_(duration) {
  if (!(coupling > 0.0) || !(linewidth > 0.0) || !(duration > 0.0)) {
    throw InvalidArgument("pulse coupling, linewidth and duration must be strictly positive");
  }
  if (!std::isfinite(coupling) || !std::isfinite(linewidth) || !std::isfinite(duration)) {
    throw InvalidArgument("pulse parameters must be finite");
  }
}

double efficiency_from_exponent(double exponent) {
  if (!(exponent >= 0.0)) throw InvalidArgument("rate * duration must be >= 0");
  return -std::expm1(-2.0 * exponent);
}

double squeezing_from_exponent(double exponent) {
  if (!(exponent >= 0.0)) throw InvalidArgument("rate * duration must be >= 0");
  // tanh r = sqrt(1 - exp(-2 x)) is better conditioned than acosh(exp(x)) near 0.
  return std::atanh(std::sqrt(-std::expm1(-2.0 * exponent)));
}

SwapResult conversion_efficiency(const PulseSpec& pulse, SwapPhase phase) {
  return {efficiency_from_exponent(pulse.exponent()), pulse.exponent(), phase};
}

SqueezeResult squeezing_parameter(const PulseSpec& pulse) {
  return {squeezing_from_exponent(pulse.exponent()), pulse.exponent()};
}

double swap_angle(double efficiency, SwapPhase phase) {
  check_efficiency(efficiency);
  const double theta = std::asin(std::sqrt(efficiency));
  return phase == SwapPhase::minus_i ? theta : -theta;
}

FockDensityMatrix apply_antistokes_swap(const FockDensityMatrix& rho, std::size_t source,
                                        std::size_t field, double efficiency, SwapPhase phase,
                                        const ExponentialOptions& options) {
  return apply_two_mode_exponential(rho, source, field, GeneratorKind::beamsplitter,
                                    swap_angle(efficiency, phase), options);
}

FockDensityMatrix apply_stokes_squeeze(const FockDensityMatrix& rho, std::size_t magnon,
                                       std::size_t field, double squeezing,
                                       const ExponentialOptions& options) {
  if (!(squeezing >= 0.0) || !std::isfinite(squeezing)) {
    throw InvalidArgument("squeezing must be finite and >= 0");
  }
  return apply_two_mode_exponential(rho, magnon, field, GeneratorKind::two_mode_squeeze, squeezing,
                                    options);
}

std::vector<Eigen::MatrixXcd> swap_kraus_operators(int source_dim, int fresh_dim,
                                                   double efficiency, SwapPhase phase,
                                                   const ExponentialOptions& options) {
  const auto op = two_mode_propagator(GeneratorKind::beamsplitter, swap_angle(efficiency, phase),
                                      source_dim, fresh_dim, options);
  std::vector<Eigen::MatrixXcd> kraus;
  kraus.reserve(static_cast<std::size_t>(source_dim));
  for (int k = 0; k < source_dim; ++k) {
    Eigen::MatrixXcd kk(fresh_dim, source_dim);
    for (int t = 0; t < fresh_dim; ++t)
      for (int s = 0; s < source_dim; ++s) kk(t, s) = op.element(k, t, s, 0);
    kraus.push_back(std::move(kk));
  }
  return kraus;
}

BranchState swap_into_vacuum_mode(const FockDensityMatrix& rho, std::size_t source,
                                  double efficiency, SwapPhase phase, Residual residual,
                                  int target_dim, const ExponentialOptions& options) {
  const int source_dim = rho.dims()[source];
  const int fresh_dim = target_dim == 0 ? source_dim : target_dim;
  auto kraus = swap_kraus_operators(source_dim, fresh_dim, efficiency, phase, options);
  Eigen::MatrixXcd completeness = Eigen::MatrixXcd::Zero(source_dim, source_dim);
  for (const auto& kk : kraus) completeness += kk.adjoint() * kk;
  if (residual == Residual::heralded_vacuum) kraus.resize(1);

  // Trace that would be lost from the unconditional state by the fresh mode's truncation.
  FockDensityMatrix source_state = rho;
  for (std::size_t m = rho.dims().modes(); m-- > 0;) {
    if (m != source) source_state = partial_trace(source_state, m);
  }
  const Eigen::MatrixXcd deficit =
      Eigen::MatrixXcd::Identity(source_dim, source_dim) - completeness;
  const double leak = std::max(0.0, (source_state.matrix() * deficit).trace().real());
  if (leak > options.leak_tol * std::max(rho.trace(), 1e-300)) {
    throw LeakBudgetExceeded(leak, options.leak_tol);
  }

  FockDensityMatrix out = apply_local_kraus(rho, source, kraus);
  if (residual == Residual::traced) return {std::move(out), 1.0};
  const double probability = out.trace();
  if (probability <= 0.0) return {std::move(out), 0.0};
  return {out.normalized(), probability};
}

}  // namespace mpnet
