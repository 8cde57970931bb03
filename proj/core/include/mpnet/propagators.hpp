#pragma once

#include <cstddef>
#include <vector>

#include "mpnet/fock.hpp"

namespace mpnet {

/// A flattop pulse that switches on a linearized interaction of strength G in
/// a cavity of linewidth kappa for a time tau. Rates are angular (rad/s).
class PulseSpec {
 public:
  PulseSpec(double coupling, double linewidth, double duration);

  double coupling() const noexcept { return coupling_; }
  double linewidth() const noexcept { return linewidth_; }
  double duration() const noexcept { return duration_; }

  /// Adiabatic rate 2 G^2 / kappa.
  double rate() const noexcept { return 2.0 * coupling_ * coupling_ / linewidth_; }
  /// rate * duration, the only combination the propagators depend on.
  double exponent() const noexcept { return rate() * duration_; }
  double coupling_ratio() const noexcept { return coupling_ / linewidth_; }

 private:
  double coupling_;
  double linewidth_;
  double duration_;
};

/// Per-excitation phase picked up by the transferred amplitude: -i for
/// H = +hbar G (a^dag b + a b^dag), +i for H = -hbar G (a^dag b + a b^dag).
enum class SwapPhase { minus_i, plus_i };

struct SwapResult {
  double efficiency = 0.0;  ///< 1 - exp(-2 rate tau)
  double exponent = 0.0;    ///< rate tau
  SwapPhase phase = SwapPhase::minus_i;
};

struct SqueezeResult {
  double squeezing = 0.0;  ///< r with cosh r = exp(rate tau)
  double exponent = 0.0;
};

SwapResult conversion_efficiency(const PulseSpec& pulse, SwapPhase phase = SwapPhase::minus_i);
SqueezeResult squeezing_parameter(const PulseSpec& pulse);

double efficiency_from_exponent(double exponent);
double squeezing_from_exponent(double exponent);

/// Beamsplitter angle theta with sin^2 theta = efficiency, signed by the phase convention.
double swap_angle(double efficiency, SwapPhase phase = SwapPhase::minus_i);

/// Anti-Stokes state swap between `source` and `field`, both in rho.
FockDensityMatrix apply_antistokes_swap(const FockDensityMatrix& rho, std::size_t source,
                                        std::size_t field, double efficiency,
                                        SwapPhase phase = SwapPhase::minus_i,
                                        const ExponentialOptions& options = {});

/// Stokes two-mode squeezing with U = exp(-i r (m^dag a^dag + m a)).
FockDensityMatrix apply_stokes_squeeze(const FockDensityMatrix& rho, std::size_t magnon,
                                       std::size_t field, double squeezing,
                                       const ExponentialOptions& options = {});

/// What is kept of the depleted source mode after a swap into a fresh mode.
enum class Residual {
  heralded_vacuum,  ///< project the source onto |0> (the successful-transfer branch)
  traced,           ///< trace the source out (unconditional state)
};

/// A state together with the probability of the branch it was conditioned on.
/// `state` is normalized up to truncation leak.
struct BranchState {
  FockDensityMatrix state;
  double probability = 1.0;
};

/// K_k[t, s] = <k, t| V |s, 0> for the swap V of a `source_dim` mode with a
/// fresh vacuum mode of `fresh_dim` levels, k = 0..source_dim-1. K_0 is the
/// heralded (source left in vacuum) branch.
std::vector<Eigen::MatrixXcd> swap_kraus_operators(int source_dim, int fresh_dim,
                                                   double efficiency, SwapPhase phase,
                                                   const ExponentialOptions& options = {});

/// Swaps the state of `source` into a fresh mode prepared in vacuum. The
/// fresh mode replaces `source` at the same index and has `target_dim` levels
/// (0 keeps the source's truncation). Equivalent to tensoring a vacuum mode,
/// applying the swap and tracing or projecting the source, without building
/// the enlarged state.
BranchState swap_into_vacuum_mode(const FockDensityMatrix& rho, std::size_t source,
                                  double efficiency, SwapPhase phase, Residual residual,
                                  int target_dim = 0, const ExponentialOptions& options = {});

}  // namespace mpnet
