#pragma once

#include <cstddef>
#include <vector>

#include "mpnet/fock.hpp"

namespace mpnet {

/// An optical fiber link. Transmission time is not modeled.
struct FiberSpec {
  double length_km = 0.0;
  double attenuation_db_per_km = 0.0;
  double extra_loss_db = 0.0;

  double total_loss_db() const { return attenuation_db_per_km * length_km + extra_loss_db; }
};

/// T = 10^(-loss_dB / 10). Throws InvalidArgument on negative inputs.
double transmittance(const FiberSpec& fiber);
inline double reflectance(const FiberSpec& fiber) { return 1.0 - transmittance(fiber); }

enum class LossMethod { ancilla, kraus };

/// Photon loss with transmittance T on one mode.
FockDensityMatrix apply_loss(const FockDensityMatrix& rho, std::size_t mode, double transmittance,
                             LossMethod method = LossMethod::kraus);

/// A_k = sqrt(R^k / k!) a^k T^(n/2), k = 0..dim-1.
std::vector<Eigen::MatrixXcd> loss_kraus_operators(int dim, double transmittance);

/// Photon loss evaluated from the explicit binomial double sum
/// |n><s| -> sum_m sqrt(C(n,m) C(s,m)) R^m T^((n+s)/2 - m) |n-m><s-m|,
/// with every other mode carried along unchanged. Independent of the
/// ancilla and Kraus routes.
FockDensityMatrix loss_double_sum(const FockDensityMatrix& rho, std::size_t mode,
                                  double transmittance);

/// The pulse-mode state after a swap of efficiency S from a magnon state with
/// Fock coefficients c (c(n, s) = <n|rho|s>) followed by loss T, keeping the
/// branch where the magnon is left in vacuum:
///   sum c_ns (-i)^n i^s S^((n+s)/2) sum_m sqrt(n! s! / (m!^2 (n-m)! (s-m)!)) R^m T^((n+s)/2-m) |n-m><s-m|.
/// Subnormalized by construction. Throws when c does not fit in `dim` levels.
FockDensityMatrix post_loss_pulse_state(const Eigen::MatrixXcd& coefficients, double efficiency,
                                        double transmittance, int dim);

}  // namespace mpnet
