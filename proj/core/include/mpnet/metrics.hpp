#pragma once

#include <cstddef>
#include <span>

#include "mpnet/fock.hpp"
#include "mpnet/gaussian.hpp"

namespace mpnet {

enum class FidelityDefinition { pure_target_overlap, uhlmann };

struct FidelityValue {
  double value = 0.0;
  FidelityDefinition definition = FidelityDefinition::pure_target_overlap;
};

enum class EntanglementMethod { fock_ppt, gaussian_symplectic, closed_form };

/// Logarithmic negativity in nats.
struct EntanglementReportValue {
  double log_negativity = 0.0;
  EntanglementMethod method = EntanglementMethod::fock_ppt;
};

/// <phi| rho |phi>. Linear in rho, so a subnormalized rho gives the branch-weighted value.
FidelityValue fidelity_pure_target(const FockKet& target, const FockDensityMatrix& rho);

/// (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2 for normalized states.
FidelityValue uhlmann_fidelity(const FockDensityMatrix& rho, const FockDensityMatrix& sigma);

/// ln || rho^(T_B) ||_1 for the normalized state, clamped at 0. `subsystem_b`
/// lists the modes that are transposed.
EntanglementReportValue log_negativity_fock(const FockDensityMatrix& rho,
                                            std::span<const std::size_t> subsystem_b);
EntanglementReportValue log_negativity_fock(const FockDensityMatrix& rho, std::size_t mode_b);

/// r' = artanh(sqrt(W) tanh r).
double effective_squeezing(double squeezing, double efficiency);

/// 2 r' for a two-mode squeezed vacuum whose second arm was mapped with efficiency W.
EntanglementReportValue log_negativity_closed_form(double squeezing, double efficiency);

/// sum over partially transposed symplectic eigenvalues nu < 1 of -ln nu.
/// Throws UnphysicalState if the covariance matrix violates the uncertainty
/// relation by more than 1e-9.
EntanglementReportValue log_negativity_gaussian(const CovarianceState& state,
                                                std::span<const int> subsystem_b);

}  // namespace mpnet
