#include "mpnet/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "mpnet/errors.hpp"
#include "mpnet/linalg.hpp"

namespace mpnet {

FidelityValue fidelity_pure_target(const FockKet& target, const FockDensityMatrix& rho) {
  if (!(target.dims() == rho.dims())) throw InvalidArgument("target and state dimensions differ");
  const auto& v = target.amplitudes();
  const double f = v.dot(rho.matrix() * v).real();
  return {f, FidelityDefinition::pure_target_overlap};
}

FidelityValue uhlmann_fidelity(const FockDensityMatrix& rho, const FockDensityMatrix& sigma) {
  if (!(rho.dims() == sigma.dims())) throw InvalidArgument("state dimensions differ");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> first(rho.matrix());
  const Eigen::VectorXd roots = first.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXcd sqrt_rho =
      first.eigenvectors() * roots.cast<Complex>().asDiagonal() * first.eigenvectors().adjoint();
  Eigen::MatrixXcd inner = sqrt_rho * sigma.matrix() * sqrt_rho;
  inner = 0.5 * (inner + inner.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> second(inner, Eigen::EigenvaluesOnly);
  const double tr = second.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return {std::min(1.0, tr * tr), FidelityDefinition::uhlmann};
}

EntanglementReportValue log_negativity_fock(const FockDensityMatrix& rho,
                                            std::span<const std::size_t> subsystem_b) {
  const double tr = rho.trace();
  if (!(tr > 0.0)) throw UnphysicalState("log negativity of a zero-trace state");
  Eigen::MatrixXcd pt = partial_transpose(rho, subsystem_b);
  pt = 0.5 * (pt + pt.adjoint()).eval();
  const double trace_norm = linalg::hermitian_eigenvalues(pt).cwiseAbs().sum();
  return {std::max(0.0, std::log(trace_norm / tr)), EntanglementMethod::fock_ppt};
}

EntanglementReportValue log_negativity_fock(const FockDensityMatrix& rho, std::size_t mode_b) {
  const std::size_t modes[] = {mode_b};
  return log_negativity_fock(rho, modes);
}

double effective_squeezing(double squeezing, double efficiency) {
  if (!(squeezing >= 0.0)) throw InvalidArgument("squeezing must be >= 0");
  if (!(efficiency >= 0.0 && efficiency <= 1.0)) throw InvalidArgument("efficiency outside [0, 1]");
  return std::atanh(std::sqrt(efficiency) * std::tanh(squeezing));
}

EntanglementReportValue log_negativity_closed_form(double squeezing, double efficiency) {
  return {2.0 * effective_squeezing(squeezing, efficiency), EntanglementMethod::closed_form};
}

EntanglementReportValue log_negativity_gaussian(const CovarianceState& state,
                                                std::span<const int> subsystem_b) {
  state.check_physical(1e-9);
  const Eigen::VectorXd nu = symplectic_eigenvalues(partially_transposed(state.cm(), subsystem_b));
  double en = 0.0;
  for (Eigen::Index k = 0; k < nu.size(); ++k) {
    if (nu(k) < 1.0) en -= std::log(nu(k));
  }
  return {en, EntanglementMethod::gaussian_symplectic};
}

}  // namespace mpnet
