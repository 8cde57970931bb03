#pragma once

#include <span>

#include <Eigen/Dense>

namespace mpnet {

/// First and second moments of a Gaussian state of n bosonic modes in the
/// quadratures x = a + a^dag, p = -i (a - a^dag), ordered (x1, p1, x2, p2, ...).
/// cm_ij = <{dR_i, dR_j}> / 2, so the vacuum has cm = identity and the
/// uncertainty relation reads cm + i Omega >= 0.
class CovarianceState {
 public:
  CovarianceState(Eigen::VectorXd mean, Eigen::MatrixXd cm);

  static CovarianceState vacuum(int modes);
  static CovarianceState thermal(std::span<const double> occupations);
  /// Two-mode squeezed vacuum with squeezing r.
  static CovarianceState two_mode_squeezed(double r);

  int modes() const noexcept { return static_cast<int>(mean_.size() / 2); }
  const Eigen::VectorXd& mean() const noexcept { return mean_; }
  const Eigen::MatrixXd& cm() const noexcept { return cm_; }

  /// <a^dag a> of one mode, including the coherent part.
  double occupation(int mode) const;

  /// -min eig(cm + i Omega); positive values violate the uncertainty relation.
  double uncertainty_violation() const;
  /// Throws UnphysicalState when the violation exceeds tol.
  void check_physical(double tol = 1e-9) const;

  /// Moments of the listed modes, in the listed order.
  CovarianceState reduced(std::span<const int> modes) const;

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cm_;
};

/// Block-diagonal symplectic form with blocks [[0, 1], [-1, 0]].
Eigen::MatrixXd symplectic_form(int modes);

/// Symplectic eigenvalues (ascending) of a 2n x 2n covariance matrix.
Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& cm);

/// Flips the sign of p for every listed mode (partial transposition in phase space).
Eigen::MatrixXd partially_transposed(const Eigen::MatrixXd& cm, std::span<const int> modes);

}  // namespace mpnet
