#include "mpnet/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "mpnet/errors.hpp"

namespace mpnet {

CovarianceState::CovarianceState(Eigen::VectorXd mean, Eigen::MatrixXd cm)
    : mean_(std::move(mean)), cm_(std::move(cm)) {
  if (mean_.size() == 0 || mean_.size() % 2 != 0) {
    throw InvalidArgument("mean vector must have even, nonzero length");
  }
  if (cm_.rows() != mean_.size() || cm_.cols() != mean_.size()) {
    throw InvalidArgument("covariance matrix shape does not match the mean vector");
  }
  if ((cm_ - cm_.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, cm_.cwiseAbs().maxCoeff())) {
    throw InvalidArgument("covariance matrix is not symmetric");
  }
}

CovarianceState CovarianceState::vacuum(int modes) {
  if (modes < 1) throw InvalidArgument("need at least one mode");
  return {Eigen::VectorXd::Zero(2 * modes), Eigen::MatrixXd::Identity(2 * modes, 2 * modes)};
}

CovarianceState CovarianceState::thermal(std::span<const double> occupations) {
  const auto n = static_cast<Eigen::Index>(occupations.size());
  if (n == 0) throw InvalidArgument("need at least one mode");
  Eigen::VectorXd diag(2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (occupations[k] < 0.0) throw InvalidArgument("thermal occupation must be >= 0");
    diag(2 * k) = diag(2 * k + 1) = 2.0 * occupations[k] + 1.0;
  }
  return {Eigen::VectorXd::Zero(2 * n), diag.asDiagonal()};
}

CovarianceState CovarianceState::two_mode_squeezed(double r) {
  const double c = std::cosh(2.0 * r);
  const double s = std::sinh(2.0 * r);
  Eigen::MatrixXd cm(4, 4);
  cm << c, 0, s, 0,
        0, c, 0, -s,
        s, 0, c, 0,
        0, -s, 0, c;
  return {Eigen::VectorXd::Zero(4), cm};
}

double CovarianceState::occupation(int mode) const {
  if (mode < 0 || mode >= modes()) throw InvalidArgument("mode index out of range");
  const int x = 2 * mode;
  const double second = cm_(x, x) + cm_(x + 1, x + 1) + mean_(x) * mean_(x) +
                        mean_(x + 1) * mean_(x + 1);
  return 0.25 * (second - 2.0);
}

double CovarianceState::uncertainty_violation() const {
  const Eigen::MatrixXcd h =
      cm_.cast<std::complex<double>>() +
      std::complex<double>(0.0, 1.0) * symplectic_form(modes()).cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  return -solver.eigenvalues().minCoeff();
}

void CovarianceState::check_physical(double tol) const {
  const double violation = uncertainty_violation();
  if (violation > tol) {
    throw UnphysicalState("covariance matrix violates the uncertainty relation by " +
                          std::to_string(violation));
  }
}

CovarianceState CovarianceState::reduced(std::span<const int> modes) const {
  const auto n = static_cast<Eigen::Index>(modes.size());
  std::vector<Eigen::Index> idx;
  for (const int m : modes) {
    if (m < 0 || m >= this->modes()) throw InvalidArgument("mode index out of range");
    idx.push_back(2 * m);
    idx.push_back(2 * m + 1);
  }
  if (n == 0) throw InvalidArgument("need at least one mode");
  return {mean_(idx), cm_(idx, idx)};
}

Eigen::MatrixXd symplectic_form(int modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& cm) {
  if (cm.rows() != cm.cols() || cm.rows() % 2 != 0) {
    throw InvalidArgument("covariance matrix must be 2n x 2n");
  }
  const int n = static_cast<int>(cm.rows() / 2);
  // i Omega cm is Hermitian-similar with eigenvalues +-nu_k.
  const Eigen::MatrixXd product = symplectic_form(n) * cm;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(product, false);
  std::vector<double> values;
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
    values.push_back(std::abs(solver.eigenvalues()(k).imag()));
  }
  std::sort(values.begin(), values.end());
  Eigen::VectorXd out(n);
  // Each nu appears twice (as +-i nu).
  for (int k = 0; k < n; ++k) out(k) = 0.5 * (values[2 * k] + values[2 * k + 1]);
  return out;
}

Eigen::MatrixXd partially_transposed(const Eigen::MatrixXd& cm, std::span<const int> modes) {
  Eigen::VectorXd flip = Eigen::VectorXd::Ones(cm.rows());
  for (const int m : modes) {
    if (m < 0 || 2 * m + 1 >= cm.rows()) throw InvalidArgument("mode index out of range");
    flip(2 * m + 1) = -1.0;
  }
  return flip.asDiagonal() * cm * flip.asDiagonal();
}

}  // namespace mpnet
