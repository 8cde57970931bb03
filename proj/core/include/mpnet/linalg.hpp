#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace mpnet::linalg {

using Complex = std::complex<double>;

/// Matrix exponential by scaling and squaring with diagonal Pade approximants
/// (degrees 3, 5, 7, 9, 13; Higham's theta thresholds).
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a);

/// exp(factor * h) for Hermitian h via its eigendecomposition.
Eigen::MatrixXcd expm_hermitian(const Eigen::MatrixXcd& h, Complex factor);

/// Index sets of the connected components of the nonzero pattern of a square
/// matrix (i ~ j when m(i,j) != 0 or m(j,i) != 0). Components are sorted by
/// their smallest index; indices within a component are ascending.
std::vector<std::vector<Eigen::Index>> connected_blocks(const Eigen::MatrixXcd& m);

/// Eigenvalues of a Hermitian matrix, computed block by block over the
/// connected components of its sparsity pattern. Ascending order.
Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& h);

/// Largest absolute entry of (m - m^dagger).
double hermiticity_error(const Eigen::MatrixXcd& m);

}  // namespace mpnet::linalg
