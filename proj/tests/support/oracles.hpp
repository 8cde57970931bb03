// Reference implementations used only by the tests. They work on dense
// full-space matrices and share no code with the library kernels.
#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

using Complex = std::complex<double>;
using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

inline Index product(const std::vector<int>& dims) {
  Index p = 1;
  for (int d : dims) p *= d;
  return p;
}

inline std::vector<int> digits(Index flat, const std::vector<int>& dims) {
  std::vector<int> occ(dims.size());
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    occ[k] = static_cast<int>(flat % dims[k]);
    flat /= dims[k];
  }
  return occ;
}

inline Index flatten(const std::vector<int>& occ, const std::vector<int>& dims) {
  Index flat = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) flat = flat * dims[k] + occ[k];
  return flat;
}

inline MatrixXcd lowering(int dim) {
  MatrixXcd a = MatrixXcd::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

inline MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
  MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// op acting on `mode` of the joint space, identity elsewhere.
inline MatrixXcd embed(const MatrixXcd& op, const std::vector<int>& dims, std::size_t mode) {
  MatrixXcd out = MatrixXcd::Identity(1, 1);
  for (std::size_t k = 0; k < dims.size(); ++k) {
    out = kron(out, k == mode ? op : MatrixXcd::Identity(dims[k], dims[k]));
  }
  return out;
}

/// Dense exponential from Eigen's unsupported MatrixFunctions module.
inline MatrixXcd expm(const MatrixXcd& m) { return m.exp(); }

/// exp(-i angle K) on the full joint space for K = a^dag b + a b^dag (squeeze=false)
/// or a^dag b^dag + a b (squeeze=true), taken directly at the given truncation.
inline MatrixXcd two_mode_unitary(const std::vector<int>& dims, std::size_t a, std::size_t b,
                                  double angle, bool squeeze) {
  const MatrixXcd la = embed(lowering(dims[a]), dims, a);
  const MatrixXcd lb = embed(lowering(dims[b]), dims, b);
  const MatrixXcd k = squeeze ? MatrixXcd(la.adjoint() * lb.adjoint() + la * lb)
                              : MatrixXcd(la.adjoint() * lb + la * lb.adjoint());
  return expm(Complex(0.0, -angle) * k);
}

inline MatrixXcd trace_out(const MatrixXcd& rho, const std::vector<int>& dims, std::size_t mode) {
  std::vector<int> rest = dims;
  rest.erase(rest.begin() + static_cast<long>(mode));
  const Index n = product(rest);
  MatrixXcd out = MatrixXcd::Zero(n, n);
  for (Index i = 0; i < rho.rows(); ++i) {
    auto oi = digits(i, dims);
    for (Index j = 0; j < rho.cols(); ++j) {
      auto oj = digits(j, dims);
      if (oi[mode] != oj[mode]) continue;
      auto ri = oi, rj = oj;
      ri.erase(ri.begin() + static_cast<long>(mode));
      rj.erase(rj.begin() + static_cast<long>(mode));
      out(flatten(ri, rest), flatten(rj, rest)) += rho(i, j);
    }
  }
  return out;
}

inline MatrixXcd project(const MatrixXcd& rho, const std::vector<int>& dims, std::size_t mode,
                         int level) {
  std::vector<int> rest = dims;
  rest.erase(rest.begin() + static_cast<long>(mode));
  const Index n = product(rest);
  MatrixXcd out = MatrixXcd::Zero(n, n);
  for (Index i = 0; i < rho.rows(); ++i) {
    auto oi = digits(i, dims);
    if (oi[mode] != level) continue;
    oi.erase(oi.begin() + static_cast<long>(mode));
    for (Index j = 0; j < rho.cols(); ++j) {
      auto oj = digits(j, dims);
      if (oj[mode] != level) continue;
      oj.erase(oj.begin() + static_cast<long>(mode));
      out(flatten(oi, rest), flatten(oj, rest)) = rho(i, j);
    }
  }
  return out;
}

inline MatrixXcd transpose_mode(const MatrixXcd& rho, const std::vector<int>& dims,
                                std::size_t mode) {
  MatrixXcd out(rho.rows(), rho.cols());
  for (Index i = 0; i < rho.rows(); ++i) {
    for (Index j = 0; j < rho.cols(); ++j) {
      auto oi = digits(i, dims), oj = digits(j, dims);
      std::swap(oi[mode], oj[mode]);
      out(flatten(oi, dims), flatten(oj, dims)) = rho(i, j);
    }
  }
  return out;
}

inline double trace_norm(const MatrixXcd& hermitian) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

inline double min_eigenvalue(const MatrixXcd& hermitian) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

inline VectorXcd random_ket(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  VectorXcd v(n);
  for (Index i = 0; i < n; ++i) v(i) = Complex(g(rng), g(rng));
  return v / v.norm();
}

/// Ginibre-distributed density matrix of the given rank (full rank when rank <= 0).
inline MatrixXcd random_density(Index n, std::mt19937_64& rng, Index rank = 0) {
  std::normal_distribution<double> g;
  const Index k = rank > 0 ? rank : n;
  MatrixXcd m(n, k);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < k; ++j) m(i, j) = Complex(g(rng), g(rng));
  MatrixXcd rho = m * m.adjoint();
  rho /= rho.trace().real();
  return rho;
}

/// Random state whose support stays below `max_level` in every mode, so that
/// energy-conserving maps are exact at the given truncation.
inline MatrixXcd random_low_density(const std::vector<int>& dims, int max_level,
                                    std::mt19937_64& rng) {
  const Index n = product(dims);
  MatrixXcd rho = random_density(n, rng);
  for (Index i = 0; i < n; ++i) {
    const auto oi = digits(i, dims);
    int total = 0;
    for (int o : oi) total += o;
    if (total >= max_level) {
      rho.row(i).setZero();
      rho.col(i).setZero();
    }
  }
  rho /= rho.trace().real();
  return rho;
}

/// |<n,n|TMSV(r)>|^2.
inline double tmsv_probability(double r, int n) {
  return std::pow(std::tanh(r), 2 * n) / std::pow(std::cosh(r), 2);
}

inline double binomial(int n, int k) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

}  // namespace oracle
