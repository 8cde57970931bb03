#include "mpnet/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "mpnet/errors.hpp"

namespace mpnet::linalg {
namespace {

using Mat = Eigen::MatrixXcd;

// Pade coefficients b_0..b_m for the [m/m] approximant of exp.
constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                          25200.0,    1512.0,    56.0,      1.0};
constexpr std::array<double, 10> kPade9 = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0,
                                           30270240.0,    2162160.0,    110880.0,     3960.0,
                                           90.0,          1.0};
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};

constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

double one_norm(const Mat& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

// Low-degree approximants: U holds the odd part, V the even part.
template <std::size_t N>
void pade_low(const Mat& a, const std::array<double, N>& b, Mat& u, Mat& v) {
  const auto n = a.rows();
  const Mat ident = Mat::Identity(n, n);
  const Mat a2 = a * a;
  Mat power = ident;
  Mat odd = Mat::Zero(n, n);
  Mat even = Mat::Zero(n, n);
  for (std::size_t k = 0; k + 1 < N; k += 2) {
    even += b[k] * power;
    odd += b[k + 1] * power;
    power = power * a2;
  }
  u = a * odd;
  v = even;
}

void pade13(const Mat& a, Mat& u, Mat& v) {
  const auto& b = kPade13;
  const auto n = a.rows();
  const Mat ident = Mat::Identity(n, n);
  const Mat a2 = a * a;
  const Mat a4 = a2 * a2;
  const Mat a6 = a4 * a2;
  const Mat inner_u = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                      b[3] * a2 + b[1] * ident;
  u = a * inner_u;
  v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 +
      b[0] * ident;
}

}  // namespace

Mat expm(const Mat& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("expm: matrix must be square");
  const auto n = a.rows();
  if (n == 0) return a;
  const double norm = one_norm(a);
  Mat u;
  Mat v;
  int squarings = 0;
  if (norm <= kTheta3) {
    pade_low(a, kPade3, u, v);
  } else if (norm <= kTheta5) {
    pade_low(a, kPade5, u, v);
  } else if (norm <= kTheta7) {
    pade_low(a, kPade7, u, v);
  } else if (norm <= kTheta9) {
    pade_low(a, kPade9, u, v);
  } else {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta13))));
    const Mat scaled = a / std::ldexp(1.0, squarings);
    pade13(scaled, u, v);
  }
  Mat result = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) result = result * result;
  return result;
}

Mat expm_hermitian(const Mat& h, Complex factor) {
  if (h.rows() != h.cols()) throw InvalidArgument("expm_hermitian: matrix must be square");
  if (h.rows() == 0) return h;
  Eigen::SelfAdjointEigenSolver<Mat> solver(h);
  if (solver.info() != Eigen::Success) throw NumericalInstability("eigendecomposition failed");
  const Eigen::VectorXcd phases =
      (factor * solver.eigenvalues().cast<Complex>()).array().exp().matrix();
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

std::vector<std::vector<Eigen::Index>> connected_blocks(const Mat& m) {
  const auto n = m.rows();
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  auto find = [&](Eigen::Index x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == j || m(i, j) == Complex{}) continue;
      const auto ri = find(i);
      const auto rj = find(j);
      if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
    }
  }
  std::vector<std::vector<Eigen::Index>> blocks;
  std::vector<Eigen::Index> slot(static_cast<std::size_t>(n), -1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<Eigen::Index>(blocks.size());
      blocks.emplace_back();
    }
    blocks[slot[root]].push_back(i);
  }
  return blocks;
}

Eigen::VectorXd hermitian_eigenvalues(const Mat& h) {
  if (h.rows() != h.cols()) throw InvalidArgument("hermitian_eigenvalues: matrix must be square");
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(h.rows()));
  for (const auto& block : connected_blocks(h)) {
    if (block.size() == 1) {
      values.push_back(h(block[0], block[0]).real());
      continue;
    }
    const Mat sub = h(block, block);
    Eigen::SelfAdjointEigenSolver<Mat> solver(sub, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalInstability("eigenvalue solver failed");
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
      values.push_back(solver.eigenvalues()(k));
    }
  }
  std::sort(values.begin(), values.end());
  return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

double hermiticity_error(const Mat& m) {
  if (m.size() == 0) return 0.0;
  return std::sqrt((m - m.adjoint()).cwiseAbs2().maxCoeff());
}

}  // namespace mpnet::linalg
