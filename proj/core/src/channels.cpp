#include "mpnet/channels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mpnet/errors.hpp"
#include "mpnet/propagators.hpp"

namespace mpnet {
namespace {

using Mat = Eigen::MatrixXcd;

void check_transmittance(double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw InvalidArgument("transmittance " + std::to_string(t) + " outside [0, 1]");
  }
}

double log_factorial(int n) { return std::lgamma(n + 1.0); }

// sqrt(n! s! / (m!^2 (n-m)! (s-m)!)) R^m T^((n+s)/2 - m), with 0^0 = 1.
double loss_weight(int n, int s, int m, double r, double t) {
  const double log_comb = 0.5 * (log_factorial(n) + log_factorial(s) - 2.0 * log_factorial(m) -
                                 log_factorial(n - m) - log_factorial(s - m));
  const double t_power = 0.5 * (n + s) - m;
  return std::exp(log_comb) * std::pow(r, m) * std::pow(t, t_power);
}

}  // namespace

double transmittance(const FiberSpec& fiber) {
  if (fiber.length_km < 0.0 || fiber.attenuation_db_per_km < 0.0 || fiber.extra_loss_db < 0.0) {
    throw InvalidArgument("fiber length, attenuation and extra loss must be >= 0");
  }
  return std::pow(10.0, -fiber.total_loss_db() / 10.0);
}

std::vector<Mat> loss_kraus_operators(int dim, double transmittance) {
  check_transmittance(transmittance);
  const double r = 1.0 - transmittance;
  std::vector<Mat> ops;
  ops.reserve(static_cast<std::size_t>(dim));
  for (int k = 0; k < dim; ++k) {
    Mat a = Mat::Zero(dim, dim);
    for (int n = k; n < dim; ++n) {
      const double log_binom = log_factorial(n) - log_factorial(k) - log_factorial(n - k);
      a(n - k, n) = std::sqrt(std::exp(log_binom) * std::pow(r, k) * std::pow(transmittance, n - k));
    }
    ops.push_back(std::move(a));
  }
  return ops;
}

FockDensityMatrix apply_loss(const FockDensityMatrix& rho, std::size_t mode, double transmittance,
                             LossMethod method) {
  check_transmittance(transmittance);
  const int dim = rho.dims()[mode];
  if (method == LossMethod::kraus) {
    const auto ops = loss_kraus_operators(dim, transmittance);
    return apply_local_kraus(rho, mode, ops);
  }
  const FockDensityMatrix joint = tensor(rho, vacuum(ModeDims{dim}));
  const std::size_t ancilla = joint.dims().modes() - 1;
  // sin^2 theta = R sends the reflected part into the ancilla.
  const FockDensityMatrix mixed = apply_two_mode_exponential(
      joint, mode, ancilla, GeneratorKind::beamsplitter, std::asin(std::sqrt(1.0 - transmittance)));
  return partial_trace(mixed, ancilla);
}

FockDensityMatrix loss_double_sum(const FockDensityMatrix& rho, std::size_t mode,
                                  double transmittance) {
  check_transmittance(transmittance);
  const auto& dims = rho.dims();
  const double r = 1.0 - transmittance;
  const Eigen::Index n_total = dims.total();
  Mat out = Mat::Zero(n_total, n_total);
  const Eigen::Index stride = dims.stride(mode);
  for (Eigen::Index row = 0; row < n_total; ++row) {
    const int n = static_cast<int>((row / stride) % dims[mode]);
    for (Eigen::Index col = 0; col < n_total; ++col) {
      const Complex c = rho.matrix()(row, col);
      if (c == Complex{}) continue;
      const int s = static_cast<int>((col / stride) % dims[mode]);
      for (int m = 0; m <= std::min(n, s); ++m) {
        out(row - m * stride, col - m * stride) += c * loss_weight(n, s, m, r, transmittance);
      }
    }
  }
  out = 0.5 * (out + out.adjoint()).eval();
  return FockDensityMatrix(dims, std::move(out));
}

FockDensityMatrix post_loss_pulse_state(const Mat& coefficients, double efficiency,
                                        double transmittance, int dim) {
  check_transmittance(transmittance);
  if (!(efficiency >= 0.0 && efficiency <= 1.0)) throw InvalidArgument("efficiency outside [0, 1]");
  if (coefficients.rows() != coefficients.cols()) {
    throw InvalidArgument("coefficient table must be square");
  }
  if (coefficients.rows() > dim) {
    throw InvalidArgument("coefficient table needs " + std::to_string(coefficients.rows()) +
                          " levels but the truncation is " + std::to_string(dim));
  }
  const double r = 1.0 - transmittance;
  const Complex minus_i(0.0, -1.0);
  Mat out = Mat::Zero(dim, dim);
  for (int n = 0; n < coefficients.rows(); ++n) {
    for (int s = 0; s < coefficients.cols(); ++s) {
      const Complex c = coefficients(n, s);
      if (c == Complex{}) continue;
      const Complex phase = std::pow(minus_i, n) * std::pow(-minus_i, s);
      const double swap = std::pow(efficiency, 0.5 * (n + s));
      for (int m = 0; m <= std::min(n, s); ++m) {
        out(n - m, s - m) += c * phase * swap * loss_weight(n, s, m, r, transmittance);
      }
    }
  }
  out = 0.5 * (out + out.adjoint()).eval();
  return FockDensityMatrix(ModeDims{dim}, std::move(out));
}

}  // namespace mpnet
