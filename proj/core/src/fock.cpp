#include "mpnet/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "mpnet/errors.hpp"
#include "mpnet/linalg.hpp"

namespace mpnet {
namespace {

using Index = Eigen::Index;
using Mat = Eigen::MatrixXcd;

void check_mode(const ModeDims& dims, std::size_t mode) {
  if (mode >= dims.modes()) {
    throw InvalidArgument("mode index " + std::to_string(mode) + " out of range for " +
                          std::to_string(dims.modes()) + " modes");
  }
}

// Flat indices of all basis states whose `mode` occupation equals `level`,
// ordered as the basis of dims.without(mode).
std::vector<Index> level_indices(const ModeDims& dims, std::size_t mode, int level) {
  const Index inner = dims.stride(mode);
  const Index block = inner * dims[mode];
  const Index outer = dims.total() / block;
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(outer * inner));
  for (Index p = 0; p < outer; ++p) {
    const Index base = p * block + level * inner;
    for (Index q = 0; q < inner; ++q) out.push_back(base + q);
  }
  return out;
}

// Rows of (op on `mode`) * m, where m's row space is `dims`.
Mat left_local(const Mat& m, const ModeDims& dims, std::size_t mode, const Mat& op) {
  const int d_in = dims[mode];
  if (op.cols() != d_in) throw InvalidArgument("local operator does not match mode dimension");
  const Index d_out = op.rows();
  const Index inner = dims.stride(mode);
  const Index outer = dims.total() / (inner * d_in);
  Mat out(outer * d_out * inner, m.cols());
  const Index nonzeros = (op.array() != Complex{}).count();
  if (inner == 1 && 4 * nonzeros > op.size()) {
    for (Index p = 0; p < outer; ++p) {
      out.middleRows(p * d_out, d_out).noalias() = op * m.middleRows(p * d_in, d_in);
    }
    return out;
  }
  struct Entry {
    Index k;
    Index j;
    Complex value;
  };
  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(nonzeros));
  for (Index j = 0; j < d_in; ++j)
    for (Index k = 0; k < d_out; ++k)
      if (op(k, j) != Complex{}) entries.push_back({k, j, op(k, j)});
  // Each level of `mode` owns a contiguous run of `inner` entries per outer index.
  out.setZero();
  for (Index c = 0; c < m.cols(); ++c) {
    const Complex* src = m.col(c).data();
    Complex* dst = out.col(c).data();
    for (Index p = 0; p < outer; ++p) {
      for (const auto& e : entries) {
        const Complex* s = src + (p * d_in + e.j) * inner;
        Complex* d = dst + (p * d_out + e.k) * inner;
        for (Index q = 0; q < inner; ++q) d[q] += e.value * s[q];
      }
    }
  }
  return out;
}

// (V on modes a, b) * m, in place over the rows of m.
void left_two_mode(Mat& m, const ModeDims& dims, std::size_t mode_a, std::size_t mode_b,
                   const TwoModeOperator& op) {
  const Index stride_a = dims.stride(mode_a);
  const Index stride_b = dims.stride(mode_b);
  std::vector<Index> bases;
  bases.reserve(static_cast<std::size_t>(dims.total() / (dims[mode_a] * dims[mode_b])));
  for (Index flat = 0; flat < dims.total(); ++flat) {
    if ((flat / stride_a) % dims[mode_a] == 0 && (flat / stride_b) % dims[mode_b] == 0) {
      bases.push_back(flat);
    }
  }
  std::vector<Index> rows;
  for (const auto& sector : op.sectors()) {
    rows.resize(sector.local.size());
    for (const Index base : bases) {
      for (std::size_t k = 0; k < sector.local.size(); ++k) {
        const Index na = sector.local[k] / op.dim_b();
        const Index nb = sector.local[k] % op.dim_b();
        rows[k] = base + na * stride_a + nb * stride_b;
      }
      const Mat updated = sector.block * m(rows, Eigen::all);
      m(rows, Eigen::all) = updated;
    }
  }
}

}  // namespace

// ---------------------------------------------------------------- ModeDims

ModeDims::ModeDims(std::initializer_list<int> dims) : ModeDims(std::vector<int>(dims)) {}

ModeDims::ModeDims(std::vector<int> dims) : dims_(std::move(dims)) {
  for (const int d : dims_) {
    if (d < 2) throw InvalidArgument("every mode needs dimension >= 2, got " + std::to_string(d));
    total_ *= d;
  }
}

int ModeDims::operator[](std::size_t mode) const {
  check_mode(*this, mode);
  return dims_[mode];
}

Index ModeDims::stride(std::size_t mode) const {
  check_mode(*this, mode);
  Index s = 1;
  for (std::size_t k = mode + 1; k < dims_.size(); ++k) s *= dims_[k];
  return s;
}

Index ModeDims::flat_index(std::span<const int> occupations) const {
  if (occupations.size() != dims_.size()) {
    throw InvalidArgument("expected " + std::to_string(dims_.size()) + " occupations");
  }
  Index flat = 0;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (occupations[k] < 0 || occupations[k] >= dims_[k]) {
      throw InvalidArgument("occupation " + std::to_string(occupations[k]) + " of mode " +
                            std::to_string(k) + " outside truncation " + std::to_string(dims_[k]));
    }
    flat = flat * dims_[k] + occupations[k];
  }
  return flat;
}

std::vector<int> ModeDims::occupations(Index flat) const {
  if (flat < 0 || flat >= total_) throw InvalidArgument("flat index out of range");
  std::vector<int> occ(dims_.size());
  for (std::size_t k = dims_.size(); k-- > 0;) {
    occ[k] = static_cast<int>(flat % dims_[k]);
    flat /= dims_[k];
  }
  return occ;
}

ModeDims ModeDims::without(std::size_t mode) const {
  check_mode(*this, mode);
  if (dims_.size() == 1) throw InvalidArgument("cannot remove the only mode");
  auto copy = dims_;
  copy.erase(copy.begin() + static_cast<std::ptrdiff_t>(mode));
  return ModeDims(std::move(copy));
}

ModeDims ModeDims::with(std::size_t mode, int dim) const {
  check_mode(*this, mode);
  auto copy = dims_;
  copy[mode] = dim;
  return ModeDims(std::move(copy));
}

ModeDims ModeDims::concat(const ModeDims& other) const {
  auto copy = dims_;
  copy.insert(copy.end(), other.dims_.begin(), other.dims_.end());
  return ModeDims(std::move(copy));
}

// ---------------------------------------------------------------- FockKet

FockKet::FockKet(ModeDims dims, Eigen::VectorXcd amplitudes)
    : dims_(std::move(dims)), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != dims_.total()) {
    throw InvalidArgument("ket length does not match mode dimensions");
  }
  if (std::abs(amplitudes_.norm() - 1.0) > 1e-12) {
    throw InvalidArgument("ket is not normalized (norm " + std::to_string(amplitudes_.norm()) + ")");
  }
}

FockKet FockKet::normalized(ModeDims dims, Eigen::VectorXcd amplitudes) {
  const double norm = amplitudes.norm();
  if (norm == 0.0) throw InvalidArgument("cannot normalize a zero ket");
  return FockKet(std::move(dims), amplitudes / norm);
}

// ---------------------------------------------------------------- FockDensityMatrix

bool PhysicalityReport::ok(double tol) const {
  return hermiticity_error <= tol && min_eigenvalue >= -tol && trace <= 1.0 + tol;
}

FockDensityMatrix::FockDensityMatrix(ModeDims dims, Mat matrix)
    : dims_(std::move(dims)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != dims_.total() || matrix_.cols() != dims_.total()) {
    throw InvalidArgument("density matrix shape does not match mode dimensions");
  }
  if (linalg::hermiticity_error(matrix_) > 1e-10) {
    throw InvalidArgument("density matrix is not Hermitian");
  }
  const double tr = matrix_.trace().real();
  if (tr < -1e-10 || tr > 1.0 + 1e-10) {
    throw InvalidArgument("density matrix trace " + std::to_string(tr) + " outside [0, 1]");
  }
}

FockDensityMatrix FockDensityMatrix::from_ket(const FockKet& ket) {
  return FockDensityMatrix(ket.dims(), ket.amplitudes() * ket.amplitudes().adjoint());
}

double FockDensityMatrix::trace() const { return matrix_.trace().real(); }

Complex FockDensityMatrix::element(std::span<const int> row, std::span<const int> col) const {
  return matrix_(dims_.flat_index(row), dims_.flat_index(col));
}

double FockDensityMatrix::population(std::span<const int> occupations) const {
  const Index k = dims_.flat_index(occupations);
  return matrix_(k, k).real();
}

FockDensityMatrix FockDensityMatrix::normalized() const {
  const double tr = trace();
  if (!(tr > 0.0)) throw UnphysicalState("cannot normalize a state with zero trace");
  Mat scaled = matrix_ / tr;
  scaled = 0.5 * (scaled + scaled.adjoint()).eval();
  return FockDensityMatrix(dims_, std::move(scaled));
}

PhysicalityReport FockDensityMatrix::physicality() const {
  PhysicalityReport report;
  report.hermiticity_error = linalg::hermiticity_error(matrix_);
  report.trace = trace();
  const Mat herm = 0.5 * (matrix_ + matrix_.adjoint());
  report.min_eigenvalue = linalg::hermitian_eigenvalues(herm).minCoeff();
  return report;
}

// ---------------------------------------------------------------- TwoModeOperator

TwoModeOperator::TwoModeOperator(int dim_a, int dim_b, std::vector<Sector> sectors)
    : dim_a_(dim_a), dim_b_(dim_b), sectors_(std::move(sectors)) {
  where_.assign(static_cast<std::size_t>(dim_a_) * dim_b_, {-1, -1});
  for (std::size_t s = 0; s < sectors_.size(); ++s) {
    const auto& sec = sectors_[s];
    if (sec.block.rows() != static_cast<Index>(sec.local.size()) ||
        sec.block.cols() != static_cast<Index>(sec.local.size())) {
      throw InvalidArgument("sector block does not match its index list");
    }
    for (std::size_t k = 0; k < sec.local.size(); ++k) {
      auto& slot = where_.at(static_cast<std::size_t>(sec.local[k]));
      if (slot.first >= 0) throw InvalidArgument("sectors overlap");
      slot = {static_cast<int>(s), static_cast<int>(k)};
    }
  }
  for (const auto& slot : where_) {
    if (slot.first < 0) throw InvalidArgument("sectors do not cover the two-mode space");
  }
}

Complex TwoModeOperator::element(int row_a, int row_b, int col_a, int col_b) const {
  const auto r = where_.at(static_cast<std::size_t>(row_a * dim_b_ + row_b));
  const auto c = where_.at(static_cast<std::size_t>(col_a * dim_b_ + col_b));
  if (r.first != c.first) return {};
  return sectors_[static_cast<std::size_t>(r.first)].block(r.second, c.second);
}

Mat TwoModeOperator::dense() const {
  Mat out = Mat::Zero(static_cast<Index>(dim_a_) * dim_b_, static_cast<Index>(dim_a_) * dim_b_);
  for (const auto& sec : sectors_) out(sec.local, sec.local) = sec.block;
  return out;
}

Mat two_mode_generator(GeneratorKind kind, int dim_a, int dim_b) {
  const Mat a = annihilation(dim_a);
  const Mat b = annihilation(dim_b);
  const Mat ia = Mat::Identity(dim_a, dim_a);
  const Mat ib = Mat::Identity(dim_b, dim_b);
  auto kron = [](const Mat& x, const Mat& y) {
    Mat out(x.rows() * y.rows(), x.cols() * y.cols());
    for (Index i = 0; i < x.rows(); ++i)
      for (Index j = 0; j < x.cols(); ++j)
        out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    return out;
  };
  const Mat ab_dag = kron(a, b.adjoint());
  if (kind == GeneratorKind::beamsplitter) {
    return ab_dag.adjoint() + ab_dag;
  }
  const Mat ab = kron(a, b);
  return ab.adjoint() + ab;
}

TwoModeOperator two_mode_propagator(GeneratorKind kind, double angle, int dim_a, int dim_b,
                                    const ExponentialOptions& options) {
  if (dim_a < 2 || dim_b < 2) throw InvalidArgument("mode dimensions must be >= 2");
  if (!std::isfinite(angle)) throw InvalidArgument("angle must be finite");
  if (options.squeeze_padding < 1) throw InvalidArgument("squeeze_padding must be >= 1");

  std::vector<TwoModeOperator::Sector> sectors;
  const bool bs = kind == GeneratorKind::beamsplitter;
  const int pad_a = bs ? dim_a + dim_b - 1 : options.squeeze_padding * dim_a;
  const int pad_b = bs ? dim_a + dim_b - 1 : options.squeeze_padding * dim_b;

  // Each sector is a chain of padded basis states (na, nb); links carry the
  // generator's matrix elements.
  auto build = [&](const std::vector<std::pair<int, int>>& chain) {
    const auto m = static_cast<Index>(chain.size());
    Mat gen = Mat::Zero(m, m);
    for (Index k = 0; k + 1 < m; ++k) {
      const auto [na, nb] = chain[static_cast<std::size_t>(k)];
      // Successive chain entries differ by one quantum in each mode.
      const double w = bs ? std::sqrt(static_cast<double>(na + 1) * nb)
                          : std::sqrt(static_cast<double>(na + 1) * (nb + 1));
      gen(k, k + 1) = w;
      gen(k + 1, k) = w;
    }
    const Mat u = bs ? linalg::expm_hermitian(gen, Complex(0.0, -angle))
                     : linalg::expm(Complex(0.0, -angle) * gen);
    std::vector<Index> keep;
    TwoModeOperator::Sector sector;
    for (Index k = 0; k < m; ++k) {
      const auto [na, nb] = chain[static_cast<std::size_t>(k)];
      if (na < dim_a && nb < dim_b) {
        keep.push_back(k);
        sector.local.push_back(static_cast<Index>(na) * dim_b + nb);
      }
    }
    if (keep.empty()) return;
    sector.block = u(keep, keep);
    sectors.push_back(std::move(sector));
  };

  if (bs) {
    // Conserved na + nb; chain ordered by increasing na.
    for (int total = 0; total <= (dim_a - 1) + (dim_b - 1); ++total) {
      std::vector<std::pair<int, int>> chain;
      for (int na = std::max(0, total - (pad_b - 1)); na <= std::min(total, pad_a - 1); ++na) {
        chain.emplace_back(na, total - na);
      }
      build(chain);
    }
  } else {
    // Conserved na - nb; chain ordered by increasing nb.
    for (int diff = -(dim_b - 1); diff <= dim_a - 1; ++diff) {
      std::vector<std::pair<int, int>> chain;
      for (int nb = std::max(0, -diff); nb < pad_b && nb + diff < pad_a; ++nb) {
        chain.emplace_back(nb + diff, nb);
      }
      build(chain);
    }
  }
  return TwoModeOperator(dim_a, dim_b, std::move(sectors));
}

// ---------------------------------------------------------------- operations

FockDensityMatrix vacuum(const ModeDims& dims) {
  Mat m = Mat::Zero(dims.total(), dims.total());
  m(0, 0) = 1.0;
  return FockDensityMatrix(dims, std::move(m));
}

FockKet number_ket(const ModeDims& dims, std::span<const int> occupations) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dims.total());
  v(dims.flat_index(occupations)) = 1.0;
  return FockKet(dims, std::move(v));
}

FockKet number_ket(const ModeDims& dims, std::initializer_list<int> occupations) {
  return number_ket(dims, std::span<const int>(occupations.begin(), occupations.size()));
}

FockDensityMatrix tensor(const FockDensityMatrix& a, const FockDensityMatrix& b) {
  const Mat& x = a.matrix();
  const Mat& y = b.matrix();
  Mat out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = 0; j < x.cols(); ++j)
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
  return FockDensityMatrix(a.dims().concat(b.dims()), std::move(out));
}

FockDensityMatrix partial_trace(const FockDensityMatrix& rho, std::size_t mode) {
  const auto& dims = rho.dims();
  check_mode(dims, mode);
  const ModeDims reduced = dims.without(mode);
  Mat out = Mat::Zero(reduced.total(), reduced.total());
  for (int level = 0; level < dims[mode]; ++level) {
    const auto idx = level_indices(dims, mode, level);
    out += rho.matrix()(idx, idx);
  }
  return FockDensityMatrix(reduced, std::move(out));
}

FockDensityMatrix project_mode(const FockDensityMatrix& rho, std::size_t mode, int level) {
  const auto& dims = rho.dims();
  check_mode(dims, mode);
  if (level < 0 || level >= dims[mode]) throw InvalidArgument("projection level out of range");
  const auto idx = level_indices(dims, mode, level);
  return FockDensityMatrix(dims.without(mode), rho.matrix()(idx, idx));
}

Mat partial_transpose(const FockDensityMatrix& rho, std::span<const std::size_t> modes) {
  const auto& dims = rho.dims();
  if (dims.modes() < 2) throw InvalidArgument("partial transpose needs at least two modes");
  Mat current = rho.matrix();
  for (const std::size_t mode : modes) {
    check_mode(dims, mode);
    Mat next(current.rows(), current.cols());
    std::vector<std::vector<Index>> idx;
    for (int level = 0; level < dims[mode]; ++level) idx.push_back(level_indices(dims, mode, level));
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) next(idx[i], idx[j]) = current(idx[j], idx[i]);
    current = std::move(next);
  }
  return current;
}

Mat partial_transpose(const FockDensityMatrix& rho, std::size_t mode) {
  const std::size_t modes[] = {mode};
  return partial_transpose(rho, modes);
}

Mat apply_two_mode(const Mat& rho, const ModeDims& dims, std::size_t mode_a, std::size_t mode_b,
                   const TwoModeOperator& op) {
  check_mode(dims, mode_a);
  check_mode(dims, mode_b);
  if (mode_a == mode_b) throw InvalidArgument("two-mode operator needs distinct modes");
  if (op.dim_a() != dims[mode_a] || op.dim_b() != dims[mode_b]) {
    throw InvalidArgument("two-mode operator does not match the mode dimensions");
  }
  Mat work = rho;
  left_two_mode(work, dims, mode_a, mode_b, op);
  Mat adj = work.adjoint();
  left_two_mode(adj, dims, mode_a, mode_b, op);
  return adj.adjoint();
}

Eigen::VectorXcd apply_two_mode_ket(const Eigen::VectorXcd& psi, const ModeDims& dims,
                                    std::size_t mode_a, std::size_t mode_b,
                                    const TwoModeOperator& op) {
  if (psi.size() != dims.total()) throw InvalidArgument("amplitude vector does not match dims");
  check_mode(dims, mode_a);
  check_mode(dims, mode_b);
  if (mode_a == mode_b) throw InvalidArgument("two-mode operator needs distinct modes");
  if (op.dim_a() != dims[mode_a] || op.dim_b() != dims[mode_b]) {
    throw InvalidArgument("two-mode operator does not match the mode dimensions");
  }
  Mat work = psi;
  left_two_mode(work, dims, mode_a, mode_b, op);
  return work.col(0);
}

Eigen::VectorXcd apply_local_ket(const Eigen::VectorXcd& psi, const ModeDims& dims,
                                 std::size_t mode, const Mat& op) {
  if (psi.size() != dims.total()) throw InvalidArgument("amplitude vector does not match dims");
  check_mode(dims, mode);
  return left_local(psi, dims, mode, op).col(0);
}

FockDensityMatrix apply_two_mode_exponential(const FockDensityMatrix& rho, std::size_t mode_a,
                                             std::size_t mode_b, GeneratorKind kind, double angle,
                                             const ExponentialOptions& options) {
  const auto& dims = rho.dims();
  check_mode(dims, mode_a);
  check_mode(dims, mode_b);
  if (mode_a == mode_b) throw InvalidArgument("two-mode exponential needs distinct modes");
  const auto op = two_mode_propagator(kind, angle, dims[mode_a], dims[mode_b], options);
  Mat out = apply_two_mode(rho.matrix(), dims, mode_a, mode_b, op);
  out = 0.5 * (out + out.adjoint()).eval();
  const double before = rho.trace();
  const double leak = std::max(0.0, before - out.trace().real());
  if (leak > options.leak_tol * std::max(before, 1e-300)) {
    throw LeakBudgetExceeded(leak, options.leak_tol);
  }
  return FockDensityMatrix(dims, std::move(out));
}

FockDensityMatrix apply_local(const FockDensityMatrix& rho, std::size_t mode, const Mat& op) {
  const auto& dims = rho.dims();
  check_mode(dims, mode);
  const ModeDims out_dims = dims.with(mode, static_cast<int>(op.rows()));
  const Mat left = left_local(rho.matrix(), dims, mode, op);
  Mat both = left_local(Mat(left.adjoint()), dims, mode, op).adjoint();
  both = 0.5 * (both + both.adjoint()).eval();
  return FockDensityMatrix(out_dims, std::move(both));
}

FockDensityMatrix apply_local_kraus(const FockDensityMatrix& rho, std::size_t mode,
                                    std::span<const Mat> ops) {
  if (ops.empty()) throw InvalidArgument("empty Kraus set");
  const auto& dims = rho.dims();
  check_mode(dims, mode);
  const ModeDims out_dims = dims.with(mode, static_cast<int>(ops.front().rows()));
  Mat sum = Mat::Zero(out_dims.total(), out_dims.total());
  for (const auto& op : ops) {
    if (op.rows() != ops.front().rows()) throw InvalidArgument("Kraus operators differ in shape");
    const Mat left = left_local(rho.matrix(), dims, mode, op);
    sum += left_local(Mat(left.adjoint()), dims, mode, op).adjoint();
  }
  sum = 0.5 * (sum + sum.adjoint()).eval();
  return FockDensityMatrix(out_dims, std::move(sum));
}

Mat annihilation(int dim) {
  if (dim < 2) throw InvalidArgument("mode dimension must be >= 2");
  Mat a = Mat::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Mat phase_rotation(int dim, double phi) {
  Mat r = Mat::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) r(n, n) = std::polar(1.0, -phi * n);
  return r;
}

}  // namespace mpnet
