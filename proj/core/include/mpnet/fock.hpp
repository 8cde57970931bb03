#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mpnet {

using Complex = std::complex<double>;

/// Per-mode truncation dimensions of a joint Fock space. Basis states are laid
/// out row-major: the last mode varies fastest.
class ModeDims {
 public:
  ModeDims(std::initializer_list<int> dims);
  explicit ModeDims(std::vector<int> dims);

  std::size_t modes() const noexcept { return dims_.size(); }
  int operator[](std::size_t mode) const;
  std::span<const int> values() const noexcept { return dims_; }

  /// Product of all per-mode dimensions.
  Eigen::Index total() const noexcept { return total_; }
  /// Distance in the flat index between consecutive occupations of `mode`.
  Eigen::Index stride(std::size_t mode) const;

  Eigen::Index flat_index(std::span<const int> occupations) const;
  std::vector<int> occupations(Eigen::Index flat) const;

  ModeDims without(std::size_t mode) const;
  ModeDims with(std::size_t mode, int dim) const;
  ModeDims concat(const ModeDims& other) const;

  friend bool operator==(const ModeDims&, const ModeDims&) = default;

 private:
  std::vector<int> dims_;
  Eigen::Index total_ = 1;
};

/// Normalized pure state on a truncated multi-mode Fock space.
class FockKet {
 public:
  /// Throws InvalidArgument unless |amplitudes| = 1 within 1e-12.
  FockKet(ModeDims dims, Eigen::VectorXcd amplitudes);

  /// Rescales `amplitudes` to unit norm; throws on a zero vector.
  static FockKet normalized(ModeDims dims, Eigen::VectorXcd amplitudes);

  const ModeDims& dims() const noexcept { return dims_; }
  const Eigen::VectorXcd& amplitudes() const noexcept { return amplitudes_; }

 private:
  ModeDims dims_;
  Eigen::VectorXcd amplitudes_;
};

struct PhysicalityReport {
  double hermiticity_error = 0.0;
  double trace = 0.0;
  double min_eigenvalue = 0.0;

  bool ok(double tol = 1e-10) const;
};

/// Density operator on a truncated multi-mode Fock space.
///
/// Construction checks shape, Hermiticity (1e-10) and 0 <= trace <= 1 (1e-10).
/// Positivity is not checked on construction; see physicality().
class FockDensityMatrix {
 public:
  FockDensityMatrix(ModeDims dims, Eigen::MatrixXcd matrix);

  static FockDensityMatrix from_ket(const FockKet& ket);

  const ModeDims& dims() const noexcept { return dims_; }
  const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }

  double trace() const;
  Complex element(std::span<const int> row, std::span<const int> col) const;
  double population(std::span<const int> occupations) const;

  /// Rescaled to unit trace; throws UnphysicalState when the trace is zero.
  FockDensityMatrix normalized() const;

  /// Full invariant check including the smallest eigenvalue.
  PhysicalityReport physicality() const;

 private:
  ModeDims dims_;
  Eigen::MatrixXcd matrix_;
};

enum class GeneratorKind {
  beamsplitter,      ///< a^dag b + a b^dag
  two_mode_squeeze,  ///< a^dag b^dag + a b
};

struct ExponentialOptions {
  /// Largest tolerated trace loss, relative to the input trace.
  double leak_tol = 1e-8;
  /// The squeezer is evaluated with every mode padded to this multiple of its
  /// truncation before compression back; the beamsplitter is padded exactly.
  int squeeze_padding = 2;
};

/// A two-mode operator that conserves na + nb (beamsplitter) or na - nb
/// (squeezer), stored as dense blocks over those sectors.
class TwoModeOperator {
 public:
  struct Sector {
    /// Local two-mode indices na * dim_b + nb covered by the block.
    std::vector<Eigen::Index> local;
    Eigen::MatrixXcd block;
  };

  TwoModeOperator(int dim_a, int dim_b, std::vector<Sector> sectors);

  int dim_a() const noexcept { return dim_a_; }
  int dim_b() const noexcept { return dim_b_; }
  const std::vector<Sector>& sectors() const noexcept { return sectors_; }

  Complex element(int row_a, int row_b, int col_a, int col_b) const;
  Eigen::MatrixXcd dense() const;

 private:
  int dim_a_;
  int dim_b_;
  std::vector<Sector> sectors_;
  // local index -> (sector, position)
  std::vector<std::pair<int, int>> where_;
};

/// Dense generator matrix (a^dag b + a b^dag or a^dag b^dag + a b) on dims (dim_a, dim_b).
Eigen::MatrixXcd two_mode_generator(GeneratorKind kind, int dim_a, int dim_b);

/// exp(-i angle K) restricted to the truncated space: the exponential is taken
/// on the padded space and projected back, so the result is a contraction and
/// the lost trace measures truncation leakage. Beamsplitter sectors use a
/// symmetric eigendecomposition, squeezer sectors use Pade scaling and squaring.
TwoModeOperator two_mode_propagator(GeneratorKind kind, double angle, int dim_a, int dim_b,
                                    const ExponentialOptions& options = {});

FockDensityMatrix vacuum(const ModeDims& dims);
FockKet number_ket(const ModeDims& dims, std::span<const int> occupations);
FockKet number_ket(const ModeDims& dims, std::initializer_list<int> occupations);

FockDensityMatrix tensor(const FockDensityMatrix& a, const FockDensityMatrix& b);
FockDensityMatrix partial_trace(const FockDensityMatrix& rho, std::size_t mode);

/// <level|_mode rho |level>_mode with the mode removed. The result is
/// subnormalized; its trace is the probability of finding `level`.
FockDensityMatrix project_mode(const FockDensityMatrix& rho, std::size_t mode, int level = 0);

/// Partial transpose on every mode listed in `modes`. Needs at least two modes.
Eigen::MatrixXcd partial_transpose(const FockDensityMatrix& rho, std::span<const std::size_t> modes);
Eigen::MatrixXcd partial_transpose(const FockDensityMatrix& rho, std::size_t mode);

/// U rho U^dagger with U = exp(-i angle K) on modes (mode_a, mode_b). The trace
/// lost to truncation is checked against options.leak_tol; LeakBudgetExceeded
/// carries the measured value.
FockDensityMatrix apply_two_mode_exponential(const FockDensityMatrix& rho, std::size_t mode_a,
                                             std::size_t mode_b, GeneratorKind kind, double angle,
                                             const ExponentialOptions& options = {});

/// Applies a prepared two-mode operator V as V rho V^dagger, without leak checks.
Eigen::MatrixXcd apply_two_mode(const Eigen::MatrixXcd& rho, const ModeDims& dims,
                                std::size_t mode_a, std::size_t mode_b, const TwoModeOperator& op);

/// V psi on an amplitude vector (which may be subnormalized).
Eigen::VectorXcd apply_two_mode_ket(const Eigen::VectorXcd& psi, const ModeDims& dims,
                                    std::size_t mode_a, std::size_t mode_b,
                                    const TwoModeOperator& op);

/// op acting on one mode of an amplitude vector; dims change as in apply_local.
Eigen::VectorXcd apply_local_ket(const Eigen::VectorXcd& psi, const ModeDims& dims,
                                 std::size_t mode, const Eigen::MatrixXcd& op);

/// op_mode rho op_mode^dagger where `op` maps the mode's space (cols) to a
/// space of op.rows() levels; the returned dims reflect the new size.
FockDensityMatrix apply_local(const FockDensityMatrix& rho, std::size_t mode,
                              const Eigen::MatrixXcd& op);

/// sum_k op_k rho op_k^dagger on a single mode.
FockDensityMatrix apply_local_kraus(const FockDensityMatrix& rho, std::size_t mode,
                                    std::span<const Eigen::MatrixXcd> ops);

/// Single-mode annihilation operator truncated to `dim` levels.
Eigen::MatrixXcd annihilation(int dim);
/// Diagonal exp(-i phi n).
Eigen::MatrixXcd phase_rotation(int dim, double phi);

}  // namespace mpnet
