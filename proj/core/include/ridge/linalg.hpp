#pragma once

// Dense symmetric linear algebra used throughout the library: a cached
// Cholesky factorization, a cyclic Jacobi eigensolver and the Cholesky
// reduction of the generalized problem H v = lambda Sigma^{-1} v.

#include <Eigen/Dense>

#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>

namespace ridge {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Symmetric positive (semi)definite matrix. Entries are symmetrized on
/// construction; the lower Cholesky factor is computed on first request and
/// cached. Copies share the cache, which is written at most once.
class SpdMatrix {
 public:
  SpdMatrix();
  explicit SpdMatrix(const Matrix& entries);

  static SpdMatrix identity(Index dim);
  static SpdMatrix diagonal(const Vector& diag);

  Index dim() const noexcept { return entries_.rows(); }
  const Matrix& entries() const noexcept { return entries_; }
  operator const Matrix&() const noexcept { return entries_; }  // NOLINT

  /// Lower-triangular L with L L^T = entries. Throws NotPositiveDefinite.
  const Matrix& cholesky() const;
  bool has_cholesky() const;

  /// Applies entries^{-1} through two triangular solves.
  Matrix solve(const Matrix& rhs) const;
  Vector solve(const Vector& rhs) const;

  bool is_diagonal(double tol = 0.0) const;

 private:
  struct Cache {
    std::once_flag once;
    std::optional<Matrix> chol;
  };
  Matrix entries_;
  std::shared_ptr<Cache> cache_;
};

/// Cholesky factor of a symmetric matrix. A pivot not exceeding
/// dim * 1e-14 * max(diag) is rejected with NotPositiveDefinite(index).
Matrix cholesky(const Matrix& a);

/// Factor of `a`, cached inside it.
const Matrix& cholesky(const SpdMatrix& a);

struct SymmetricEigen {
  Vector values;   // descending
  Matrix vectors;  // orthonormal columns
};

/// Cyclic Jacobi eigendecomposition. Stops once the off-diagonal Frobenius
/// norm drops below 1e-12 ||A||_F; throws NoConvergence after 100 sweeps.
/// Eigenvalues are stable-sorted in descending order.
SymmetricEigen sym_eig(const Matrix& a);

/// Eigenpairs of the pencil (H, Sigma^{-1}): H v_i = lambda_i Sigma^{-1} v_i
/// with v_i^T Sigma^{-1} v_j = delta_ij and lambda descending.
struct GeneralizedEigenPairs {
  Vector values;
  Matrix vectors;
  /// Columns w_i = L^{-1} v_i, orthonormal in the Euclidean sense, where
  /// L is the Cholesky factor of Sigma.
  Matrix whitened_vectors;
};

/// Reduces to sym_eig(L^T H L) with L = chol(Sigma) and maps back with
/// v = L w. Eigenvalues in [-1e-10 lambda_max, 0) are clamped to zero;
/// anything more negative raises NotPositiveSemidefinite.
GeneralizedEigenPairs generalized_eig(const SpdMatrix& h, const SpdMatrix& sigma);

double relative_frobenius_error(const Matrix& approx, const Matrix& reference);

// Plain text matrix format: a header line holding the dimension ("dim" for a
// square matrix, "rows cols" otherwise) followed by one whitespace-separated
// row per line, written with shortest round-trip precision.
void write_matrix_text(std::ostream& out, const Matrix& m);
Matrix read_matrix_text(std::istream& in);

}  // namespace ridge
