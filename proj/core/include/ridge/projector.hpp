#pragma once

#include "ridge/linalg.hpp"

namespace ridge {

/// A rank-r projector P (P^2 = P) together with a basis of its range.
///
/// Two orthogonality flags are tracked independently:
///  - euclidean: P^T = P;
///  - sigma-inverse: P^T Sigma^{-1} = Sigma^{-1} P for the covariance of the
///    measure the projector was built against. Only such projectors admit the
///    closed-form conditional expectation used by the ridge profile.
/// Flags are set by the named constructors; nothing re-checks them later.
class RankRProjector {
 public:
  RankRProjector() = default;
  RankRProjector(Matrix matrix, Index rank, Matrix basis, bool euclidean, bool sigma_inverse);

  /// P = (sum_i v_i v_i^T) Sigma^{-1} for a Sigma^{-1}-orthonormal basis V.
  static RankRProjector from_sigma_basis(const Matrix& basis, const SpdMatrix& sigma);
  /// P = U U^T for a Euclidean-orthonormal basis U.
  static RankRProjector from_orthonormal_basis(const Matrix& basis);
  static RankRProjector identity(Index dim);
  static RankRProjector zero(Index dim);

  const Matrix& matrix() const noexcept { return matrix_; }
  const Matrix& basis() const noexcept { return basis_; }
  Index rank() const noexcept { return rank_; }
  Index dim() const noexcept { return matrix_.rows(); }
  bool is_euclidean() const noexcept { return euclidean_; }
  bool is_sigma_orthogonal() const noexcept { return sigma_inverse_; }

  /// I - P.
  Matrix complement() const;

 private:
  Matrix matrix_;
  Index rank_ = 0;
  Matrix basis_;
  bool euclidean_ = false;
  bool sigma_inverse_ = false;
};

/// Checks P Sigma = (P Sigma)^T, which is equivalent to P^T Sigma^{-1} = Sigma^{-1} P,
/// to `tol` relative Frobenius error.
bool satisfies_sigma_orthogonality(const RankRProjector& p, const SpdMatrix& sigma,
                                   double tol = 1e-8);

/// Returns a copy carrying the sigma-inverse flag after verifying it numerically.
/// Throws NotSigmaOrthogonal when the check fails.
RankRProjector mark_sigma_orthogonal(const RankRProjector& p, const SpdMatrix& sigma,
                                     double tol = 1e-8);

/// The Sigma^{-1}-orthogonal projector sharing the kernel of `p`. The
/// conditional expectation only depends on the kernel, so this is the
/// canonical representative used before building a ridge profile.
RankRProjector sigma_orthogonalize(const RankRProjector& p, const SpdMatrix& sigma);

/// trace(Sigma (I - P)^T H (I - P)). Round-off down to
/// -1e-10 ||Sigma||_F ||H||_F is clamped to zero; anything lower throws NegativeTrace.
double trace_quadratic(const SpdMatrix& sigma, const SpdMatrix& h, const RankRProjector& p);

}  // namespace ridge
