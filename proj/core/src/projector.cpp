#include "ridge/projector.hpp"

#include "ridge/error.hpp"
#include "ridge/format.hpp"

#include <algorithm>
#include <string>

namespace ridge {

RankRProjector::RankRProjector(Matrix matrix, Index rank, Matrix basis, bool euclidean,
                               bool sigma_inverse)
    : matrix_(std::move(matrix)),
      rank_(rank),
      basis_(std::move(basis)),
      euclidean_(euclidean),
      sigma_inverse_(sigma_inverse) {
  if (matrix_.rows() != matrix_.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "projector matrix must be square");
  }
  if (rank_ < 0 || rank_ > matrix_.rows()) {
    throw Error(ErrorCode::RankOutOfRange, "projector rank " + std::to_string(rank_) +
                                               " outside [0, " + std::to_string(matrix_.rows()) +
                                               "]");
  }
  if (basis_.rows() != matrix_.rows() || basis_.cols() != rank_) {
    throw Error(ErrorCode::DimensionMismatch, "projector basis must be d x r");
  }
}

RankRProjector RankRProjector::from_sigma_basis(const Matrix& basis, const SpdMatrix& sigma) {
  if (basis.rows() != sigma.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "basis and covariance dimensions differ");
  }
  // P = V (Sigma^{-1} V)^T, using symmetry of Sigma^{-1}.
  const Matrix precision_basis = sigma.solve(basis);
  Matrix p = basis * precision_basis.transpose();
  return RankRProjector(std::move(p), basis.cols(), basis, false, true);
}

RankRProjector RankRProjector::from_orthonormal_basis(const Matrix& basis) {
  Matrix p = basis * basis.transpose();
  return RankRProjector(std::move(p), basis.cols(), basis, true, false);
}

RankRProjector RankRProjector::identity(Index dim) {
  return RankRProjector(Matrix::Identity(dim, dim), dim, Matrix::Identity(dim, dim), true, true);
}

RankRProjector RankRProjector::zero(Index dim) {
  return RankRProjector(Matrix::Zero(dim, dim), 0, Matrix(dim, 0), true, true);
}

Matrix RankRProjector::complement() const {
  return Matrix::Identity(dim(), dim()) - matrix_;
}

bool satisfies_sigma_orthogonality(const RankRProjector& p, const SpdMatrix& sigma, double tol) {
  if (p.dim() != sigma.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "projector and covariance dimensions differ");
  }
  const Matrix ps = p.matrix() * sigma.entries();
  const double scale = std::max(ps.norm(), 1.0);
  return (ps - ps.transpose()).norm() <= tol * scale;
}

RankRProjector mark_sigma_orthogonal(const RankRProjector& p, const SpdMatrix& sigma, double tol) {
  if (!satisfies_sigma_orthogonality(p, sigma, tol)) {
    throw Error(ErrorCode::NotSigmaOrthogonal,
                "projector fails P^T Sigma^-1 = Sigma^-1 P at tolerance " + format_double(tol));
  }
  return RankRProjector(p.matrix(), p.rank(), p.basis(), p.is_euclidean(), true);
}

RankRProjector sigma_orthogonalize(const RankRProjector& p, const SpdMatrix& sigma) {
  const Index d = p.dim();
  if (d != sigma.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "projector and covariance dimensions differ");
  }
  const Index r = p.rank();
  if (r == 0) return RankRProjector::zero(d);
  if (r == d) return RankRProjector::identity(d);

  // range(P^T) is the Euclidean complement of ker(P); mapping it through Sigma
  // gives the Sigma^{-1}-orthogonal complement of ker(P).
  const SymmetricEigen eig = sym_eig(p.matrix().transpose() * p.matrix());
  const Matrix row_space = eig.vectors.leftCols(r);
  Matrix range = sigma.entries() * row_space;
  const Matrix gram = row_space.transpose() * range;
  const Matrix chol = cholesky(gram);
  // range <- range * chol^{-T}
  const Matrix normalized =
      chol.triangularView<Eigen::Lower>().solve(range.transpose()).transpose();
  return RankRProjector::from_sigma_basis(normalized, sigma);
}

double trace_quadratic(const SpdMatrix& sigma, const SpdMatrix& h, const RankRProjector& p) {
  const Index d = sigma.dim();
  if (h.dim() != d || p.dim() != d) {
    throw Error(ErrorCode::DimensionMismatch,
                "trace_quadratic: Sigma, H and P must share dimension " + std::to_string(d));
  }
  const Matrix q = p.complement();
  const Matrix inner = q.transpose() * h.entries() * q;
  const double value = sigma.entries().cwiseProduct(inner.transpose()).sum();
  if (value >= 0.0) return value;
  const double threshold = -1e-10 * sigma.entries().norm() * h.entries().norm();
  if (value > threshold) return 0.0;
  throw Error(ErrorCode::NegativeTrace,
              "trace(Sigma (I-P)^T H (I-P)) = " + format_double(value) + " is negative");
}

}  // namespace ridge
