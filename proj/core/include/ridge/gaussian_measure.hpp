#pragma once

#include "ridge/linalg.hpp"
#include "ridge/projector.hpp"
#include "ridge/random.hpp"

#include <memory>
#include <mutex>
#include <optional>

namespace ridge {

/// The input law N(m, Sigma). Sigma must factor by Cholesky; the factor is
/// the sampling map z -> m + L z.
class GaussianMeasure {
 public:
  GaussianMeasure(Vector mean, SpdMatrix cov);

  static GaussianMeasure standard(Index dim);

  Index dim() const noexcept { return mean_.size(); }
  const Vector& mean() const noexcept { return mean_; }
  const SpdMatrix& cov() const noexcept { return cov_; }
  const Matrix& sampler_factor() const { return cov_.cholesky(); }

  /// m == 0 and Sigma == I exactly.
  bool is_standard() const;

  /// The `index`-th vector draw of `stream`, leaving the stream untouched.
  Vector draw_at(const SampleStream& stream, std::uint64_t index) const;

  /// L^{-1} (x - m).
  Vector whiten(const Vector& x) const;

  /// Eigendecomposition of Sigma (the K-L modes), computed once.
  const SymmetricEigen& covariance_eigen() const;

 private:
  struct Cache {
    std::once_flag once;
    std::optional<SymmetricEigen> eig;
  };
  Vector mean_;
  SpdMatrix cov_;
  std::shared_ptr<Cache> cache_;
};

/// `count` draws as the columns of a d x count matrix; advances the stream.
Matrix sample(const GaussianMeasure& mu, SampleStream& stream, Index count);

/// Euclidean projector onto the r leading eigenvectors of Sigma.
RankRProjector kl_projector(const GaussianMeasure& mu, Index r);

/// Columns P x + (I - P) Y_i with Y_i ~ mu drawn from `stream`. Requires a
/// Sigma^{-1}-orthogonal P, for which the output is again mu-distributed
/// when x ~ mu.
Matrix conditioned_resample(const GaussianMeasure& mu, const RankRProjector& p, const Vector& x,
                            SampleStream& stream, Index count);

/// Sigma_ij = exp(-||s_i - s_j||^2 / l^2) + nugget delta_ij for points given
/// as the rows of `points`.
SpdMatrix squared_exponential_covariance(const Matrix& points, double lengthscale,
                                         double nugget);

}  // namespace ridge
