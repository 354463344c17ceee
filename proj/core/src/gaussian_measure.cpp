#include "ridge/gaussian_measure.hpp"

#include "ridge/error.hpp"

#include <cmath>
#include <string>

namespace ridge {

GaussianMeasure::GaussianMeasure(Vector mean, SpdMatrix cov)
    : mean_(std::move(mean)), cov_(std::move(cov)), cache_(std::make_shared<Cache>()) {
  if (mean_.size() != cov_.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "mean has size " + std::to_string(mean_.size()) + " but covariance is " +
                    std::to_string(cov_.dim()) + "x" + std::to_string(cov_.dim()));
  }
  cov_.cholesky();
}

GaussianMeasure GaussianMeasure::standard(Index dim) {
  return GaussianMeasure(Vector::Zero(dim), SpdMatrix::identity(dim));
}

bool GaussianMeasure::is_standard() const {
  return mean_.isZero(0.0) && cov_.entries().isIdentity(0.0);
}

Vector GaussianMeasure::draw_at(const SampleStream& stream, std::uint64_t index) const {
  Vector z(dim());
  stream.normals_at(index, {z.data(), static_cast<std::size_t>(z.size())});
  return mean_ + sampler_factor().triangularView<Eigen::Lower>() * z;
}

Vector GaussianMeasure::whiten(const Vector& x) const {
  return sampler_factor().triangularView<Eigen::Lower>().solve(x - mean_);
}

const SymmetricEigen& GaussianMeasure::covariance_eigen() const {
  std::call_once(cache_->once, [this] { cache_->eig = sym_eig(cov_.entries()); });
  return *cache_->eig;
}

Matrix sample(const GaussianMeasure& mu, SampleStream& stream, Index count) {
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "sample count must be >= 1");
  Matrix z(mu.dim(), count);
  for (Index k = 0; k < count; ++k) {
    stream.normals({z.col(k).data(), static_cast<std::size_t>(mu.dim())});
  }
  Matrix out = mu.sampler_factor().triangularView<Eigen::Lower>() * z;
  out.colwise() += mu.mean();
  return out;
}

RankRProjector kl_projector(const GaussianMeasure& mu, Index r) {
  if (r < 1 || r > mu.dim()) {
    throw Error(ErrorCode::RankOutOfRange,
                "rank " + std::to_string(r) + " outside [1, " + std::to_string(mu.dim()) + "]");
  }
  return RankRProjector::from_orthonormal_basis(mu.covariance_eigen().vectors.leftCols(r));
}

Matrix conditioned_resample(const GaussianMeasure& mu, const RankRProjector& p, const Vector& x,
                            SampleStream& stream, Index count) {
  if (!p.is_sigma_orthogonal()) {
    throw Error(ErrorCode::NotSigmaOrthogonal,
                "conditioned resampling needs a Sigma^-1-orthogonal projector");
  }
  if (p.dim() != mu.dim() || x.size() != mu.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "conditioned_resample: dimension mismatch");
  }
  const Matrix y = sample(mu, stream, count);
  Matrix out = p.complement() * y;
  out.colwise() += p.matrix() * x;
  return out;
}

SpdMatrix squared_exponential_covariance(const Matrix& points, double lengthscale,
                                         double nugget) {
  if (!(lengthscale > 0.0)) throw Error(ErrorCode::InvalidArgument, "lengthscale must be > 0");
  const Index n = points.rows();
  Matrix c(n, n);
  const double inv_l2 = 1.0 / (lengthscale * lengthscale);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      c(i, j) = std::exp(-(points.row(i) - points.row(j)).squaredNorm() * inv_l2);
    }
    c(j, j) += nugget;
  }
  return SpdMatrix(c);
}

}  // namespace ridge
