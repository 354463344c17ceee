#include "ridge/ridge.hpp"

#include "ridge/error.hpp"

#include <cmath>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace ridge {

namespace {

void require_dims(const VectorValuedModel& model, const GaussianMeasure& mu) {
  if (model.input_dim() != mu.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "model input dimension " + std::to_string(model.input_dim()) +
                    " differs from measure dimension " + std::to_string(mu.dim()));
  }
}

Matrix checked_jacobian(const VectorValuedModel& model, const Vector& x, Index sample) {
  Matrix jac;
  try {
    jac = model.jacobian(x);
  } catch (const std::exception& e) {
    throw ModelEvaluationFailure(sample, e.what());
  }
  if (jac.rows() != model.output_dim() || jac.cols() != model.input_dim()) {
    throw ModelEvaluationFailure(sample, "Jacobian has wrong shape");
  }
  if (!jac.allFinite()) throw ModelEvaluationFailure(sample, "Jacobian has non-finite entries");
  return jac;
}

// Mean of per-sample values in index order; returns (mean, standard error).
ValidationResult mean_and_error(const std::vector<double>& values) {
  const auto n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double var = values.size() > 1 ? ss / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

}  // namespace

HMatrixEstimate estimate_h(const VectorValuedModel& model, const GaussianMeasure& mu,
                           SampleStream stream, Index samples, const Execution& exec) {
  require_dims(model, mu);
  if (samples < 1) throw Error(ErrorCode::InvalidArgument, "estimate_h needs K >= 1");
  const Index d = mu.dim();
  const Index n = model.output_dim();
  const Matrix& metric_factor = model.output_metric().cholesky();

  const std::int64_t blocks = block_count(samples);
  // Block means are merged strictly in block order as they become available,
  // so at most a few d x d partials are alive at once.
  std::vector<std::optional<Matrix>> pending(static_cast<std::size_t>(blocks));
  std::mutex merge_mutex;
  std::int64_t next_merge = 0;
  Index merged = 0;
  Matrix mean = Matrix::Zero(d, d);

  parallel_for(blocks, exec, [&](std::int64_t b) {
    const Index first = b * kSampleBlock;
    const Index last = std::min<Index>(samples, first + kSampleBlock);
    Matrix block_mean = Matrix::Zero(d, d);
    Matrix term(d, d);
    for (Index k = first; k < last; ++k) {
      const Vector x = mu.draw_at(stream, static_cast<std::uint64_t>(k));
      const Matrix weighted = metric_factor.transpose() * checked_jacobian(model, x, k);
      term.noalias() = weighted.transpose() * weighted;
      block_mean += (term - block_mean) / static_cast<double>(k - first + 1);
    }

    std::lock_guard lock(merge_mutex);
    pending[static_cast<std::size_t>(b)] = std::move(block_mean);
    while (next_merge < blocks && pending[static_cast<std::size_t>(next_merge)]) {
      auto& part = pending[static_cast<std::size_t>(next_merge)];
      const Index count = std::min<Index>(samples, (next_merge + 1) * kSampleBlock) -
                          next_merge * kSampleBlock;
      merged += count;
      mean += (*part - mean) * (static_cast<double>(count) / static_cast<double>(merged));
      part.reset();
      ++next_merge;
    }
  });

  return {SpdMatrix(mean), samples, std::min<Index>(d, samples * n)};
}

RankRProjector optimal_projector(const HMatrixEstimate& h, const GaussianMeasure& mu, Index r,
                                 Diagnostics* diagnostics) {
  return optimal_projector(generalized_eig(h.h, mu.cov()), mu, r, h.rank_upper_bound,
                           diagnostics);
}

RankRProjector optimal_projector(const GeneralizedEigenPairs& pairs, const GaussianMeasure& mu,
                                 Index r, Index rank_upper_bound, Diagnostics* diagnostics) {
  const Index d = mu.dim();
  if (pairs.vectors.rows() != d) {
    throw Error(ErrorCode::DimensionMismatch, "eigenpairs do not match the measure dimension");
  }
  if (r < 1 || r > d) {
    throw Error(ErrorCode::RankOutOfRange,
                "rank " + std::to_string(r) + " outside [1, " + std::to_string(d) + "]");
  }
  if (r > rank_upper_bound) {
    warn(diagnostics, "non-unique-projector",
         "rank " + std::to_string(r) + " exceeds the rank ceiling " +
             std::to_string(rank_upper_bound) +
             " of the H estimate; the minimizing projector is not unique");
  }
  return RankRProjector::from_sigma_basis(pairs.vectors.leftCols(r), mu.cov());
}

double error_bound(const RankRProjector& p, const HMatrixEstimate& h, const GaussianMeasure& mu) {
  return trace_quadratic(mu.cov(), h.h, p);
}

double error_bound(const RankRProjector& p, const SpdMatrix& h, const GaussianMeasure& mu) {
  return trace_quadratic(mu.cov(), h, p);
}

SpectrumReport spectrum_report(const GeneralizedEigenPairs& pairs, const GaussianMeasure& mu) {
  auto tails = [](const Vector& values) {
    const Index d = values.size();
    Vector out = Vector::Zero(d + 1);
    for (Index r = d - 1; r >= 0; --r) out(r) = out(r + 1) + values(r);
    return out;
  };
  SpectrumReport report;
  report.eigenvalues = pairs.values;
  report.tail_sums = tails(pairs.values);
  report.kl_eigenvalues = mu.covariance_eigen().values;
  report.kl_tail_sums = tails(report.kl_eigenvalues);
  return report;
}

Index select_rank(const SpectrumReport& report, double eps) {
  if (!(eps >= 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be >= 0");
  const double target = eps * eps;
  const Index d = report.eigenvalues.size();
  for (Index r = 0; r <= d; ++r) {
    if (report.tail_sums(r) <= target) return r;
  }
  return d;
}

RidgeApproximation::RidgeApproximation(const VectorValuedModel& model, RankRProjector projector,
                                       Matrix cond_samples)
    : model_(&model), projector_(std::move(projector)), samples_(std::move(cond_samples)) {
  if (samples_.rows() != projector_.dim() || projector_.dim() != model.input_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "ridge approximation: dimension mismatch");
  }
  if (samples_.cols() < 1) throw Error(ErrorCode::InvalidArgument, "ridge approximation needs M >= 1");
  complement_parts_ = projector_.complement() * samples_;
}

Vector RidgeApproximation::operator()(const Vector& x) const {
  const Vector fixed = projector_.matrix() * x;
  Vector sum = Vector::Zero(model_->output_dim());
  for (Index i = 0; i < samples_.cols(); ++i) {
    sum += model_->eval(fixed + complement_parts_.col(i));
  }
  return sum / static_cast<double>(samples_.cols());
}

RidgeApproximation build_ridge(const VectorValuedModel& model, const GaussianMeasure& mu,
                               const RankRProjector& p, SampleStream stream, Index m) {
  require_dims(model, mu);
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "build_ridge needs M >= 1");
  if (!p.is_sigma_orthogonal()) {
    throw Error(ErrorCode::NotSigmaOrthogonal,
                "the ridge profile needs a Sigma^-1-orthogonal projector; use sigma_orthogonalize");
  }
  return RidgeApproximation(model, p, sample(mu, stream, m));
}

ValidationResult validate_error(const Approximation& approx, const VectorValuedModel& model,
                                const GaussianMeasure& mu, SampleStream stream, Index samples,
                                const Execution& exec) {
  require_dims(model, mu);
  if (samples < 2) throw Error(ErrorCode::InvalidArgument, "validate_error needs N >= 2");
  std::vector<double> errors(static_cast<std::size_t>(samples));
  parallel_for(block_count(samples), exec, [&](std::int64_t b) {
    const Index last = std::min<Index>(samples, (b + 1) * kSampleBlock);
    for (Index k = b * kSampleBlock; k < last; ++k) {
      const Vector x = mu.draw_at(stream, static_cast<std::uint64_t>(k));
      errors[static_cast<std::size_t>(k)] =
          squared_norm(model.output_metric(), model.eval(x) - approx(x));
    }
  });
  return mean_and_error(errors);
}

ValidationResult validate_error(const RidgeApproximation& approx, const VectorValuedModel& model,
                                const GaussianMeasure& mu, SampleStream stream, Index samples,
                                const Execution& exec) {
  return validate_error(Approximation([&approx](const Vector& x) { return approx(x); }), model, mu,
                        stream, samples, exec);
}

InflationResult inflation_ratio(const VectorValuedModel& model, const GaussianMeasure& mu,
                                const std::function<Approximation(Index)>& make_replicate,
                                const Approximation& exact_profile, Index replicates,
                                SampleStream validation, Index validation_samples,
                                const Execution& exec) {
  require_dims(model, mu);
  if (replicates < 1) throw Error(ErrorCode::InvalidArgument, "need at least one replicate");
  if (validation_samples < 2) throw Error(ErrorCode::InvalidArgument, "need N >= 2 validation samples");

  const Index n_val = validation_samples;
  Matrix points(mu.dim(), n_val);
  Matrix values(model.output_dim(), n_val);
  for (Index k = 0; k < n_val; ++k) {
    points.col(k) = mu.draw_at(validation, static_cast<std::uint64_t>(k));
    values.col(k) = model.eval(points.col(k));
  }
  const SpdMatrix& metric = model.output_metric();

  auto mse_of = [&](const Approximation& approx) {
    double sum = 0.0;
    for (Index k = 0; k < n_val; ++k) {
      sum += squared_norm(metric, values.col(k) - approx(points.col(k)));
    }
    return sum / static_cast<double>(n_val);
  };

  const double exact = mse_of(exact_profile);
  if (!(exact > 0.0)) {
    throw Error(ErrorCode::ZeroVariance, "exact conditional expectation error is zero; ratio undefined");
  }

  std::vector<double> mses(static_cast<std::size_t>(replicates));
  parallel_for(replicates, exec, [&](std::int64_t j) {
    mses[static_cast<std::size_t>(j)] = mse_of(make_replicate(j));
  });
  const ValidationResult stats = mean_and_error(mses);

  InflationResult out;
  out.exact_mse = exact;
  out.mean_replicate_mse = stats.mse;
  out.ratio = stats.mse / exact;
  out.ratio_standard_error = stats.standard_error / exact;
  return out;
}

InflationResult m_inflation_check(const VectorValuedModel& model, const GaussianMeasure& mu,
                                  const RankRProjector& p, Index m, Index replicates,
                                  const Approximation& exact_profile, SampleStream stream,
                                  Index validation_samples, const Execution& exec) {
  if (!p.is_sigma_orthogonal()) {
    throw Error(ErrorCode::NotSigmaOrthogonal, "m_inflation_check needs a Sigma^-1-orthogonal projector");
  }
  auto make = [&](Index j) -> Approximation {
    auto ridge = std::make_shared<RidgeApproximation>(
        build_ridge(model, mu, p, stream.substream(static_cast<std::uint64_t>(j) + 1), m));
    return [ridge](const Vector& x) { return (*ridge)(x); };
  };
  InflationResult out = inflation_ratio(model, mu, make, exact_profile, replicates,
                                        stream.substream(0), validation_samples, exec);
  out.expected = 1.0 + 1.0 / static_cast<double>(m);
  return out;
}

}  // namespace ridge
