#pragma once

// Gradient-based ridge approximation: Monte Carlo estimation of
// H = E[grad f^T R_V grad f], the bound-minimizing projector built from the
// pencil (H, Sigma^{-1}), and the conditional-expectation profile
//   F_r(x) = 1/M sum_i f(P x + (I - P) Y_i).
//
// Every Monte Carlo routine takes a SampleStream by value and consumes the
// draws 0, 1, 2, ... of that stream (random access), so results depend only
// on the stream, never on the worker count.

#include "ridge/diagnostics.hpp"
#include "ridge/gaussian_measure.hpp"
#include "ridge/model.hpp"
#include "ridge/parallel.hpp"
#include "ridge/projector.hpp"

#include <functional>
#include <iosfwd>

namespace ridge {

struct HMatrixEstimate {
  SpdMatrix h;
  Index samples_used = 0;
  /// min(d, K n): beyond this rank the minimizing projector is not unique.
  Index rank_upper_bound = 0;
};

/// K-sample average of J(X_k)^T R_V J(X_k), X_k ~ mu, accumulated as a
/// running mean per fixed-size block and merged in block order.
/// Jacobian failures are rethrown as ModelEvaluationFailure(k).
HMatrixEstimate estimate_h(const VectorValuedModel& model, const GaussianMeasure& mu,
                           SampleStream stream, Index samples, const Execution& exec = {});

/// P_r = (sum_{i<=r} v_i v_i^T) Sigma^{-1} from the generalized eigenvectors
/// of (h, Sigma^{-1}). Warns with code "non-unique-projector" when r exceeds
/// the rank ceiling of the estimate.
RankRProjector optimal_projector(const HMatrixEstimate& h, const GaussianMeasure& mu, Index r,
                                 Diagnostics* diagnostics = nullptr);

/// Same, reusing an existing decomposition of (h, Sigma^{-1}).
RankRProjector optimal_projector(const GeneralizedEigenPairs& pairs, const GaussianMeasure& mu,
                                 Index r, Index rank_upper_bound,
                                 Diagnostics* diagnostics = nullptr);

/// Squared-error bound trace(Sigma (I - P)^T H (I - P)).
double error_bound(const RankRProjector& p, const HMatrixEstimate& h, const GaussianMeasure& mu);
double error_bound(const RankRProjector& p, const SpdMatrix& h, const GaussianMeasure& mu);

struct SpectrumReport {
  Vector eigenvalues;     // lambda_1 >= ... >= lambda_d of (H, Sigma^{-1})
  Vector tail_sums;       // entry r = sum_{i>r} lambda_i, r = 0..d
  Vector kl_eigenvalues;  // sigma_1^2 >= ... of Sigma
  Vector kl_tail_sums;
};

SpectrumReport spectrum_report(const GeneralizedEigenPairs& pairs, const GaussianMeasure& mu);

/// Smallest r whose bound tail_sums[r] is at most eps^2; d if none.
Index select_rank(const SpectrumReport& report, double eps);

/// x -> 1/M sum_i f(P x + (I - P) Y_i) with Y_1..Y_M frozen at construction.
/// Holds a reference to the model, which must outlive it.
class RidgeApproximation {
 public:
  RidgeApproximation(const VectorValuedModel& model, RankRProjector projector, Matrix cond_samples);

  Vector operator()(const Vector& x) const;

  const RankRProjector& projector() const noexcept { return projector_; }
  /// d x M, column i is Y_i.
  const Matrix& cond_samples() const noexcept { return samples_; }
  Index sample_count() const noexcept { return samples_.cols(); }
  const VectorValuedModel& model() const noexcept { return *model_; }

 private:
  const VectorValuedModel* model_;
  RankRProjector projector_;
  Matrix samples_;
  Matrix complement_parts_;  // (I - P) Y_i
};

/// Draws Y_1..Y_M from `stream`. Requires a Sigma^{-1}-orthogonal projector.
RidgeApproximation build_ridge(const VectorValuedModel& model, const GaussianMeasure& mu,
                               const RankRProjector& p, SampleStream stream, Index m);

struct ValidationResult {
  double mse = 0.0;
  double standard_error = 0.0;
};

/// N-sample estimate of E ||f(X) - F(X)||_V^2 with its standard error.
ValidationResult validate_error(const Approximation& approx, const VectorValuedModel& model,
                                const GaussianMeasure& mu, SampleStream stream, Index samples,
                                const Execution& exec = {});
ValidationResult validate_error(const RidgeApproximation& approx, const VectorValuedModel& model,
                                const GaussianMeasure& mu, SampleStream stream, Index samples,
                                const Execution& exec = {});

struct InflationResult {
  double ratio = 0.0;          // mean replicate mse / exact mse
  double expected = 0.0;       // 1 + 1/M
  double exact_mse = 0.0;
  double mean_replicate_mse = 0.0;
  double ratio_standard_error = 0.0;  // spread over replicates
};

/// Mean over replicates of ||f - F_r||^2 relative to ||f - E(f|P)||^2, both
/// measured on one shared validation sample. `make_replicate(j)` supplies
/// the j-th approximation.
InflationResult inflation_ratio(const VectorValuedModel& model, const GaussianMeasure& mu,
                                const std::function<Approximation(Index)>& make_replicate,
                                const Approximation& exact_profile, Index replicates,
                                SampleStream validation, Index validation_samples,
                                const Execution& exec = {});

/// inflation_ratio with replicate j built from stream.substream(j + 1) and the
/// validation sample drawn from stream.substream(0). Expected value 1 + 1/M.
InflationResult m_inflation_check(const VectorValuedModel& model, const GaussianMeasure& mu,
                                  const RankRProjector& p, Index m, Index replicates,
                                  const Approximation& exact_profile, SampleStream stream,
                                  Index validation_samples, const Execution& exec = {});

}  // namespace ridge
