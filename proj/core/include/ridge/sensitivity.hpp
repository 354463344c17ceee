#pragma once

// Vector-valued Sobol' indices and their derivative-based (DGSM) bounds for
// independent Gaussian inputs.
//
//   S_tau = 1 - ||f - E(f | X_tau)||^2 / ||f - E f||^2
//   T_tau =     ||f - E(f | X_-tau)||^2 / ||f - E f||^2
//
// with norms taken in L^2(mu; V). The Poincare inequality gives
//   S_tau >= 1 - sum_{i not in tau} Var(X_i) H_ii / ||f - E f||^2
//   T_tau <=     sum_{i in tau}     Var(X_i) H_ii / ||f - E f||^2.

#include "ridge/gaussian_measure.hpp"
#include "ridge/index_group.hpp"
#include "ridge/model.hpp"
#include "ridge/parallel.hpp"
#include "ridge/projector.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <vector>

namespace ridge {

/// sum_{i in tau} e_i e_i^T, flagged Euclidean-orthogonal.
RankRProjector coordinate_projector(const IndexGroup& tau);
/// As above, additionally flagged Sigma^{-1}-orthogonal when Sigma is diagonal.
RankRProjector coordinate_projector(const IndexGroup& tau, const GaussianMeasure& mu);

struct SobolEstimate {
  double s_hat = 0.0;
  double s_se = 0.0;
  double t_hat = 0.0;
  double t_se = 0.0;
  double total_variance = 0.0;
  double total_variance_se = 0.0;
};

/// Nested Monte Carlo: N outer draws X_k; for each, M_inner conditioned
/// resamples keep X_tau (for S) or X_-tau (for T) and redraw the rest. The
/// per-draw error is the unbiased spread of the M_inner + 1 values
/// {f(X_k), f(resamples)}, so no (1 + 1/M) correction is needed.
/// Requires diagonal Sigma (NonDiagonalCovariance otherwise).
SobolEstimate sobol_estimates(const VectorValuedModel& model, const GaussianMeasure& mu,
                              const IndexGroup& tau, SampleStream stream, Index outer = 2000,
                              Index inner = 64, const Execution& exec = {});

/// H_ii = E ||d_i f||_V^2: the diagonal of estimate_h on the same stream.
Vector dgsm(const VectorValuedModel& model, const GaussianMeasure& mu, SampleStream stream,
            Index samples, const Execution& exec = {});

struct SobolBounds {
  double s_lower = 0.0;
  double t_upper = 0.0;
  bool vacuous = false;  // s_lower < 0
};

SobolBounds sobol_bounds(const Vector& dgsm, const GaussianMeasure& mu, const IndexGroup& tau,
                         double total_variance);

struct GroupSensitivity {
  IndexGroup group;
  SobolEstimate estimate;
  SobolBounds bounds;
};

struct SensitivityReport {
  std::vector<GroupSensitivity> groups;
  Vector dgsm;
  double total_variance = 0.0;
  double total_variance_se = 0.0;
};

struct SensitivityOptions {
  Index outer = 2000;
  Index inner = 64;
  Index dgsm_samples = 2000;
};

/// Runs the estimators for every group. Group g uses stream.substream(g + 1);
/// the DGSM uses stream.substream(0). The reported total variance is the one
/// from the first group's outer sample.
SensitivityReport sensitivity_report(const VectorValuedModel& model, const GaussianMeasure& mu,
                                     const std::vector<IndexGroup>& groups, SampleStream stream,
                                     const SensitivityOptions& options = {},
                                     const Execution& exec = {});

/// Columns: group,S_hat,S_se,S_lower,T_hat,T_se,T_upper,vacuous
void write_sensitivity_csv(std::ostream& out, const SensitivityReport& report);
nlohmann::json to_json(const SensitivityReport& report);

}  // namespace ridge
