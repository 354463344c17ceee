#pragma once

// Models whose conditional-expectation error is known in closed form. They
// serve both as examples and as oracles for the Monte Carlo machinery.

#include "ridge/gaussian_measure.hpp"
#include "ridge/index_group.hpp"
#include "ridge/model.hpp"
#include "ridge/projector.hpp"

namespace ridge {

/// f(x) = F x.
class LinearModel final : public VectorValuedModel {
 public:
  explicit LinearModel(Matrix f);
  LinearModel(Matrix f, SpdMatrix output_metric);

  Index input_dim() const override { return f_.cols(); }
  Index output_dim() const override { return f_.rows(); }
  const SpdMatrix& output_metric() const override { return metric_; }
  Vector eval(const Vector& x) const override { return f_ * x; }
  Matrix jacobian(const Vector&) const override { return f_; }
  /// Largest singular value of R_V^{1/2} F.
  std::optional<double> lipschitz_constant() const override { return lipschitz_; }

  const Matrix& matrix() const noexcept { return f_; }
  /// F^T R_V F, the exact gradient Gram matrix for any measure.
  SpdMatrix gradient_gram() const;

 private:
  Matrix f_;
  SpdMatrix metric_;
  double lipschitz_ = 0.0;
};

/// f(x) = 1/2 x^T A x, scalar output.
class QuadraticFormModel final : public VectorValuedModel {
 public:
  explicit QuadraticFormModel(Matrix a);

  Index input_dim() const override { return a_.rows(); }
  Index output_dim() const override { return 1; }
  const SpdMatrix& output_metric() const override { return metric_; }
  Vector eval(const Vector& x) const override;
  Matrix jacobian(const Vector& x) const override;

  const Matrix& matrix() const noexcept { return a_; }

 private:
  Matrix a_;
  SpdMatrix metric_ = SpdMatrix::identity(1);
};

/// f(x) = sum_i a_i sin(w_i x_i), scalar output.
class SumOfSinesModel final : public VectorValuedModel {
 public:
  SumOfSinesModel(Vector amplitudes, Vector frequencies);

  Index input_dim() const override { return a_.size(); }
  Index output_dim() const override { return 1; }
  const SpdMatrix& output_metric() const override { return metric_; }
  Vector eval(const Vector& x) const override;
  Matrix jacobian(const Vector& x) const override;
  /// sup ||grad f|| = ||(a_i w_i)||_2, attained at x = 0.
  std::optional<double> lipschitz_constant() const override;

  const Vector& amplitudes() const noexcept { return a_; }
  const Vector& frequencies() const noexcept { return w_; }

 private:
  Vector a_;
  Vector w_;
  SpdMatrix metric_ = SpdMatrix::identity(1);
};

// Squared errors ||f - E(f | sigma(P))||_H^2 in closed form.

/// trace(Sigma (I - P)^T F^T R_V F (I - P)); exact for Sigma^{-1}-orthogonal P.
double linear_cond_exp_error(const LinearModel& model, const GaussianMeasure& mu,
                             const RankRProjector& p);

/// 1/2 ||A - P A P||_F^2 for mu = N(0, I) and a symmetric projector.
double quadratic_cond_exp_error(const QuadraticFormModel& model, const GaussianMeasure& mu,
                                const RankRProjector& p);

/// 1/2 sum_{i not in tau} a_i^2 (1 - exp(-2 w_i^2)) for mu = N(0, I).
double sines_cond_exp_error(const SumOfSinesModel& model, const GaussianMeasure& mu,
                            const IndexGroup& tau);

/// 1/2 sum_{i not in tau} a_i^2 w_i^2 (1 + exp(-2 w_i^2)): the Poincare bound
/// for the coordinate projector onto tau.
double sines_bound(const SumOfSinesModel& model, const GaussianMeasure& mu,
                   const IndexGroup& tau);

/// x -> F P x + F (I - P) m.
Approximation linear_exact_profile(const LinearModel& model, const GaussianMeasure& mu,
                                   const RankRProjector& p);

/// x -> 1/2 x^T P A P x + 1/2 trace((I - P) A (I - P)).
Approximation quadratic_exact_profile(const QuadraticFormModel& model, const GaussianMeasure& mu,
                                      const RankRProjector& p);

/// x -> sum_{i in tau} a_i sin(w_i x_i).
Approximation sines_exact_profile(const SumOfSinesModel& model, const GaussianMeasure& mu,
                                  const IndexGroup& tau);

}  // namespace ridge
