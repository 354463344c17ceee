#include "ridge/analytical_models.hpp"

#include "ridge/error.hpp"

#include <cmath>

namespace ridge {

namespace {

void require_standard(const GaussianMeasure& mu, Index d) {
  if (mu.dim() != d) throw Error(ErrorCode::DimensionMismatch, "measure dimension differs from model");
  if (!mu.is_standard()) {
    throw Error(ErrorCode::NonStandardMeasure, "closed form requires mu = N(0, I)");
  }
}

void require_symmetric_projector(const RankRProjector& p) {
  const Matrix& m = p.matrix();
  const double scale = std::max(1.0, m.norm());
  if ((m - m.transpose()).norm() > 1e-9 * scale || (m * m - m).norm() > 1e-9 * scale) {
    throw Error(ErrorCode::InvalidArgument, "expected a symmetric (orthogonal) projector");
  }
}

}  // namespace

LinearModel::LinearModel(Matrix f) : LinearModel(f, SpdMatrix::identity(f.rows())) {}

LinearModel::LinearModel(Matrix f, SpdMatrix output_metric)
    : f_(std::move(f)), metric_(std::move(output_metric)) {
  if (metric_.dim() != f_.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "output metric must be n x n for F of size n x d");
  }
  const Vector spectrum = sym_eig(gradient_gram().entries()).values;
  lipschitz_ = std::sqrt(std::max(spectrum(0), 0.0));
}

SpdMatrix LinearModel::gradient_gram() const {
  return SpdMatrix(f_.transpose() * metric_.entries() * f_);
}

QuadraticFormModel::QuadraticFormModel(Matrix a) : a_(0.5 * (a + a.transpose())) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::DimensionMismatch, "A must be square");
}

Vector QuadraticFormModel::eval(const Vector& x) const {
  return Vector::Constant(1, 0.5 * x.dot(a_ * x));
}

Matrix QuadraticFormModel::jacobian(const Vector& x) const { return (a_ * x).transpose(); }

SumOfSinesModel::SumOfSinesModel(Vector amplitudes, Vector frequencies)
    : a_(std::move(amplitudes)), w_(std::move(frequencies)) {
  if (a_.size() != w_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "amplitudes and frequencies differ in length");
  }
}

Vector SumOfSinesModel::eval(const Vector& x) const {
  double sum = 0.0;
  for (Index i = 0; i < a_.size(); ++i) sum += a_(i) * std::sin(w_(i) * x(i));
  return Vector::Constant(1, sum);
}

Matrix SumOfSinesModel::jacobian(const Vector& x) const {
  Matrix jac(1, a_.size());
  for (Index i = 0; i < a_.size(); ++i) jac(0, i) = a_(i) * w_(i) * std::cos(w_(i) * x(i));
  return jac;
}

std::optional<double> SumOfSinesModel::lipschitz_constant() const {
  return a_.cwiseProduct(w_).norm();
}

double linear_cond_exp_error(const LinearModel& model, const GaussianMeasure& mu,
                             const RankRProjector& p) {
  if (mu.dim() != model.input_dim() || p.dim() != model.input_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "linear_cond_exp_error: dimension mismatch");
  }
  if (!p.is_sigma_orthogonal()) {
    throw Error(ErrorCode::NotSigmaOrthogonal, "closed form needs a Sigma^-1-orthogonal projector");
  }
  return trace_quadratic(mu.cov(), model.gradient_gram(), p);
}

double quadratic_cond_exp_error(const QuadraticFormModel& model, const GaussianMeasure& mu,
                                const RankRProjector& p) {
  require_standard(mu, model.input_dim());
  require_symmetric_projector(p);
  const Matrix& a = model.matrix();
  const Matrix& pm = p.matrix();
  return 0.5 * (a - pm * a * pm).squaredNorm();
}

double sines_cond_exp_error(const SumOfSinesModel& model, const GaussianMeasure& mu,
                            const IndexGroup& tau) {
  require_standard(mu, model.input_dim());
  if (tau.dim() != model.input_dim()) {
    throw Error(ErrorCode::IndexOutOfRange, "index group built for a different dimension");
  }
  const Vector& a = model.amplitudes();
  const Vector& w = model.frequencies();
  double sum = 0.0;
  for (Index i = 0; i < a.size(); ++i) {
    if (!tau.contains(i)) sum += a(i) * a(i) * (1.0 - std::exp(-2.0 * w(i) * w(i)));
  }
  return 0.5 * sum;
}

double sines_bound(const SumOfSinesModel& model, const GaussianMeasure& mu, const IndexGroup& tau) {
  require_standard(mu, model.input_dim());
  if (tau.dim() != model.input_dim()) {
    throw Error(ErrorCode::IndexOutOfRange, "index group built for a different dimension");
  }
  const Vector& a = model.amplitudes();
  const Vector& w = model.frequencies();
  double sum = 0.0;
  for (Index i = 0; i < a.size(); ++i) {
    if (!tau.contains(i)) {
      sum += a(i) * a(i) * w(i) * w(i) * (1.0 + std::exp(-2.0 * w(i) * w(i)));
    }
  }
  return 0.5 * sum;
}

Approximation linear_exact_profile(const LinearModel& model, const GaussianMeasure& mu,
                                   const RankRProjector& p) {
  if (!p.is_sigma_orthogonal()) {
    throw Error(ErrorCode::NotSigmaOrthogonal, "closed form needs a Sigma^-1-orthogonal projector");
  }
  Matrix fp = model.matrix() * p.matrix();
  Vector offset = model.matrix() * (p.complement() * mu.mean());
  return [fp = std::move(fp), offset = std::move(offset)](const Vector& x) -> Vector {
    return fp * x + offset;
  };
}

Approximation quadratic_exact_profile(const QuadraticFormModel& model, const GaussianMeasure& mu,
                                      const RankRProjector& p) {
  require_standard(mu, model.input_dim());
  require_symmetric_projector(p);
  const Matrix q = p.complement();
  Matrix pap = p.matrix() * model.matrix() * p.matrix();
  const double constant = 0.5 * (q * model.matrix() * q).trace();
  return [pap = std::move(pap), constant](const Vector& x) -> Vector {
    return Vector::Constant(1, 0.5 * x.dot(pap * x) + constant);
  };
}

Approximation sines_exact_profile(const SumOfSinesModel& model, const GaussianMeasure& mu,
                                  const IndexGroup& tau) {
  require_standard(mu, model.input_dim());
  Vector a = model.amplitudes();
  for (Index i = 0; i < a.size(); ++i) {
    if (!tau.contains(i)) a(i) = 0.0;
  }
  Vector w = model.frequencies();
  return [a = std::move(a), w = std::move(w)](const Vector& x) -> Vector {
    double sum = 0.0;
    for (Index i = 0; i < a.size(); ++i) sum += a(i) * std::sin(w(i) * x(i));
    return Vector::Constant(1, sum);
  };
}

}  // namespace ridge
