#pragma once

#include "ridge/linalg.hpp"

#include <functional>
#include <optional>

namespace ridge {

/// f: R^d -> R^n with its Jacobian and the output inner product
/// (v, w)_V = v^T R_V w. Implementations must be safe to evaluate
/// concurrently.
class VectorValuedModel {
 public:
  virtual ~VectorValuedModel() = default;

  virtual Index input_dim() const = 0;
  virtual Index output_dim() const = 0;
  virtual const SpdMatrix& output_metric() const = 0;

  virtual Vector eval(const Vector& x) const = 0;
  /// n x d matrix of partial derivatives.
  virtual Matrix jacobian(const Vector& x) const = 0;

  /// Global Lipschitz constant with respect to ||.||_V and ||.||_2, when known analytically.
  virtual std::optional<double> lipschitz_constant() const { return std::nullopt; }
};

/// Any approximation x -> F(x) of a model.
using Approximation = std::function<Vector(const Vector&)>;

/// ||v||_V^2 = v^T R_V v.
double squared_norm(const SpdMatrix& metric, const Vector& v);

/// Central differences, one column per input coordinate.
Matrix finite_diff_jacobian(const VectorValuedModel& model, const Vector& x, double step);

/// Step used by the Jacobian checks: 1e-5 (1 + ||x||_inf).
double default_fd_step(const Vector& x);

}  // namespace ridge
