#pragma once

// -div(kappa grad u) = 0 on [0,1]^2 with u = s1 + s2 on the boundary and a
// log-normal, cell-wise constant diffusivity kappa = exp(x_c) on cell c.
// Discretized with bilinear (Q1) elements; the Dirichlet data is lifted into
// the right-hand side so the interior system stays SPD.

#include "ridge/diagnostics.hpp"
#include "ridge/model.hpp"
#include "ridge/pde/mesh.hpp"

#include <Eigen/Sparse>

#include <iosfwd>
#include <string>
#include <vector>

namespace ridge::pde {

enum class Scenario {
  FullField,  // f(x) = u(x), discrete H^1 norm on the whole domain
  Subdomain,  // f(x) = u(x) restricted to [0.35, 0.65]^2, H^1 norm there
  PointPair,  // f(x) = (u(s_a), u(s_b)), ||v||^2 = alpha v1^2 + beta v2^2
};

Scenario parse_scenario(const std::string& name);
std::string to_string(Scenario scenario);

struct ScenarioOptions {
  Scenario kind = Scenario::FullField;
  double alpha = 1.0;
  double beta = 1.0;
  Eigen::Vector2d point_a{0.2, 0.8};
  Eigen::Vector2d point_b{0.8, 0.2};
  double subdomain_lo = 0.35;
  double subdomain_hi = 0.65;
};

struct AssembledSystem {
  Eigen::SparseMatrix<double> a;  // interior x interior, SPD
  Vector b;                       // lifted boundary data
  Vector kappa;                   // per-cell diffusivity after clamping
};

/// Log-diffusivities are clamped to this range (with a warning) before exp().
inline constexpr double kLogDiffusivityLimit = 40.0;

class DiffusionModel final : public VectorValuedModel {
 public:
  DiffusionModel(Mesh2D mesh, ScenarioOptions options);

  Index input_dim() const override { return mesh_.cell_count(); }
  Index output_dim() const override { return output_.rows(); }
  const SpdMatrix& output_metric() const override { return metric_; }
  Vector eval(const Vector& x) const override;
  /// Adjoint Jacobian, see adjoint_jacobian().
  Matrix jacobian(const Vector& x) const override;

  const Mesh2D& mesh() const noexcept { return mesh_; }
  const ScenarioOptions& options() const noexcept { return options_; }
  /// n x node_count matrix L with f(x) = L u(x).
  const Matrix& output_operator() const noexcept { return output_; }
  const std::vector<Index>& interior_nodes() const noexcept { return interior_nodes_; }

  AssembledSystem assemble_system(const Vector& x, Diagnostics* diagnostics = nullptr) const;

  /// Full nodal solution, boundary values included.
  Vector solve(const Vector& x, Diagnostics* diagnostics = nullptr) const;

  /// Solves A lambda_j = L_j^T for every output row and returns
  /// dy_j/dx_c = -lambda_j^T (dA/dx_c) u + lambda_j^T (db/dx_c), which on
  /// cell c reduces to -kappa_c lambda_j|_c^T K_c u|_c.
  Matrix adjoint_jacobian(const Vector& x) const;

  static double boundary_value(double s1, double s2) { return s1 + s2; }

 private:
  // Interior solution of sys; when `adjoint_rhs` is given, also solves for
  // those right-hand sides with the same factorization.
  Vector solve_interior(const AssembledSystem& sys, const Matrix* adjoint_rhs,
                        Matrix* adjoint) const;
  Vector full_field(const Vector& interior) const;

  Mesh2D mesh_;
  ScenarioOptions options_;
  std::vector<Index> interior_index_;  // node -> interior dof or -1
  std::vector<Index> interior_nodes_;
  Vector boundary_values_;             // nodal s1 + s2 (used on boundary nodes)
  Matrix output_;
  SpdMatrix metric_;
  Matrix output_interior_;             // L restricted to interior columns
};

/// Sigma_ij = exp(-||s_i - s_j||^2 / l^2) over cell centres plus a nugget.
/// The nugget starts at 1e-10 and grows tenfold (with a warning) while the
/// Cholesky factorization fails, giving up beyond 1e-6.
SpdMatrix build_field_covariance(const Mesh2D& mesh, double lengthscale,
                                 Diagnostics* diagnostics = nullptr);

/// CSV rows "cell_center_x,cell_center_y,value" for the field s -> sum_i v_i 1_i(s).
void mode_field_export(std::ostream& out, const Mesh2D& mesh, const Vector& v);

}  // namespace ridge::pde
