#include "ridge/pde/diffusion_model.hpp"

#include "ridge/error.hpp"
#include "ridge/format.hpp"
#include "ridge/gaussian_measure.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <ostream>

namespace ridge::pde {

namespace {

constexpr Index kDirectSolverMaxCells = 16;
constexpr double kCgTolerance = 1e-12;
constexpr double kResidualLimit = 1e-8;
constexpr double kCoordinateSlack = 1e-12;

// Discrete H^1 Gram matrix (mass + unit stiffness) over the given cells,
// indexed through node_to_local.
Matrix h1_gram(const Mesh2D& mesh, const std::vector<Index>& cells,
               const std::vector<Index>& node_to_local, Index size) {
  Matrix gram = Matrix::Zero(size, size);
  const Eigen::Matrix4d local = q1_mass(mesh.spacing()) + q1_stiffness();
  for (Index c : cells) {
    const auto nodes = mesh.cell_nodes(c);
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        gram(node_to_local[static_cast<std::size_t>(nodes[a])],
             node_to_local[static_cast<std::size_t>(nodes[b])]) += local(a, b);
      }
    }
  }
  return gram;
}

// Bilinear interpolation weights of point s as a row over all nodes.
Eigen::RowVectorXd point_evaluation(const Mesh2D& mesh, const Eigen::Vector2d& s) {
  if (s.minCoeff() < 0.0 || s.maxCoeff() > 1.0) {
    throw Error(ErrorCode::InvalidArgument, "evaluation point outside the unit square");
  }
  const Index g = mesh.cells_per_side();
  const double gx = s(0) * static_cast<double>(g);
  const double gy = s(1) * static_cast<double>(g);
  const Index i = std::min<Index>(static_cast<Index>(std::floor(gx)), g - 1);
  const Index j = std::min<Index>(static_cast<Index>(std::floor(gy)), g - 1);
  const double xi = gx - static_cast<double>(i);
  const double eta = gy - static_cast<double>(j);
  Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(mesh.node_count());
  row(mesh.node_index(i, j)) += (1 - xi) * (1 - eta);
  row(mesh.node_index(i + 1, j)) += xi * (1 - eta);
  row(mesh.node_index(i + 1, j + 1)) += xi * eta;
  row(mesh.node_index(i, j + 1)) += (1 - xi) * eta;
  return row;
}

}  // namespace

Scenario parse_scenario(const std::string& name) {
  if (name == "full_field") return Scenario::FullField;
  if (name == "subdomain") return Scenario::Subdomain;
  if (name == "point_pair") return Scenario::PointPair;
  throw Error(ErrorCode::InvalidArgument,
              "unknown scenario '" + name + "' (expected full_field, subdomain or point_pair)");
}

std::string to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::FullField: return "full_field";
    case Scenario::Subdomain: return "subdomain";
    case Scenario::PointPair: return "point_pair";
  }
  return "unknown";
}

DiffusionModel::DiffusionModel(Mesh2D mesh, ScenarioOptions options)
    : mesh_(std::move(mesh)), options_(options) {
  const Index nodes = mesh_.node_count();
  interior_index_.assign(static_cast<std::size_t>(nodes), -1);
  boundary_values_.resize(nodes);
  for (Index k = 0; k < nodes; ++k) {
    boundary_values_(k) = boundary_value(mesh_.nodes()(k, 0), mesh_.nodes()(k, 1));
    if (!mesh_.boundary_mask()[static_cast<std::size_t>(k)]) {
      interior_index_[static_cast<std::size_t>(k)] = static_cast<Index>(interior_nodes_.size());
      interior_nodes_.push_back(k);
    }
  }
  if (interior_nodes_.empty()) {
    throw Error(ErrorCode::InvalidArgument, "mesh has no interior nodes; use at least 2 cells per side");
  }

  switch (options_.kind) {
    case Scenario::FullField: {
      output_ = Matrix::Identity(nodes, nodes);
      std::vector<Index> all_cells(static_cast<std::size_t>(mesh_.cell_count()));
      std::vector<Index> identity(static_cast<std::size_t>(nodes));
      for (Index c = 0; c < mesh_.cell_count(); ++c) all_cells[static_cast<std::size_t>(c)] = c;
      for (Index k = 0; k < nodes; ++k) identity[static_cast<std::size_t>(k)] = k;
      metric_ = SpdMatrix(h1_gram(mesh_, all_cells, identity, nodes));
      break;
    }
    case Scenario::Subdomain: {
      const double lo = options_.subdomain_lo - kCoordinateSlack;
      const double hi = options_.subdomain_hi + kCoordinateSlack;
      auto inside = [&](Index k) {
        const double s1 = mesh_.nodes()(k, 0);
        const double s2 = mesh_.nodes()(k, 1);
        return s1 >= lo && s1 <= hi && s2 >= lo && s2 <= hi;
      };
      std::vector<Index> local(static_cast<std::size_t>(nodes), -1);
      std::vector<Index> selected;
      for (Index k = 0; k < nodes; ++k) {
        if (inside(k)) {
          local[static_cast<std::size_t>(k)] = static_cast<Index>(selected.size());
          selected.push_back(k);
        }
      }
      std::vector<Index> cells;
      for (Index c = 0; c < mesh_.cell_count(); ++c) {
        const auto cn = mesh_.cell_nodes(c);
        bool all_inside = true;
        for (Index k : cn) all_inside = all_inside && inside(k);
        if (all_inside) cells.push_back(c);
      }
      if (cells.empty()) {
        throw Error(ErrorCode::InvalidArgument,
                    "grid too coarse: no cell lies inside the subdomain");
      }
      const auto n = static_cast<Index>(selected.size());
      output_ = Matrix::Zero(n, nodes);
      for (Index r = 0; r < n; ++r) output_(r, selected[static_cast<std::size_t>(r)]) = 1.0;
      metric_ = SpdMatrix(h1_gram(mesh_, cells, local, n));
      metric_.cholesky();
      break;
    }
    case Scenario::PointPair: {
      if (!(options_.alpha > 0.0) || !(options_.beta > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "point-pair weights must be positive");
      }
      output_ = Matrix(2, nodes);
      output_.row(0) = point_evaluation(mesh_, options_.point_a);
      output_.row(1) = point_evaluation(mesh_, options_.point_b);
      metric_ = SpdMatrix::diagonal(Eigen::Vector2d(options_.alpha, options_.beta));
      break;
    }
  }

  output_interior_.resize(output_.rows(), static_cast<Index>(interior_nodes_.size()));
  for (std::size_t k = 0; k < interior_nodes_.size(); ++k) {
    output_interior_.col(static_cast<Index>(k)) = output_.col(interior_nodes_[k]);
  }
}

AssembledSystem DiffusionModel::assemble_system(const Vector& x, Diagnostics* diagnostics) const {
  if (x.size() != input_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "log-diffusivity vector has wrong size");
  }
  if (!x.allFinite()) throw Error(ErrorCode::InvalidArgument, "log-diffusivity must be finite");

  AssembledSystem sys;
  sys.kappa.resize(input_dim());
  bool clamped = false;
  for (Index c = 0; c < input_dim(); ++c) {
    const double v = std::clamp(x(c), -kLogDiffusivityLimit, kLogDiffusivityLimit);
    clamped = clamped || v != x(c);
    sys.kappa(c) = std::exp(v);
  }
  if (clamped) {
    warn(diagnostics, "log-diffusivity-clamped",
         "entries of x outside [-40, 40] were clamped before exponentiation");
  }

  const auto n_int = static_cast<Index>(interior_nodes_.size());
  sys.b = Vector::Zero(n_int);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(16 * input_dim()));
  const Eigen::Matrix4d& k_ref = q1_stiffness();
  for (Index c = 0; c < input_dim(); ++c) {
    const auto nodes = mesh_.cell_nodes(c);
    const double kappa = sys.kappa(c);
    for (int a = 0; a < 4; ++a) {
      const Index ia = interior_index_[static_cast<std::size_t>(nodes[a])];
      if (ia < 0) continue;
      for (int b = 0; b < 4; ++b) {
        const Index ib = interior_index_[static_cast<std::size_t>(nodes[b])];
        const double entry = kappa * k_ref(a, b);
        if (ib >= 0) {
          triplets.emplace_back(ia, ib, entry);
        } else {
          sys.b(ia) -= entry * boundary_values_(nodes[b]);
        }
      }
    }
  }
  sys.a.resize(n_int, n_int);
  sys.a.setFromTriplets(triplets.begin(), triplets.end());
  return sys;
}

Vector DiffusionModel::solve_interior(const AssembledSystem& sys, const Matrix* adjoint_rhs,
                                      Matrix* adjoint) const {
  Vector u;
  if (mesh_.cells_per_side() <= kDirectSolverMaxCells) {
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(sys.a);
    if (llt.info() != Eigen::Success) {
      throw SolverFailure("sparse Cholesky factorization failed", std::nan(""));
    }
    u = llt.solve(sys.b);
    if (adjoint_rhs != nullptr) *adjoint = llt.solve(*adjoint_rhs);
  } else {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(kCgTolerance);
    cg.setMaxIterations(10 * sys.a.rows() + 100);
    cg.compute(sys.a);
    u = cg.solve(sys.b);
    if (cg.info() != Eigen::Success) {
      throw SolverFailure("conjugate gradient did not converge", cg.error());
    }
    if (adjoint_rhs != nullptr) {
      adjoint->resize(adjoint_rhs->rows(), adjoint_rhs->cols());
      for (Index j = 0; j < adjoint_rhs->cols(); ++j) {
        if (adjoint_rhs->col(j).isZero(0.0)) {
          adjoint->col(j).setZero();
          continue;
        }
        adjoint->col(j) = cg.solve(Vector(adjoint_rhs->col(j)));
        if (cg.info() != Eigen::Success) {
          throw SolverFailure("conjugate gradient did not converge on adjoint", cg.error());
        }
      }
    }
  }
  const double scale = std::max(sys.b.norm(), std::numeric_limits<double>::min());
  const double residual = (sys.a * u - sys.b).norm() / scale;
  if (!(residual <= kResidualLimit)) throw SolverFailure("state solve inaccurate", residual);
  return u;
}

Vector DiffusionModel::full_field(const Vector& interior) const {
  Vector u = boundary_values_;
  for (std::size_t k = 0; k < interior_nodes_.size(); ++k) {
    u(interior_nodes_[k]) = interior(static_cast<Index>(k));
  }
  return u;
}

Vector DiffusionModel::solve(const Vector& x, Diagnostics* diagnostics) const {
  return full_field(solve_interior(assemble_system(x, diagnostics), nullptr, nullptr));
}

Vector DiffusionModel::eval(const Vector& x) const { return output_ * solve(x); }

Matrix DiffusionModel::jacobian(const Vector& x) const { return adjoint_jacobian(x); }

Matrix DiffusionModel::adjoint_jacobian(const Vector& x) const {
  const AssembledSystem sys = assemble_system(x);
  const Matrix rhs = output_interior_.transpose();
  Matrix lambda_interior;
  const Vector u = full_field(solve_interior(sys, &rhs, &lambda_interior));

  // Adjoint states extended by zero to boundary nodes: node_count x n.
  Matrix lambda = Matrix::Zero(mesh_.node_count(), output_dim());
  for (std::size_t k = 0; k < interior_nodes_.size(); ++k) {
    lambda.row(interior_nodes_[k]) = lambda_interior.row(static_cast<Index>(k));
  }

  Matrix jac(output_dim(), input_dim());
  const Eigen::Matrix4d& k_ref = q1_stiffness();
  for (Index c = 0; c < input_dim(); ++c) {
    if (std::abs(x(c)) > kLogDiffusivityLimit) {
      jac.col(c).setZero();
      continue;
    }
    const auto nodes = mesh_.cell_nodes(c);
    Eigen::Vector4d u_local;
    for (int a = 0; a < 4; ++a) u_local(a) = u(nodes[a]);
    const Eigen::Vector4d flux = k_ref * u_local;
    Vector col = Vector::Zero(output_dim());
    for (int a = 0; a < 4; ++a) col += flux(a) * lambda.row(nodes[a]).transpose();
    jac.col(c) = -sys.kappa(c) * col;
  }
  return jac;
}

SpdMatrix build_field_covariance(const Mesh2D& mesh, double lengthscale, Diagnostics* diagnostics) {
  double nugget = 1e-10;
  for (;;) {
    SpdMatrix cov = squared_exponential_covariance(mesh.cell_centers(), lengthscale, nugget);
    try {
      cov.cholesky();
      return cov;
    } catch (const NotPositiveDefinite&) {
      if (nugget * 10.0 > 1e-6 * (1.0 + 1e-9)) throw;
      nugget *= 10.0;
      warn(diagnostics, "covariance-nugget-raised",
           "squared-exponential covariance not numerically SPD; nugget raised to " +
               format_double(nugget));
    }
  }
}

void mode_field_export(std::ostream& out, const Mesh2D& mesh, const Vector& v) {
  if (v.size() != mesh.cell_count()) {
    throw Error(ErrorCode::DimensionMismatch, "mode vector must have one entry per cell");
  }
  out << "cell_center_x,cell_center_y,value\n";
  for (Index c = 0; c < mesh.cell_count(); ++c) {
    out << format_double(mesh.cell_centers()(c, 0)) << ',' << format_double(mesh.cell_centers()(c, 1))
        << ',' << format_double(v(c)) << '\n';
  }
}

}  // namespace ridge::pde
