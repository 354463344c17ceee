#include "ridge/pde/mesh.hpp"

#include "ridge/error.hpp"

namespace ridge::pde {

Mesh2D::Mesh2D(Index cells_per_side) : g_(cells_per_side) {
  if (g_ < 1) throw Error(ErrorCode::InvalidArgument, "mesh needs at least one cell per side");
  const double h = spacing();
  nodes_.resize(node_count(), 2);
  boundary_.assign(static_cast<std::size_t>(node_count()), false);
  for (Index j = 0; j <= g_; ++j) {
    for (Index i = 0; i <= g_; ++i) {
      const Index k = node_index(i, j);
      nodes_(k, 0) = static_cast<double>(i) * h;
      nodes_(k, 1) = static_cast<double>(j) * h;
      boundary_[static_cast<std::size_t>(k)] = i == 0 || j == 0 || i == g_ || j == g_;
    }
  }
  centers_.resize(cell_count(), 2);
  for (Index j = 0; j < g_; ++j) {
    for (Index i = 0; i < g_; ++i) {
      const Index c = cell_index(i, j);
      centers_(c, 0) = (static_cast<double>(i) + 0.5) * h;
      centers_(c, 1) = (static_cast<double>(j) + 0.5) * h;
    }
  }
}

std::array<Index, 4> Mesh2D::cell_nodes(Index cell) const noexcept {
  const Index i = cell % g_;
  const Index j = cell / g_;
  return {node_index(i, j), node_index(i + 1, j), node_index(i + 1, j + 1), node_index(i, j + 1)};
}

Index Mesh2D::reflected_cell(Index cell) const noexcept {
  return cell_index(cell / g_, cell % g_);
}

const Eigen::Matrix4d& q1_stiffness() {
  static const Eigen::Matrix4d k = [] {
    Eigen::Matrix4d m;
    m << 4, -1, -2, -1,
        -1, 4, -1, -2,
        -2, -1, 4, -1,
        -1, -2, -1, 4;
    return Eigen::Matrix4d(m / 6.0);
  }();
  return k;
}

Eigen::Matrix4d q1_mass(double h) {
  Eigen::Matrix4d m;
  m << 4, 2, 1, 2,
       2, 4, 2, 1,
       1, 2, 4, 2,
       2, 1, 2, 4;
  return m * (h * h / 36.0);
}

}  // namespace ridge::pde
