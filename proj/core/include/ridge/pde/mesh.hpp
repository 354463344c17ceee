#pragma once

#include "ridge/linalg.hpp"

#include <array>
#include <vector>

namespace ridge::pde {

/// Regular g x g grid of square cells on [0,1]^2.
///
/// Node (i, j) sits at (i/g, j/g) and has index j (g+1) + i. Cell (i, j)
/// spans [i/g, (i+1)/g] x [j/g, (j+1)/g] and has index j g + i; its nodes
/// are listed counter-clockwise starting at the lower-left corner.
class Mesh2D {
 public:
  explicit Mesh2D(Index cells_per_side);

  Index cells_per_side() const noexcept { return g_; }
  Index node_count() const noexcept { return (g_ + 1) * (g_ + 1); }
  Index cell_count() const noexcept { return g_ * g_; }
  double spacing() const noexcept { return 1.0 / static_cast<double>(g_); }
  double cell_area() const noexcept { return spacing() * spacing(); }

  Index node_index(Index i, Index j) const noexcept { return j * (g_ + 1) + i; }
  Index cell_index(Index i, Index j) const noexcept { return j * g_ + i; }

  /// node_count x 2 coordinates.
  const Matrix& nodes() const noexcept { return nodes_; }
  /// cell_count x 2 centres s_i.
  const Matrix& cell_centers() const noexcept { return centers_; }
  const std::vector<bool>& boundary_mask() const noexcept { return boundary_; }
  std::array<Index, 4> cell_nodes(Index cell) const noexcept;

  /// Index of the cell mirrored across the diagonal s1 = s2.
  Index reflected_cell(Index cell) const noexcept;

 private:
  Index g_;
  Matrix nodes_;
  Matrix centers_;
  std::vector<bool> boundary_;
};

/// Q1 stiffness of a square cell for unit diffusivity (independent of size in 2D).
const Eigen::Matrix4d& q1_stiffness();
/// Q1 mass matrix of a square cell of side h.
Eigen::Matrix4d q1_mass(double h);

}  // namespace ridge::pde
