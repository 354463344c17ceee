#pragma once

// Seeded random instances for property tests.

#include "ridge/gaussian_measure.hpp"
#include "ridge/linalg.hpp"
#include "ridge/projector.hpp"

#include <random>

namespace ridge::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  Index integer(Index lo, Index hi) { return std::uniform_int_distribution<Index>(lo, hi)(engine_); }

  Matrix matrix(Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j) {
      for (Index i = 0; i < rows; ++i) m(i, j) = normal();
    }
    return m;
  }

  Vector vector(Index n) { return matrix(n, 1).col(0); }

  Matrix symmetric(Index n) {
    const Matrix a = matrix(n, n);
    return (a + a.transpose()) / 2.0;
  }

  /// Well-conditioned SPD matrix: G G^T / n + shift I.
  Matrix spd(Index n, double shift = 0.5) {
    const Matrix g = matrix(n, n);
    return g * g.transpose() / static_cast<double>(n) + shift * Matrix::Identity(n, n);
  }

  /// PSD matrix of the given rank.
  Matrix psd(Index n, Index rank) {
    const Matrix g = matrix(n, rank);
    return g * g.transpose();
  }

  GaussianMeasure measure(Index d) { return GaussianMeasure(vector(d), SpdMatrix(spd(d))); }

  /// Random rank-r projector P = V V^T Sigma^{-1} with V^T Sigma^{-1} V = I.
  RankRProjector sigma_projector(const SpdMatrix& sigma, Index r) {
    Matrix v = matrix(sigma.dim(), r);
    const Matrix gram = v.transpose() * sigma.solve(v);
    const Matrix c = cholesky(gram);
    v = c.triangularView<Eigen::Lower>().solve(v.transpose()).transpose();
    return RankRProjector::from_sigma_basis(v, sigma);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace ridge::testing
