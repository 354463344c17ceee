#include "generators.hpp"
#include "ridge/error.hpp"
#include "ridge/projector.hpp"

#include <doctest.h>

using namespace ridge;
using ridge::testing::Gen;

namespace {

void check_projector_invariants(const RankRProjector& p) {
  const Matrix& m = p.matrix();
  CHECK((m * m - m).norm() < 1e-9);
  CHECK(std::abs(m.trace() - static_cast<double>(p.rank())) < 1e-8);
}

}  // namespace

TEST_SUITE("projector") {

TEST_CASE("named constructors carry their flags") {
  const RankRProjector i = RankRProjector::identity(3);
  CHECK(i.is_euclidean());
  CHECK(i.is_sigma_orthogonal());
  CHECK(i.rank() == 3);
  const RankRProjector z = RankRProjector::zero(3);
  CHECK(z.rank() == 0);
  CHECK(z.matrix().norm() == 0.0);
  CHECK((z.complement() - Matrix::Identity(3, 3)).norm() == 0.0);
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(RankRProjector(Matrix::Zero(2, 3), 0, Matrix(2, 0), true, false), Error);
  CHECK_THROWS_AS(RankRProjector(Matrix::Zero(2, 2), 3, Matrix(2, 3), true, false), Error);
  CHECK_THROWS_AS(RankRProjector(Matrix::Zero(2, 2), 1, Matrix(2, 2), true, false), Error);
}

TEST_CASE("sigma basis projectors satisfy the sigma-inverse identity") {
  Gen gen(21);
  for (int trial = 0; trial < 50; ++trial) {
    const Index d = gen.integer(2, 9);
    const Index r = gen.integer(1, d);
    const SpdMatrix sigma(gen.spd(d));
    const RankRProjector p = gen.sigma_projector(sigma, r);
    check_projector_invariants(p);
    CHECK(p.is_sigma_orthogonal());
    const Matrix precision = sigma.solve(Matrix(Matrix::Identity(d, d)));
    CHECK((p.matrix().transpose() * precision - precision * p.matrix()).norm() < 1e-8 * precision.norm());
    CHECK(satisfies_sigma_orthogonality(p, sigma));
  }
}

TEST_CASE("mark_sigma_orthogonal verifies before flagging") {
  const SpdMatrix sigma = SpdMatrix::diagonal(Eigen::Vector2d(4, 1));
  const RankRProjector e1 = RankRProjector::from_orthonormal_basis(Matrix::Identity(2, 1));
  CHECK(mark_sigma_orthogonal(e1, sigma).is_sigma_orthogonal());

  Matrix v(2, 1);
  v << 1, 1;
  const RankRProjector diagonal_line = RankRProjector::from_orthonormal_basis(v / std::sqrt(2.0));
  try {
    mark_sigma_orthogonal(diagonal_line, sigma);
    FAIL("expected NotSigmaOrthogonal");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotSigmaOrthogonal);
  }
}

TEST_CASE("sigma_orthogonalize keeps the kernel") {
  Gen gen(22);
  for (int trial = 0; trial < 30; ++trial) {
    const Index d = 6;
    const Index r = gen.integer(1, d - 1);
    const SpdMatrix sigma(gen.spd(d));
    // Oblique projector onto range(A) along ker = null(B^T).
    const Matrix a = gen.matrix(d, r);
    const Matrix b = gen.matrix(d, r);
    const Matrix p = a * (b.transpose() * a).inverse() * b.transpose();
    const RankRProjector oblique(p, r, a, false, false);
    const RankRProjector q = sigma_orthogonalize(oblique, sigma);
    check_projector_invariants(q);
    CHECK(q.is_sigma_orthogonal());
    CHECK(satisfies_sigma_orthogonality(q, sigma));
    // Same kernel: P (I - Q) = 0 and Q (I - P) = 0.
    CHECK((p * q.complement()).norm() < 1e-8 * p.norm());
    CHECK((q.matrix() * oblique.complement()).norm() < 1e-8 * q.matrix().norm());
  }
  CHECK(sigma_orthogonalize(RankRProjector::zero(3), SpdMatrix::identity(3)).rank() == 0);
  CHECK(sigma_orthogonalize(RankRProjector::identity(3), SpdMatrix::identity(3)).rank() == 3);
}

}  // TEST_SUITE
