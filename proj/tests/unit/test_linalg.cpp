#include "generators.hpp"
#include "ridge/error.hpp"
#include "ridge/format.hpp"
#include "ridge/linalg.hpp"
#include "ridge/projector.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

using namespace ridge;
using ridge::testing::Gen;

namespace {

Matrix m2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

// Spans agree iff the orthogonal projectors onto them agree.
double span_distance(const Matrix& a, const Matrix& b) {
  const Matrix qa = a.householderQr().householderQ() * Matrix::Identity(a.rows(), a.cols());
  const Matrix qb = b.householderQr().householderQ() * Matrix::Identity(b.rows(), b.cols());
  return (qa * qa.transpose() - qb * qb.transpose()).norm();
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("cholesky of identity is identity") {
  const Matrix l = cholesky(Matrix::Identity(3, 3));
  CHECK((l - Matrix::Identity(3, 3)).norm() == 0.0);
}

TEST_CASE("cholesky of a 2x2 SPD matrix") {
  const Matrix l = cholesky(m2(4, 2, 2, 3));
  CHECK(l(0, 0) == doctest::Approx(2.0));
  CHECK(l(0, 1) == 0.0);
  CHECK(l(1, 0) == doctest::Approx(1.0));
  CHECK(l(1, 1) == doctest::Approx(std::sqrt(2.0)));
  CHECK(relative_frobenius_error(l * l.transpose(), m2(4, 2, 2, 3)) < 1e-15);
}

TEST_CASE("cholesky rejects a rank-deficient matrix at the failing pivot") {
  try {
    cholesky(m2(1, 1, 1, 1));
    FAIL("expected NotPositiveDefinite");
  } catch (const NotPositiveDefinite& e) {
    CHECK(e.pivot() == 1);
    CHECK(e.code() == ErrorCode::NotPositiveDefinite);
  }
  CHECK_THROWS_AS(cholesky(m2(-1, 0, 0, 1)), NotPositiveDefinite);
  CHECK_THROWS_AS(cholesky(Matrix(2, 3)), Error);
}

TEST_CASE("cholesky round trip on random SPD matrices") {
  Gen gen(11);
  for (int trial = 0; trial < 60; ++trial) {
    const Index n = gen.integer(1, 12);
    const Matrix a = gen.spd(n, 0.01);
    const Matrix l = cholesky(a);
    CHECK(relative_frobenius_error(l * l.transpose(), a) < 1e-10);
    CHECK(l.isLowerTriangular());
  }
}

TEST_CASE("SpdMatrix symmetrizes and caches its factor") {
  Matrix a = m2(4, 2.5, 1.5, 3);
  const SpdMatrix s(a);
  CHECK(s.entries()(0, 1) == 2.0);
  CHECK(s.entries()(1, 0) == 2.0);
  CHECK_FALSE(s.has_cholesky());
  const Matrix& l = s.cholesky();
  CHECK(s.has_cholesky());
  CHECK(&l == &s.cholesky());
  const SpdMatrix copy = s;
  CHECK(copy.has_cholesky());
  CHECK(&copy.cholesky() == &l);
}

TEST_CASE("SpdMatrix cache is safe under concurrent first use") {
  Gen gen(5);
  const SpdMatrix s(gen.spd(30));
  std::vector<const Matrix*> seen(8);
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < seen.size(); ++t) {
      pool.emplace_back([&, t] { seen[t] = &s.cholesky(); });
    }
  }
  for (const Matrix* p : seen) CHECK(p == seen[0]);
}

TEST_CASE("SpdMatrix solve and diagonal helpers") {
  Gen gen(7);
  const Matrix a = gen.spd(5);
  const SpdMatrix s(a);
  const Vector b = gen.vector(5);
  CHECK((a * s.solve(b) - b).norm() < 1e-12);
  CHECK(SpdMatrix::diagonal(Vector::Constant(3, 2.0)).is_diagonal());
  CHECK_FALSE(s.is_diagonal());
  CHECK_THROWS_AS(s.solve(Vector(4)), Error);
}

TEST_CASE("sym_eig of a diagonal matrix sorts and permutes") {
  const Matrix a = Vector(Eigen::Vector3d(1, 5, 3)).asDiagonal();
  const SymmetricEigen e = sym_eig(a);
  CHECK(e.values(0) == 5.0);
  CHECK(e.values(1) == 3.0);
  CHECK(e.values(2) == 1.0);
  CHECK(std::abs(e.vectors(1, 0)) == 1.0);
  CHECK(std::abs(e.vectors(2, 1)) == 1.0);
  CHECK(std::abs(e.vectors(0, 2)) == 1.0);
}

TEST_CASE("sym_eig of [[2,1],[1,2]]") {
  const SymmetricEigen e = sym_eig(m2(2, 1, 1, 2));
  CHECK(e.values(0) == doctest::Approx(3.0));
  CHECK(e.values(1) == doctest::Approx(1.0));
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(e.vectors.col(0).dot(Eigen::Vector2d(s, s))) == doctest::Approx(1.0));
  CHECK(std::abs(e.vectors.col(1).dot(Eigen::Vector2d(s, -s))) == doctest::Approx(1.0));
}

TEST_CASE("sym_eig of identity and zero") {
  const SymmetricEigen e = sym_eig(Matrix::Identity(4, 4));
  CHECK((e.values - Vector::Ones(4)).norm() == 0.0);
  const SymmetricEigen z = sym_eig(Matrix::Zero(3, 3));
  CHECK(z.values.norm() == 0.0);
  CHECK((z.vectors.transpose() * z.vectors - Matrix::Identity(3, 3)).norm() == 0.0);
}

TEST_CASE("sym_eig residual and orthonormality on random symmetric matrices") {
  Gen gen(2024);
  for (Index n : {2, 5, 10}) {
    for (int trial = 0; trial < 100; ++trial) {
      const Matrix a = gen.symmetric(n);
      const SymmetricEigen e = sym_eig(a);
      const double fro = a.norm();
      for (Index i = 0; i < n; ++i) {
        CHECK((a * e.vectors.col(i) - e.values(i) * e.vectors.col(i)).norm() <= 1e-9 * fro);
        if (i > 0) CHECK(e.values(i - 1) >= e.values(i));
      }
      CHECK((e.vectors.transpose() * e.vectors - Matrix::Identity(n, n)).norm() <= 1e-10);
    }
  }
}

TEST_CASE("sym_eig degenerate spectrum: compare invariant subspaces") {
  Gen gen(3);
  const Matrix q = gen.matrix(6, 6).householderQr().householderQ();
  Vector lambda(6);
  lambda << 4, 4, 4, 1, 1, 0;
  const Matrix a = q * lambda.asDiagonal() * q.transpose();
  const SymmetricEigen e = sym_eig(a);
  CHECK(span_distance(e.vectors.leftCols(3), q.leftCols(3)) < 1e-9);
  CHECK(span_distance(e.vectors.middleCols(3, 2), q.middleCols(3, 2)) < 1e-9);
}

TEST_CASE("generalized_eig with both matrices diagonal") {
  const SpdMatrix h = SpdMatrix::diagonal(Eigen::Vector3d(3, 2, 1));
  const GeneralizedEigenPairs g = generalized_eig(h, SpdMatrix::identity(3));
  CHECK((g.values - Vector(Eigen::Vector3d(3, 2, 1))).norm() < 1e-15);
  CHECK((g.vectors.cwiseAbs() - Matrix::Identity(3, 3)).norm() < 1e-15);
}

TEST_CASE("generalized_eig with H = I and Sigma = diag(4,1)") {
  const GeneralizedEigenPairs g =
      generalized_eig(SpdMatrix::identity(2), SpdMatrix::diagonal(Eigen::Vector2d(4, 1)));
  CHECK(g.values(0) == doctest::Approx(4.0));
  CHECK(g.values(1) == doctest::Approx(1.0));
  CHECK(std::abs(g.vectors(0, 0)) == doctest::Approx(2.0));
  CHECK(g.vectors(1, 0) == doctest::Approx(0.0));
  CHECK(std::abs(g.vectors(1, 1)) == doctest::Approx(1.0));
  const double norm = g.vectors.col(0).dot(Eigen::Vector2d(0.25, 1.0).cwiseProduct(g.vectors.col(0)));
  CHECK(norm == doctest::Approx(1.0));
}

TEST_CASE("generalized_eig invariants and reconstruction on random pencils") {
  Gen gen(99);
  for (int trial = 0; trial < 40; ++trial) {
    const Index d = 6;
    const SpdMatrix h(gen.psd(d, gen.integer(1, d)));
    const SpdMatrix sigma(gen.spd(d));
    const GeneralizedEigenPairs g = generalized_eig(h, sigma);
    const Matrix precision = sigma.solve(Matrix(Matrix::Identity(d, d)));
    for (Index i = 0; i < d; ++i) {
      const Vector v = g.vectors.col(i);
      const double residual = (h.entries() * v - g.values(i) * precision * v).norm();
      CHECK(residual <= 1e-8 * (h.entries().norm() + std::abs(g.values(i)) * precision.norm()));
      CHECK(g.values(i) >= 0.0);
    }
    CHECK((g.vectors.transpose() * precision * g.vectors - Matrix::Identity(d, d)).norm() < 1e-8);
    const Matrix rebuilt = precision * g.vectors * g.values.asDiagonal() * g.vectors.transpose() * precision;
    CHECK(relative_frobenius_error(rebuilt, h.entries()) < 1e-8);
  }
}

TEST_CASE("generalized_eig with Sigma = I matches sym_eig") {
  Gen gen(17);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix h = gen.psd(7, 7);
    const GeneralizedEigenPairs g = generalized_eig(SpdMatrix(h), SpdMatrix::identity(7));
    const SymmetricEigen e = sym_eig(h);
    CHECK((g.values - e.values).norm() <= 1e-10 * std::max(1.0, e.values.norm()));
  }
}

TEST_CASE("generalized_eig errors") {
  CHECK_THROWS_AS(generalized_eig(SpdMatrix::identity(2), SpdMatrix::identity(3)), Error);
  CHECK_THROWS_AS(generalized_eig(SpdMatrix::identity(2), SpdMatrix(m2(1, 1, 1, 1))),
                  NotPositiveDefinite);
  try {
    generalized_eig(SpdMatrix(m2(1, 0, 0, -1)), SpdMatrix::identity(2));
    FAIL("expected NotPositiveSemidefinite");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotPositiveSemidefinite);
  }
}

TEST_CASE("generalized_eig clamps tiny negative eigenvalues") {
  const GeneralizedEigenPairs g =
      generalized_eig(SpdMatrix(m2(1, 0, 0, -1e-13)), SpdMatrix::identity(2));
  CHECK(g.values(1) == 0.0);
}

TEST_CASE("trace_quadratic special projectors") {
  Gen gen(4);
  const SpdMatrix h(gen.psd(5, 3));
  const SpdMatrix sigma(gen.spd(5));
  CHECK(trace_quadratic(sigma, h, RankRProjector::identity(5)) == 0.0);
  CHECK(trace_quadratic(SpdMatrix::identity(5), h, RankRProjector::zero(5)) ==
        doctest::Approx(h.entries().trace()));
  CHECK_THROWS_AS(trace_quadratic(sigma, SpdMatrix::identity(4), RankRProjector::zero(5)), Error);
}

TEST_CASE("trace_quadratic at the optimal projector equals the eigenvalue tail") {
  Gen gen(8);
  for (int trial = 0; trial < 30; ++trial) {
    const Index d = gen.integer(2, 10);
    const SpdMatrix h(gen.psd(d, d));
    const SpdMatrix sigma(gen.spd(d));
    const GeneralizedEigenPairs g = generalized_eig(h, sigma);
    for (Index r = 0; r <= d; ++r) {
      const RankRProjector p = RankRProjector::from_sigma_basis(g.vectors.leftCols(r), sigma);
      const double tail = g.values.tail(d - r).sum();
      CHECK(std::abs(trace_quadratic(sigma, h, p) - tail) <= 1e-9 * std::max(tail, g.values.sum() * 1e-6));
    }
  }
}

TEST_CASE("trace_quadratic rejects a broken projector") {
  // Sigma with a negative diagonal is not a covariance, but it exercises the guard.
  const SpdMatrix sigma(Matrix(-Matrix::Identity(2, 2)));
  try {
    trace_quadratic(sigma, SpdMatrix::identity(2), RankRProjector::zero(2));
    FAIL("expected NegativeTrace");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NegativeTrace);
  }
}

TEST_CASE("matrix text round trip") {
  Gen gen(12);
  for (const Matrix& m : {gen.matrix(4, 4), gen.matrix(3, 5), Matrix(Matrix::Zero(0, 0))}) {
    std::stringstream ss;
    write_matrix_text(ss, m);
    const Matrix back = read_matrix_text(ss);
    CHECK(back.rows() == m.rows());
    CHECK(back.cols() == m.cols());
    CHECK((back - m).norm() == 0.0);
  }
  std::stringstream header_only("2\n1 2\n3\n");
  CHECK_THROWS_AS(read_matrix_text(header_only), Error);
  std::stringstream garbage("2\n1 2\n3 x\n");
  CHECK_THROWS_AS(read_matrix_text(garbage), Error);
  std::stringstream square("2\n1 2\n3 4\n");
  CHECK(read_matrix_text(square)(1, 0) == 3.0);
}

TEST_CASE("format_double is shortest round trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-2.5e-300) == "-2.5e-300");
  Gen gen(1);
  for (int i = 0; i < 1000; ++i) {
    const double x = gen.normal() * std::pow(10.0, gen.integer(-30, 30));
    CHECK(parse_double(format_double(x)) == x);
  }
  CHECK_THROWS_AS(parse_double("1.5abc"), Error);
  CHECK_THROWS_AS(parse_double(""), Error);
}

}  // TEST_SUITE
