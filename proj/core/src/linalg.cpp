#include "ridge/linalg.hpp"

#include "ridge/error.hpp"
#include "ridge/format.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace ridge {

namespace {

constexpr int kMaxJacobiSweeps = 100;
constexpr double kJacobiTolerance = 1e-12;
constexpr double kCholeskyPivotTolerance = 1e-14;
constexpr double kNegativeEigenvalueTolerance = 1e-10;

void require_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + " must be square, got " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()));
  }
}

}  // namespace

SpdMatrix::SpdMatrix() : SpdMatrix(Matrix(0, 0)) {}

SpdMatrix::SpdMatrix(const Matrix& entries) : cache_(std::make_shared<Cache>()) {
  require_square(entries, "SpdMatrix");
  entries_ = 0.5 * (entries + entries.transpose());
}

SpdMatrix SpdMatrix::identity(Index dim) { return SpdMatrix(Matrix::Identity(dim, dim)); }

SpdMatrix SpdMatrix::diagonal(const Vector& diag) { return SpdMatrix(Matrix(diag.asDiagonal())); }

const Matrix& SpdMatrix::cholesky() const {
  std::call_once(cache_->once, [this] { cache_->chol = ridge::cholesky(entries_); });
  return *cache_->chol;
}

bool SpdMatrix::has_cholesky() const { return cache_->chol.has_value(); }

Matrix SpdMatrix::solve(const Matrix& rhs) const {
  if (rhs.rows() != dim()) {
    throw Error(ErrorCode::DimensionMismatch, "SpdMatrix::solve: right-hand side has wrong size");
  }
  const Matrix& l = cholesky();
  Matrix y = l.triangularView<Eigen::Lower>().solve(rhs);
  return l.transpose().triangularView<Eigen::Upper>().solve(y);
}

Vector SpdMatrix::solve(const Vector& rhs) const { return solve(Matrix(rhs)).col(0); }

bool SpdMatrix::is_diagonal(double tol) const {
  for (Index j = 0; j < dim(); ++j) {
    for (Index i = 0; i < dim(); ++i) {
      if (i != j && std::abs(entries_(i, j)) > tol) return false;
    }
  }
  return true;
}

Matrix cholesky(const Matrix& a) {
  require_square(a, "cholesky input");
  const Index n = a.rows();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "cholesky of an empty matrix");
  const double max_diag = a.diagonal().maxCoeff();
  const double threshold = static_cast<double>(n) * kCholeskyPivotTolerance * max_diag;

  Matrix l = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    const double pivot = a(j, j) - l.row(j).head(j).squaredNorm();
    if (!(pivot > threshold)) throw NotPositiveDefinite(j);
    const double ljj = std::sqrt(pivot);
    l(j, j) = ljj;
    for (Index i = j + 1; i < n; ++i) {
      l(i, j) = (a(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / ljj;
    }
  }
  return l;
}

const Matrix& cholesky(const SpdMatrix& a) { return a.cholesky(); }

SymmetricEigen sym_eig(const Matrix& input) {
  require_square(input, "sym_eig input");
  const Index n = input.rows();
  Matrix a = 0.5 * (input + input.transpose());
  Matrix v = Matrix::Identity(n, n);

  const double norm = a.norm();
  const double tol = kJacobiTolerance * norm;

  auto off_norm = [&a, n] {
    double sum = 0.0;
    for (Index q = 1; q < n; ++q) {
      for (Index p = 0; p < q; ++p) sum += a(p, q) * a(p, q);
    }
    return std::sqrt(2.0 * sum);
  };

  bool converged = norm == 0.0 || off_norm() < tol;
  for (int sweep = 0; !converged && sweep < kMaxJacobiSweeps; ++sweep) {
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    converged = off_norm() < tol;
  }
  if (!converged) throw NoConvergence(kMaxJacobiSweeps);

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&a](Index i, Index j) { return a(i, i) > a(j, j); });

  SymmetricEigen result{Vector(n), Matrix(n, n)};
  for (Index k = 0; k < n; ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    result.values(k) = a(src, src);
    result.vectors.col(k) = v.col(src);
  }
  return result;
}

GeneralizedEigenPairs generalized_eig(const SpdMatrix& h, const SpdMatrix& sigma) {
  if (h.dim() != sigma.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "generalized_eig: H is " + std::to_string(h.dim()) + "x" +
                    std::to_string(h.dim()) + " but Sigma is " + std::to_string(sigma.dim()) +
                    "x" + std::to_string(sigma.dim()));
  }
  const Matrix& l = sigma.cholesky();
  const Matrix reduced = l.transpose() * h.entries() * l;
  SymmetricEigen eig = sym_eig(reduced);

  const Index n = h.dim();
  const double lambda_max = n > 0 ? std::max(eig.values(0), 0.0) : 0.0;
  const double tol = kNegativeEigenvalueTolerance * lambda_max;
  for (Index i = 0; i < n; ++i) {
    double& lambda = eig.values(i);
    if (lambda < 0.0) {
      if (lambda >= -tol) {
        lambda = 0.0;
      } else {
        throw Error(ErrorCode::NotPositiveSemidefinite,
                    "generalized eigenvalue " + format_double(lambda) + " at index " +
                        std::to_string(i) + " is below the clamp threshold");
      }
    }
  }

  GeneralizedEigenPairs out;
  out.values = std::move(eig.values);
  out.vectors = l * eig.vectors;
  out.whitened_vectors = std::move(eig.vectors);
  return out;
}

double relative_frobenius_error(const Matrix& approx, const Matrix& reference) {
  const double ref = reference.norm();
  const double diff = (approx - reference).norm();
  return ref > 0.0 ? diff / ref : diff;
}

void write_matrix_text(std::ostream& out, const Matrix& m) {
  if (m.rows() == m.cols()) {
    out << m.rows() << '\n';
  } else {
    out << m.rows() << ' ' << m.cols() << '\n';
  }
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ' ';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

Matrix read_matrix_text(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw Error(ErrorCode::ParseError, "matrix text: missing header");
  std::istringstream hs(header);
  long long rows = -1;
  long long cols = -1;
  hs >> rows;
  if (!(hs >> cols)) cols = rows;
  if (rows < 0 || cols < 0) throw Error(ErrorCode::ParseError, "matrix text: bad header '" + header + "'");

  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      std::string token;
      if (!(in >> token)) {
        throw Error(ErrorCode::ParseError, "matrix text: truncated at row " + std::to_string(i));
      }
      m(i, j) = parse_double(token);
    }
  }
  return m;
}

}  // namespace ridge
