#include "ridge/model.hpp"

#include "ridge/error.hpp"
#include "ridge/index_group.hpp"

#include <algorithm>
#include <cmath>

namespace ridge {

double squared_norm(const SpdMatrix& metric, const Vector& v) {
  return v.dot(metric.entries() * v);
}

Matrix finite_diff_jacobian(const VectorValuedModel& model, const Vector& x, double step) {
  if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "finite difference step must be > 0");
  const Index d = model.input_dim();
  if (x.size() != d) throw Error(ErrorCode::DimensionMismatch, "finite_diff_jacobian: bad x");
  Matrix jac(model.output_dim(), d);
  Vector probe = x;
  for (Index i = 0; i < d; ++i) {
    probe(i) = x(i) + step;
    const Vector plus = model.eval(probe);
    probe(i) = x(i) - step;
    const Vector minus = model.eval(probe);
    probe(i) = x(i);
    jac.col(i) = (plus - minus) / (2.0 * step);
  }
  return jac;
}

double default_fd_step(const Vector& x) {
  return 1e-5 * (1.0 + (x.size() > 0 ? x.cwiseAbs().maxCoeff() : 0.0));
}

IndexGroup::IndexGroup(std::vector<Index> indices, Index dim) : indices_(std::move(indices)), dim_(dim) {
  std::sort(indices_.begin(), indices_.end());
  indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
  for (Index i : indices_) {
    if (i < 0 || i >= dim_) {
      throw Error(ErrorCode::IndexOutOfRange,
                  "index " + std::to_string(i) + " outside [0, " + std::to_string(dim_) + ")");
    }
  }
}

IndexGroup IndexGroup::all(Index dim) {
  std::vector<Index> idx(static_cast<std::size_t>(dim));
  for (Index i = 0; i < dim; ++i) idx[static_cast<std::size_t>(i)] = i;
  return IndexGroup(std::move(idx), dim);
}

bool IndexGroup::contains(Index i) const {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

IndexGroup IndexGroup::complement() const {
  std::vector<Index> rest;
  for (Index i = 0; i < dim_; ++i) {
    if (!contains(i)) rest.push_back(i);
  }
  return IndexGroup(std::move(rest), dim_);
}

std::string IndexGroup::label() const {
  std::string out;
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    if (k > 0) out += ';';
    out += std::to_string(indices_[k]);
  }
  return out;
}

}  // namespace ridge
