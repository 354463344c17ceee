#pragma once

#include "ridge/linalg.hpp"

#include <string>
#include <vector>

namespace ridge {

/// A sorted set of zero-based coordinate indices, validated against a dimension.
class IndexGroup {
 public:
  IndexGroup() = default;
  IndexGroup(std::vector<Index> indices, Index dim);

  static IndexGroup all(Index dim);
  static IndexGroup empty(Index dim) { return IndexGroup({}, dim); }

  const std::vector<Index>& indices() const noexcept { return indices_; }
  Index dim() const noexcept { return dim_; }
  Index size() const noexcept { return static_cast<Index>(indices_.size()); }
  bool empty() const noexcept { return indices_.empty(); }
  bool contains(Index i) const;

  IndexGroup complement() const;

  /// "0;2;3" style label used in reports.
  std::string label() const;

 private:
  std::vector<Index> indices_;
  Index dim_ = 0;
};

}  // namespace ridge
