#pragma once

#include "dsub/types.hpp"

#include <span>
#include <vector>

namespace dsub {

/// Complete binary tree of partial sums over nonnegative leaf weights.
///
/// Every internal node is recomputed as the sum of its two children on each
/// change, so totals never drift from repeated subtraction. Draws descend
/// from the root in O(log N).
class WeightTree {
 public:
  WeightTree() = default;
  explicit WeightTree(std::span<const double> weights);

  Index size() const { return size_; }
  double total() const { return size_ == 0 ? 0.0 : nodes_[1]; }
  double weight(Index i) const { return nodes_[static_cast<std::size_t>(leaf_base_ + i)]; }

  /// Index whose cumulative interval contains u * total(), u in [0, 1).
  /// Never returns a zero-weight leaf. Throws when total() is zero.
  Index draw(double u) const;

  void set(Index i, double w);
  void zero(Index i) { set(i, 0.0); }
  void rebuild(std::span<const double> weights);

 private:
  Index size_ = 0;
  Index leaf_base_ = 1;
  std::vector<double> nodes_;
};

}  // namespace dsub
