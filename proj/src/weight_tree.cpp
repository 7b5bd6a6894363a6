#include "dsub/weight_tree.hpp"

#include <cmath>

namespace dsub {

WeightTree::WeightTree(std::span<const double> weights) { rebuild(weights); }

void WeightTree::rebuild(std::span<const double> weights) {
  size_ = static_cast<Index>(weights.size());
  leaf_base_ = 1;
  while (leaf_base_ < size_) leaf_base_ <<= 1;
  nodes_.assign(static_cast<std::size_t>(2 * leaf_base_), 0.0);
  for (Index i = 0; i < size_; ++i) {
    const double w = weights[static_cast<std::size_t>(i)];
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error("weight tree: weight " + std::to_string(i) + " is negative or not finite");
    }
    nodes_[static_cast<std::size_t>(leaf_base_ + i)] = w;
  }
  for (Index node = leaf_base_ - 1; node >= 1; --node) {
    const auto at = static_cast<std::size_t>(node);
    nodes_[at] = nodes_[2 * at] + nodes_[2 * at + 1];
  }
}

void WeightTree::set(Index i, double w) {
  if (i < 0 || i >= size_) throw Error("weight tree: index out of range");
  if (!(w >= 0.0) || !std::isfinite(w)) throw Error("weight tree: weight is negative or not finite");
  auto node = static_cast<std::size_t>(leaf_base_ + i);
  nodes_[node] = w;
  for (node /= 2; node >= 1; node /= 2) nodes_[node] = nodes_[2 * node] + nodes_[2 * node + 1];
}

Index WeightTree::draw(double u) const {
  if (!(total() > 0.0)) throw Error("weight tree: draw with zero total weight");
  double target = u * total();
  std::size_t node = 1;
  while (node < static_cast<std::size_t>(leaf_base_)) {
    const double left = nodes_[2 * node];
    const double right = nodes_[2 * node + 1];
    // rounding can leave target at or past the subtree sum; fall back to
    // whichever child still carries weight
    if ((target < left && left > 0.0) || right <= 0.0) {
      node = 2 * node;
    } else {
      target -= left;
      node = 2 * node + 1;
    }
  }
  return static_cast<Index>(node) - leaf_base_;
}

}  // namespace dsub
