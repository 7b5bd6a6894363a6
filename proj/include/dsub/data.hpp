#pragma once

#include "dsub/types.hpp"

namespace dsub {

/// An N x q table of finite reals, one observation per row.
class Dataset {
 public:
  /// Throws dsub::Error naming the first non-finite cell, or on an empty table.
  explicit Dataset(Matrix points);

  const Matrix& points() const { return points_; }
  Index rows() const { return points_.rows(); }
  Index cols() const { return points_.cols(); }

 private:
  Matrix points_;
};

/// Min-max scaled copy of a dataset together with the affine map back.
struct StandardizedDataset {
  Matrix points;
  // original = points * range + min, per column. Constant columns record
  // range 1 and min shifted by -0.5 so the map stays invertible.
  Vector min;
  Vector range;

  Matrix invert() const;
};

struct PerturbedDataset {
  Matrix points;
  double sigma_p = 0.0;
};

/// Scales every column into [0,1]. A constant column maps to 0.5.
StandardizedDataset standardize(const Dataset& data);

/// One eighth of the smallest pairwise distance among the unique points of a
/// random subset of min(2000, floor(N/4)) rows (all rows when that is < 2).
/// Throws after 100 draws that never contain two distinct points.
double perturbation_scale(const StandardizedDataset& data, Rng& rng);

/// Adds sigma_p * Z, Z standard normal, to every coordinate.
PerturbedDataset perturb(const StandardizedDataset& data, double sigma_p, Rng& rng);

/// Smallest Euclidean distance between two rows of `points`, brute force.
double min_pairwise_distance(const Matrix& points);

}  // namespace dsub
