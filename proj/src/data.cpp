#include "dsub/data.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace dsub {

Dataset::Dataset(Matrix points) : points_(std::move(points)) {
  if (points_.rows() < 1 || points_.cols() < 1) {
    throw Error("dataset must have at least one row and one column");
  }
  for (Index i = 0; i < points_.rows(); ++i) {
    for (Index j = 0; j < points_.cols(); ++j) {
      if (!std::isfinite(points_(i, j))) {
        throw Error("non-finite value at row " + std::to_string(i + 1) + ", column " +
                    std::to_string(j + 1));
      }
    }
  }
}

Matrix StandardizedDataset::invert() const {
  Matrix out = points;
  for (Index j = 0; j < out.cols(); ++j) {
    out.col(j) = (out.col(j).array() * range(j) + min(j)).matrix();
  }
  return out;
}

StandardizedDataset standardize(const Dataset& data) {
  const Matrix& x = data.points();
  StandardizedDataset out;
  out.min = x.colwise().minCoeff().transpose();
  const Vector max = x.colwise().maxCoeff().transpose();
  out.range = max - out.min;
  out.points.resize(x.rows(), x.cols());
  for (Index j = 0; j < x.cols(); ++j) {
    if (out.range(j) > 0.0) {
      out.points.col(j) = ((x.col(j).array() - out.min(j)) / out.range(j)).matrix();
      out.points.col(j) = out.points.col(j).cwiseMax(0.0).cwiseMin(1.0);
    } else {
      out.points.col(j).setConstant(0.5);
      out.range(j) = 1.0;
      out.min(j) -= 0.5;
    }
  }
  return out;
}

double min_pairwise_distance(const Matrix& points) {
  double best = std::numeric_limits<double>::infinity();
  for (Index a = 0; a < points.rows(); ++a) {
    for (Index b = a + 1; b < points.rows(); ++b) {
      best = std::min(best, (points.row(a) - points.row(b)).squaredNorm());
    }
  }
  return std::sqrt(best);
}

namespace {

Matrix unique_rows(const Matrix& points) {
  std::vector<Index> order(static_cast<std::size_t>(points.rows()));
  std::iota(order.begin(), order.end(), Index{0});
  auto less = [&](Index a, Index b) {
    for (Index j = 0; j < points.cols(); ++j) {
      if (points(a, j) != points(b, j)) return points(a, j) < points(b, j);
    }
    return false;
  };
  auto equal = [&](Index a, Index b) { return !less(a, b) && !less(b, a); };
  std::sort(order.begin(), order.end(), less);
  order.erase(std::unique(order.begin(), order.end(), equal), order.end());
  Matrix out(static_cast<Index>(order.size()), points.cols());
  for (std::size_t r = 0; r < order.size(); ++r) out.row(static_cast<Index>(r)) = points.row(order[r]);
  return out;
}

}  // namespace

double perturbation_scale(const StandardizedDataset& data, Rng& rng) {
  const Index n = data.points.rows();
  if (n < 2) throw Error("perturbation scale needs at least two rows");
  Index subset = std::min<Index>(2000, n / 4);
  if (subset < 2) subset = n;

  std::vector<Index> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), Index{0});
  constexpr int kMaxAttempts = 100;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    // partial Fisher-Yates: first `subset` entries are a uniform draw without replacement
    for (Index i = 0; i < subset; ++i) {
      std::uniform_int_distribution<Index> pick(i, n - 1);
      std::swap(all[static_cast<std::size_t>(i)], all[static_cast<std::size_t>(pick(rng))]);
    }
    Matrix chosen(subset, data.points.cols());
    for (Index i = 0; i < subset; ++i) chosen.row(i) = data.points.row(all[static_cast<std::size_t>(i)]);
    const Matrix unique = unique_rows(chosen);
    if (unique.rows() > 1) return min_pairwise_distance(unique) / 8.0;
  }
  throw Error("degenerate dataset: no two distinct points found after 100 attempts");
}

PerturbedDataset perturb(const StandardizedDataset& data, double sigma_p, Rng& rng) {
  if (!(sigma_p > 0.0)) throw Error("sigma_p must be positive");
  std::normal_distribution<double> normal(0.0, 1.0);
  PerturbedDataset out{data.points, sigma_p};
  // row-major fill order so the noise for point i does not depend on q's layout
  for (Index i = 0; i < out.points.rows(); ++i) {
    for (Index j = 0; j < out.points.cols(); ++j) out.points(i, j) += sigma_p * normal(rng);
  }
  return out;
}

}  // namespace dsub
