#pragma once

#include "dsub/gmm.hpp"
#include "dsub/synth.hpp"
#include "dsub/types.hpp"

#include <span>
#include <vector>

namespace dsub {

/// (1 / (n m)) sum_i sum_j ||a_i - b_j||. Rows are summed one at a time and
/// the row totals added in row order, so the result does not depend on
/// threading or blocking.
template <typename DA, typename DB>
typename DA::Scalar mean_cross_distance(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  using Scalar = typename DA::Scalar;
  if (a.cols() != b.cols()) throw Error("energy distance: dimension mismatch");
  if (a.rows() == 0 || b.rows() == 0) throw Error("energy distance: empty sample");
  Scalar total(0);
  for (Index i = 0; i < a.rows(); ++i) total += (b.rowwise() - a.row(i)).rowwise().norm().sum();
  return total / (Scalar(a.rows()) * Scalar(b.rows()));
}

/// (1 / n^2) sum_i sum_j ||a_i - a_j||.
template <typename D>
typename D::Scalar mean_self_distance(const Eigen::MatrixBase<D>& a) {
  using Scalar = typename D::Scalar;
  if (a.rows() == 0) throw Error("energy distance: empty sample");
  Scalar total(0);
  for (Index i = 0; i + 1 < a.rows(); ++i) {
    total += (a.bottomRows(a.rows() - i - 1).rowwise() - a.row(i)).rowwise().norm().sum();
  }
  return Scalar(2) * total / (Scalar(a.rows()) * Scalar(a.rows()));
}

/// Two-sample energy distance
///   2/(n m) sum ||a_i - u_j|| - 1/n^2 sum ||a_i - a_j|| - 1/m^2 sum ||u_i - u_j||.
template <typename DA, typename DB>
typename DA::Scalar energy_distance(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& u) {
  return typename DA::Scalar(2) * mean_cross_distance(a, u) - mean_self_distance(a) - mean_self_distance(u);
}

/// A fixed reference sample with its self term computed once.
class EnergyReference {
 public:
  explicit EnergyReference(Matrix reference)
      : reference_(std::move(reference)), self_term_(mean_self_distance(reference_)) {}

  template <typename D>
  double distance(const Eigen::MatrixBase<D>& sample) const {
    return 2.0 * mean_cross_distance(sample, reference_) - mean_self_distance(sample) - self_term_;
  }

  const Matrix& points() const { return reference_; }
  double self_term() const { return self_term_; }

 private:
  Matrix reference_;
  double self_term_;
};

/// {x : f(x) >= delta} with delta chosen so that a `coverage` fraction of the
/// data lies inside. For discrete data Omega is a finite set of lattice points.
struct OmegaRegion {
  DensityFunction density;
  double delta = 0.0;
  double coverage = 0.0;
  Vector lower;  // sampling box
  Vector upper;
  double volume = 0.0;        // Lebesgue measure, or point count when discrete
  double hit_fraction = 0.0;  // share of box samples inside (1 when discrete)
  bool discrete = false;
  Matrix lattice;  // discrete only: the points of Omega, one per row

  bool contains(const Eigen::Ref<const Vector>& x) const { return density(x) >= delta; }
};

struct OmegaOptions {
  Index volume_samples = 1'000'000;
  double box_margin = 0.1;  // box = data range widened by this share per side
  bool discrete = false;
  Index max_lattice_points = 1'000'000;
};

/// Largest delta among the density values at the data with at least a
/// `coverage` share of values >= delta.
double coverage_threshold(const Vector& density_at_data, double coverage);

OmegaRegion build_omega(DensityFunction density, const Matrix& data, double coverage, Rng& rng,
                        const OmegaOptions& options = {});
OmegaRegion build_omega(const DistributionSpec& spec, const Matrix& data, double coverage, Rng& rng,
                        OmegaOptions options = {});

/// Wraps a fitted mixture as a point density.
DensityFunction density_function(GmmModel<double> model);

/// true where the row lies outside Omega (density below delta).
std::vector<bool> outside_mask(const Matrix& data, const OmegaRegion& omega);

/// Share of the data's low-density rows that were selected. Throws when no
/// data row lies outside Omega.
double low_density_ratio(std::span<const Index> selected, const Matrix& data, const OmegaRegion& omega);
double low_density_ratio(std::span<const Index> selected, const std::vector<bool>& outside);

/// m i.i.d. uniform points over Omega.
Matrix uniform_reference(const OmegaRegion& omega, Index m, Rng& rng);

/// Selected rows that fall inside Omega, in selection order.
Matrix rows_in_omega(const Matrix& data, std::span<const Index> selected, const OmegaRegion& omega);

struct DeviationPoint {
  double in_omega = 0.0;  // N * delta * |Omega|
  double total = 0.0;     // in_omega / coverage
};
DeviationPoint deviation_point(const OmegaRegion& omega, Index data_rows);

}  // namespace dsub
