#pragma once

#include "dsub/data.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace dsub {

enum class Family { normal, gamma, exponential, geometric, mgm };

/// One of the five benchmark distributions. Coordinates are independent
/// except for the two-cluster Gaussian mixture (mgm).
struct DistributionSpec {
  Family family = Family::normal;
  Index dim = 2;
  double geometric_p = 0.5;
  // mgm: clusters at 0 and shift * ((-1)^i)_i with common covariance
  // sigma2 * I + alpha * a a^T, a_i = 0.2 (i - 2) (-1)^i, i = 1..q
  double mgm_shift = 5.0;
  double mgm_sigma2 = 4.0;
  double mgm_alpha = 1.0;

  bool discrete() const { return family == Family::geometric; }
  std::string name() const;
};

Family parse_family(std::string_view name);
std::string family_name(Family family);

/// The benchmark settings for a family at dimension q (geometric uses
/// p = 0.5 at q = 2 and p = 0.9 otherwise).
DistributionSpec benchmark_spec(Family family, Index dim);

/// N i.i.d. rows. Throws on invalid parameters.
Matrix generate(const DistributionSpec& spec, Index rows, Rng& rng);

/// Exact density (p.m.f. for geometric); zero outside the support.
/// make_true_density precomputes what it can and is the one to use in loops.
DensityFunction make_true_density(const DistributionSpec& spec);
double true_density(const DistributionSpec& spec, const Eigen::Ref<const Vector>& x);
Vector true_density_rows(const DistributionSpec& spec, const Matrix& points);

/// `copies` stacked copies of `base`, block after block.
Matrix replicate_rows(const Matrix& base, Index copies);
Dataset replicate_dataset(const Dataset& base, Index copies);

/// Mixture parameters for mgm in dimension q.
struct MgmParameters {
  Vector mean1;
  Vector mean2;
  Matrix covariance;
};
MgmParameters mgm_parameters(const DistributionSpec& spec);

}  // namespace dsub
