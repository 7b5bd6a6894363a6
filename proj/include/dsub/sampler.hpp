#pragma once

#include "dsub/data.hpp"
#include "dsub/gmm.hpp"
#include "dsub/weight_tree.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace dsub {

/// Unnormalized target density values g(x_i), one per data row. The uniform
/// target is g == 1 and needs no storage.
class TargetSpec {
 public:
  static TargetSpec uniform() { return TargetSpec{}; }
  /// Throws unless every value is finite and >= 0 with at least one > 0.
  static TargetSpec per_point(Vector values);

  bool is_uniform() const { return !values_.has_value(); }
  double at(Index i) const { return values_ ? (*values_)(i) : 1.0; }
  const std::optional<Vector>& values() const { return values_; }

 private:
  std::optional<Vector> values_;
};

struct SamplerConfig {
  Index components = 32;  // GMM components for the initial fit
  int niter = 10;         // EM sweeps for the initial fit; updates use one
  int updates = 10;       // U: refit after every max(100, floor(n / U)) draws
  std::uint64_t seed = 0;
};

struct SubsampleResult {
  std::vector<Index> indices;  // 0-based rows in selection order
  std::uint64_t seed = 0;
  std::vector<Index> update_checkpoints;  // selection counts at which density was refit
  std::optional<double> sigma_p;
  SamplerConfig config;
  double density_seconds = 0.0;  // initial fit + updates
  double total_seconds = 0.0;
};

/// Source of density estimates for the sampler. The GMM estimator is the
/// default; tests and callers that know the density plug in their own.
class DensityEstimator {
 public:
  virtual ~DensityEstimator() = default;
  /// Density at every row, all > 0.
  virtual Vector initial(Rng& rng) = 0;
  /// Density at the listed rows only, re-estimated from those rows.
  virtual Vector update(std::span<const Index> remaining) = 0;
  virtual std::optional<double> perturbation_scale() const { return std::nullopt; }
};

/// Standardize, perturb, fit a diagonal GMM; refits warm-start on the
/// perturbed rows that have not been selected yet.
class GmmDensityEstimator final : public DensityEstimator {
 public:
  GmmDensityEstimator(const Dataset& data, Index components, int niter);

  Vector initial(Rng& rng) override;
  Vector update(std::span<const Index> remaining) override;
  std::optional<double> perturbation_scale() const override { return sigma_p_; }

  const GmmModel<double>& model() const { return model_; }
  const Matrix& perturbed_points() const { return perturbed_; }
  /// Time spent in EM fits, refits and density evaluation.
  double fit_seconds() const { return fit_seconds_; }

 private:
  const Dataset& data_;
  Index components_;
  int niter_;
  std::optional<double> sigma_p_;
  Matrix perturbed_;
  GmmModel<double> model_;
  double fit_seconds_ = 0.0;
};

/// Known per-row density values; updates return the stored values.
class FixedDensity final : public DensityEstimator {
 public:
  explicit FixedDensity(Vector values);
  Vector initial(Rng&) override { return values_; }
  Vector update(std::span<const Index> remaining) override;

 private:
  Vector values_;
};

/// w_i = g(x_i) / f(x_i). Throws on a nonpositive density.
Vector selection_weights(const Vector& density, const TargetSpec& target);

/// Draws between density refits: max(100, floor(n / U)).
Index update_interval(Index n, int updates);

/// Called before each draw with the 1-based draw number and the live tree.
using StepObserver = std::function<void(Index step, const WeightTree& tree)>;

/// Sequential inverse-density sampling without replacement with periodic
/// density refits on the rows not yet chosen. Deterministic in cfg.seed.
SubsampleResult ds_select(const Dataset& data, Index n, const TargetSpec& target,
                          const SamplerConfig& cfg);
SubsampleResult ds_select(const Dataset& data, Index n, const TargetSpec& target,
                          const SamplerConfig& cfg, DensityEstimator& density,
                          const StepObserver& observer = {});

/// n independent draws from the initial inverse-density weights; indices
/// may repeat and n may exceed N.
SubsampleResult ds_wr_select(const Dataset& data, Index n, const TargetSpec& target,
                             const SamplerConfig& cfg);
SubsampleResult ds_wr_select(const Dataset& data, Index n, const TargetSpec& target,
                             const SamplerConfig& cfg, DensityEstimator& density);

}  // namespace dsub
