#include "dsub/sampler.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace dsub {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Matrix gather_rows(const Matrix& points, std::span<const Index> rows) {
  Matrix out(static_cast<Index>(rows.size()), points.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Index>(r)) = points.row(rows[r]);
  return out;
}

void check_target(const TargetSpec& target, Index n_rows) {
  if (!target.is_uniform() && target.values()->size() != n_rows) {
    throw Error("target has " + std::to_string(target.values()->size()) + " values for " +
                std::to_string(n_rows) + " rows");
  }
}

double weight_for(double density, double target_value, Index row) {
  if (!(density > 0.0) || !std::isfinite(density)) {
    throw Error("nonpositive density estimate at row " + std::to_string(row));
  }
  return target_value / density;
}

}  // namespace

TargetSpec TargetSpec::per_point(Vector values) {
  bool any_positive = false;
  for (Index i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values(i)) || values(i) < 0.0) {
      throw Error("target value at row " + std::to_string(i) + " is negative or not finite");
    }
    any_positive = any_positive || values(i) > 0.0;
  }
  if (!any_positive) throw Error("target values are all zero");
  TargetSpec spec;
  spec.values_ = std::move(values);
  return spec;
}

GmmDensityEstimator::GmmDensityEstimator(const Dataset& data, Index components, int niter)
    : data_(data), components_(components), niter_(niter) {
  if (components < 1) throw Error("component count must be >= 1");
  if (niter < 1) throw Error("niter must be >= 1");
}

Vector GmmDensityEstimator::initial(Rng& rng) {
  const StandardizedDataset standardized = standardize(data_);
  sigma_p_ = dsub::perturbation_scale(standardized, rng);
  perturbed_ = perturb(standardized, *sigma_p_, rng).points;
  const Index m = std::min(components_, perturbed_.rows());
  const auto t = Clock::now();
  model_ = gmm_fit(perturbed_, m, niter_, rng);
  Vector f = gmm_density(model_, perturbed_);
  fit_seconds_ += seconds_since(t);
  return f;
}

Vector GmmDensityEstimator::update(std::span<const Index> remaining) {
  const Matrix rows = gather_rows(perturbed_, remaining);
  const auto t = Clock::now();
  model_ = gmm_update(model_, rows);
  Vector f = gmm_density(model_, rows);
  fit_seconds_ += seconds_since(t);
  return f;
}

FixedDensity::FixedDensity(Vector values) : values_(std::move(values)) {
  for (Index i = 0; i < values_.size(); ++i) weight_for(values_(i), 1.0, i);
}

Vector FixedDensity::update(std::span<const Index> remaining) {
  Vector out(static_cast<Index>(remaining.size()));
  for (std::size_t r = 0; r < remaining.size(); ++r) out(static_cast<Index>(r)) = values_(remaining[r]);
  return out;
}

Vector selection_weights(const Vector& density, const TargetSpec& target) {
  check_target(target, density.size());
  Vector w(density.size());
  for (Index i = 0; i < density.size(); ++i) w(i) = weight_for(density(i), target.at(i), i);
  return w;
}

Index update_interval(Index n, int updates) {
  if (updates < 1) throw Error("update count U must be >= 1");
  return std::max<Index>(100, n / updates);
}

SubsampleResult ds_select(const Dataset& data, Index n, const TargetSpec& target,
                          const SamplerConfig& cfg) {
  GmmDensityEstimator density(data, cfg.components, cfg.niter);
  return ds_select(data, n, target, cfg, density);
}

SubsampleResult ds_select(const Dataset& data, Index n, const TargetSpec& target,
                          const SamplerConfig& cfg, DensityEstimator& density,
                          const StepObserver& observer) {
  const auto start = Clock::now();
  const Index rows = data.rows();
  if (n < 0) throw Error("subsample size must be nonnegative");
  if (n > rows) {
    throw Error("subsample size " + std::to_string(n) + " exceeds dataset size " +
                std::to_string(rows));
  }
  check_target(target, rows);

  SubsampleResult result;
  result.seed = cfg.seed;
  result.config = cfg;
  if (n == 0) return result;

  Rng rng = make_rng(cfg.seed);
  auto t = Clock::now();
  const Vector f = density.initial(rng);
  result.density_seconds += seconds_since(t);
  result.sigma_p = density.perturbation_scale();
  if (f.size() != rows) throw Error("density estimator returned the wrong number of values");

  std::vector<double> weights(static_cast<std::size_t>(rows));
  for (Index i = 0; i < rows; ++i) weights[static_cast<std::size_t>(i)] = weight_for(f(i), target.at(i), i);
  WeightTree tree(weights);

  const Index interval = update_interval(n, cfg.updates);
  const Index last_checkpoint = (n / interval) * interval;
  std::vector<bool> selected(static_cast<std::size_t>(rows), false);
  std::vector<Index> remaining;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  result.indices.reserve(static_cast<std::size_t>(n));

  for (Index k = 1; k <= n; ++k) {
    const Index done = k - 1;
    if (done > 0 && done % interval == 0 && done <= last_checkpoint) {
      remaining.clear();
      for (Index i = 0; i < rows; ++i) {
        if (!selected[static_cast<std::size_t>(i)]) remaining.push_back(i);
      }
      t = Clock::now();
      const Vector f_remaining = density.update(remaining);
      result.density_seconds += seconds_since(t);
      if (f_remaining.size() != static_cast<Index>(remaining.size())) {
        throw Error("density update returned the wrong number of values");
      }
      std::fill(weights.begin(), weights.end(), 0.0);
      for (std::size_t r = 0; r < remaining.size(); ++r) {
        const Index i = remaining[r];
        weights[static_cast<std::size_t>(i)] = weight_for(f_remaining(static_cast<Index>(r)), target.at(i), i);
      }
      tree.rebuild(weights);
      result.update_checkpoints.push_back(done);
    }
    if (!(tree.total() > 0.0)) {
      throw Error("no remaining rows with positive weight after " + std::to_string(done) +
                  " selections");
    }
    if (observer) observer(k, tree);
    const Index pick = tree.draw(unit(rng));
    tree.zero(pick);
    selected[static_cast<std::size_t>(pick)] = true;
    result.indices.push_back(pick);
  }
  result.total_seconds = seconds_since(start);
  return result;
}

SubsampleResult ds_wr_select(const Dataset& data, Index n, const TargetSpec& target,
                             const SamplerConfig& cfg) {
  if (data.rows() == 1) {
    FixedDensity single(Vector::Ones(1));
    return ds_wr_select(data, n, target, cfg, single);
  }
  GmmDensityEstimator density(data, cfg.components, cfg.niter);
  return ds_wr_select(data, n, target, cfg, density);
}

SubsampleResult ds_wr_select(const Dataset& data, Index n, const TargetSpec& target,
                             const SamplerConfig& cfg, DensityEstimator& density) {
  const auto start = Clock::now();
  if (n < 0) throw Error("subsample size must be nonnegative");
  check_target(target, data.rows());
  SubsampleResult result;
  result.seed = cfg.seed;
  result.config = cfg;
  if (n == 0) return result;

  Rng rng = make_rng(cfg.seed);
  auto t = Clock::now();
  const Vector f = density.initial(rng);
  result.density_seconds = seconds_since(t);
  result.sigma_p = density.perturbation_scale();
  if (f.size() != data.rows()) throw Error("density estimator returned the wrong number of values");

  const Vector w = selection_weights(f, target);
  const WeightTree tree(std::span<const double>(w.data(), static_cast<std::size_t>(w.size())));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  result.indices.reserve(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) result.indices.push_back(tree.draw(unit(rng)));
  result.total_seconds = seconds_since(start);
  return result;
}

}  // namespace dsub
