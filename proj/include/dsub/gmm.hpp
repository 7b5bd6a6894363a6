#pragma once

// Diagonal-covariance Gaussian mixture fitted by EM.
//
// Everything here is templated on the scalar type of the point matrix, so
// float and double data both work and expressions can be passed directly:
//
//   auto model = dsub::gmm_fit(points, 32, 10, rng);
//   Eigen::VectorXd f = dsub::gmm_density(model, points);

#include "dsub/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <type_traits>
#include <vector>

namespace dsub {

inline constexpr double kGmmStdFloor = 1e-4;
inline constexpr double kGmmEmptyComponent = 1e-10;
inline constexpr double kDensityFloorRatio = 1e-12;

template <typename Scalar>
struct GmmModel {
  ColVector<Scalar> weights;  // M, sums to one
  PointMatrix<Scalar> means;  // M x q
  PointMatrix<Scalar> stds;   // M x q, each >= kGmmStdFloor
  // Lower clamp for evaluated densities, kDensityFloorRatio times the mean
  // density over the points of the last fit. Zero for hand-built models.
  Scalar density_floor = Scalar(0);

  Index components() const { return weights.size(); }
  Index dim() const { return means.cols(); }
};

namespace detail {

// log(c_k) + log f_k(x) for every row of x (N x M).
template <typename Derived, typename Scalar>
PointMatrix<Scalar> component_log_terms(const Eigen::MatrixBase<Derived>& x,
                                        const GmmModel<Scalar>& model) {
  const Index n = x.rows();
  const Index m = model.components();
  const Index q = model.dim();
  const Scalar half_log_2pi = Scalar(0.5 * std::log(2.0 * std::numbers::pi));
  PointMatrix<Scalar> out(n, m);
  for (Index k = 0; k < m; ++k) {
    const Scalar w = model.weights(k);
    if (!(w > Scalar(0))) {
      out.col(k).setConstant(-std::numeric_limits<Scalar>::infinity());
      continue;
    }
    const auto inv_std = model.stds.row(k).cwiseInverse().eval();
    const Scalar log_norm =
        std::log(w) - model.stds.row(k).array().log().sum() - Scalar(q) * half_log_2pi;
    const auto z = ((x.rowwise() - model.means.row(k)).array().rowwise() * inv_std.array()).eval();
    out.col(k) = (log_norm - Scalar(0.5) * z.square().rowwise().sum()).matrix();
  }
  return out;
}

// Row-wise log-sum-exp of an N x M matrix.
template <typename Scalar>
ColVector<Scalar> row_logsumexp(const PointMatrix<Scalar>& terms) {
  ColVector<Scalar> out(terms.rows());
  for (Index i = 0; i < terms.rows(); ++i) {
    const Scalar top = terms.row(i).maxCoeff();
    if (!std::isfinite(top)) {
      out(i) = top;
      continue;
    }
    out(i) = top + std::log((terms.row(i).array() - top).exp().sum());
  }
  return out;
}

template <typename Derived>
ColVector<typename Derived::Scalar> column_std(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const auto mean = x.colwise().mean().eval();
  const auto var = (x.rowwise() - mean).array().square().colwise().mean().eval();
  return var.sqrt().transpose().matrix().cwiseMax(Scalar(kGmmStdFloor));
}

template <typename Derived, typename Scalar>
Scalar compute_density_floor(const Eigen::MatrixBase<Derived>& x, const GmmModel<Scalar>& model) {
  const ColVector<Scalar> log_f = row_logsumexp(component_log_terms(x, model));
  const Scalar mean = log_f.array().exp().mean();
  const Scalar floor = Scalar(kDensityFloorRatio) * mean;
  return floor > Scalar(0) ? floor : std::numeric_limits<Scalar>::min();
}

}  // namespace detail

/// Total log-likelihood sum_i log f(x_i) of the rows of `x` (no positivity floor).
template <typename Derived, typename Scalar>
Scalar gmm_log_likelihood(const Eigen::MatrixBase<Derived>& x, const GmmModel<Scalar>& model) {
  return detail::row_logsumexp(detail::component_log_terms(x, model)).sum();
}

/// One EM sweep: responsibilities under `model`, then mean, std and weight
/// updates. Components whose total responsibility is below
/// kGmmEmptyComponent keep their mean and std; stds are floored at
/// kGmmStdFloor. The returned model has no density floor set.
template <typename Derived, typename Scalar>
GmmModel<Scalar> gmm_em_sweep(const Eigen::MatrixBase<Derived>& x, const GmmModel<Scalar>& model) {
  static_assert(std::is_same_v<typename Derived::Scalar, Scalar>);
  const Index n = x.rows();
  const Index m = model.components();
  PointMatrix<Scalar> resp = detail::component_log_terms(x, model);
  const ColVector<Scalar> log_f = detail::row_logsumexp(resp);
  for (Index i = 0; i < n; ++i) {
    if (std::isfinite(log_f(i))) {
      resp.row(i) = (resp.row(i).array() - log_f(i)).exp().matrix();
    } else {
      // every component underflowed: assign the point to its nearest mean
      Index nearest = 0;
      (model.means.rowwise() - x.row(i)).rowwise().squaredNorm().minCoeff(&nearest);
      resp.row(i).setZero();
      resp(i, nearest) = Scalar(1);
    }
  }

  GmmModel<Scalar> next = model;
  next.density_floor = Scalar(0);
  const ColVector<Scalar> mass = resp.colwise().sum().transpose();
  for (Index k = 0; k < m; ++k) {
    next.weights(k) = mass(k) / Scalar(n);
    if (mass(k) < Scalar(kGmmEmptyComponent)) continue;
    const auto mu = ((resp.col(k).transpose() * x) / mass(k)).eval();
    const auto var =
        ((resp.col(k).transpose() * (x.rowwise() - mu).array().square().matrix()) / mass(k)).eval();
    next.means.row(k) = mu;
    next.stds.row(k) = var.array().sqrt().max(Scalar(kGmmStdFloor)).matrix();
  }
  next.weights /= next.weights.sum();
  return next;
}

/// Default starting point: M distinct rows as means, the per-column sample
/// std for every component, equal weights.
template <typename Derived>
GmmModel<typename Derived::Scalar> gmm_initial_model(const Eigen::MatrixBase<Derived>& x,
                                                     Index components, Rng& rng) {
  using Scalar = typename Derived::Scalar;
  const Index n = x.rows();
  if (n == 0) throw Error("gmm: empty input");
  if (components < 1 || components > n) {
    throw Error("gmm: component count " + std::to_string(components) + " not in [1, " +
                std::to_string(n) + "]");
  }
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  for (Index i = 0; i < components; ++i) {
    std::uniform_int_distribution<Index> pick(i, n - 1);
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(pick(rng))]);
  }
  GmmModel<Scalar> model;
  model.weights = ColVector<Scalar>::Constant(components, Scalar(1) / Scalar(components));
  model.means.resize(components, x.cols());
  for (Index k = 0; k < components; ++k) model.means.row(k) = x.row(order[static_cast<std::size_t>(k)]);
  model.stds = detail::column_std(x).transpose().replicate(components, 1);
  return model;
}

/// Runs exactly `niter` EM sweeps from `init` and sets the density floor.
template <typename Derived, typename Scalar>
GmmModel<Scalar> gmm_fit(const Eigen::MatrixBase<Derived>& x, GmmModel<Scalar> init, int niter) {
  if (x.rows() == 0) throw Error("gmm: empty input");
  if (niter < 1) throw Error("gmm: niter must be >= 1");
  if (init.dim() != x.cols()) throw Error("gmm: initial model dimension mismatch");
  if (init.components() > x.rows()) throw Error("gmm: more components than points");
  for (int t = 0; t < niter; ++t) init = gmm_em_sweep(x, init);
  init.density_floor = detail::compute_density_floor(x, init);
  return init;
}

/// Fits from the default initialization (see gmm_initial_model).
template <typename Derived>
GmmModel<typename Derived::Scalar> gmm_fit(const Eigen::MatrixBase<Derived>& x, Index components,
                                           int niter, Rng& rng) {
  if (niter < 1) throw Error("gmm: niter must be >= 1");
  return gmm_fit(x, gmm_initial_model(x, components, rng), niter);
}

/// Warm-started single sweep on the points still in play. With fewer points
/// than components the previous model is returned unchanged.
template <typename Derived, typename Scalar>
GmmModel<Scalar> gmm_update(const GmmModel<Scalar>& prev, const Eigen::MatrixBase<Derived>& remaining) {
  if (remaining.rows() == 0) throw Error("gmm: update on empty point set");
  if (remaining.rows() < prev.components()) return prev;
  return gmm_fit(remaining, prev, 1);
}

/// Mixture density at every row of `x`, clamped below by the model's floor.
template <typename Derived, typename Scalar>
ColVector<Scalar> gmm_density(const GmmModel<Scalar>& model, const Eigen::MatrixBase<Derived>& x) {
  const Scalar floor = model.density_floor > Scalar(0) ? model.density_floor
                                                       : std::numeric_limits<Scalar>::min();
  ColVector<Scalar> out =
      detail::row_logsumexp(detail::component_log_terms(x, model)).array().exp().matrix();
  return out.cwiseMax(floor);
}

template <typename Derived, typename Scalar>
Scalar gmm_density_at(const GmmModel<Scalar>& model, const Eigen::MatrixBase<Derived>& point) {
  if (point.cols() == 1 && point.rows() != 1) {
    return gmm_density(model, point.transpose())(0);
  }
  return gmm_density(model, point)(0);
}

}  // namespace dsub
