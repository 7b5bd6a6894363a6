#include "dsub/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace dsub {

namespace {

Matrix enumerate_lattice(const Vector& lo, const Vector& hi, Index limit) {
  const Index q = lo.size();
  double count = 1.0;
  for (Index j = 0; j < q; ++j) count *= hi(j) - lo(j) + 1.0;
  if (count > static_cast<double>(limit)) return Matrix(0, q);
  Matrix out(static_cast<Index>(count), q);
  Vector cursor = lo;
  for (Index r = 0; r < out.rows(); ++r) {
    out.row(r) = cursor.transpose();
    for (Index j = 0; j < q; ++j) {
      if (cursor(j) < hi(j)) {
        cursor(j) += 1.0;
        break;
      }
      cursor(j) = lo(j);
    }
  }
  return out;
}

Matrix distinct_rows(const Matrix& rows) {
  std::set<std::vector<double>> seen;
  for (Index i = 0; i < rows.rows(); ++i) {
    std::vector<double> key(static_cast<std::size_t>(rows.cols()));
    for (Index j = 0; j < rows.cols(); ++j) key[static_cast<std::size_t>(j)] = rows(i, j);
    seen.insert(std::move(key));
  }
  Matrix out(static_cast<Index>(seen.size()), rows.cols());
  Index r = 0;
  for (const auto& key : seen) {
    for (Index j = 0; j < rows.cols(); ++j) out(r, j) = key[static_cast<std::size_t>(j)];
    ++r;
  }
  return out;
}

}  // namespace

double coverage_threshold(const Vector& density_at_data, double coverage) {
  if (!(coverage > 0.0 && coverage <= 1.0)) throw Error("coverage must lie in (0, 1]");
  const Index n = density_at_data.size();
  if (n == 0) throw Error("coverage threshold of an empty sample");
  std::vector<double> sorted(density_at_data.data(), density_at_data.data() + n);
  std::sort(sorted.begin(), sorted.end());
  const auto inside = static_cast<Index>(std::ceil(coverage * static_cast<double>(n) - 1e-9));
  const Index pos = std::clamp<Index>(n - inside, 0, n - 1);
  return sorted[static_cast<std::size_t>(pos)];
}

OmegaRegion build_omega(DensityFunction density, const Matrix& data, double coverage, Rng& rng,
                        const OmegaOptions& options) {
  if (data.rows() == 0) throw Error("omega: empty data");
  OmegaRegion omega;
  omega.density = std::move(density);
  omega.coverage = coverage;
  omega.discrete = options.discrete;

  Vector at_data(data.rows());
  for (Index i = 0; i < data.rows(); ++i) at_data(i) = omega.density(data.row(i).transpose());
  omega.delta = coverage_threshold(at_data, coverage);

  const Vector lo = data.colwise().minCoeff().transpose();
  const Vector hi = data.colwise().maxCoeff().transpose();
  if (omega.discrete) {
    omega.lower = lo.array().ceil().matrix();
    omega.upper = hi.array().floor().matrix();
    Matrix candidates = enumerate_lattice(omega.lower, omega.upper, options.max_lattice_points);
    if (candidates.rows() == 0) candidates = distinct_rows(data);
    std::vector<Index> keep;
    for (Index r = 0; r < candidates.rows(); ++r) {
      if (omega.contains(candidates.row(r).transpose())) keep.push_back(r);
    }
    omega.lattice.resize(static_cast<Index>(keep.size()), data.cols());
    for (std::size_t r = 0; r < keep.size(); ++r) omega.lattice.row(static_cast<Index>(r)) = candidates.row(keep[r]);
    omega.volume = static_cast<double>(keep.size());
    omega.hit_fraction = 1.0;
    return omega;
  }

  const Vector margin = options.box_margin * (hi - lo);
  omega.lower = lo - margin;
  omega.upper = hi + margin;
  const Vector width = omega.upper - omega.lower;
  double box_volume = 1.0;
  for (Index j = 0; j < width.size(); ++j) box_volume *= width(j);

  if (box_volume == 0.0) {
    omega.hit_fraction = 1.0;
    omega.volume = 0.0;
    return omega;
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector x(data.cols());
  Index hits = 0;
  for (Index s = 0; s < options.volume_samples; ++s) {
    for (Index j = 0; j < x.size(); ++j) x(j) = omega.lower(j) + width(j) * unit(rng);
    if (omega.contains(x)) ++hits;
  }
  omega.hit_fraction = static_cast<double>(hits) / static_cast<double>(std::max<Index>(options.volume_samples, 1));
  omega.volume = omega.hit_fraction * box_volume;
  return omega;
}

OmegaRegion build_omega(const DistributionSpec& spec, const Matrix& data, double coverage, Rng& rng,
                        OmegaOptions options) {
  options.discrete = spec.discrete();
  return build_omega(make_true_density(spec), data, coverage, rng, options);
}

DensityFunction density_function(GmmModel<double> model) {
  return [model = std::move(model)](const Eigen::Ref<const Vector>& x) {
    return gmm_density(model, x.transpose())(0);
  };
}

std::vector<bool> outside_mask(const Matrix& data, const OmegaRegion& omega) {
  std::vector<bool> out(static_cast<std::size_t>(data.rows()));
  for (Index i = 0; i < data.rows(); ++i) out[static_cast<std::size_t>(i)] = !omega.contains(data.row(i).transpose());
  return out;
}

double low_density_ratio(std::span<const Index> selected, const std::vector<bool>& outside) {
  const auto denominator = std::count(outside.begin(), outside.end(), true);
  if (denominator == 0) throw Error("low-density ratio undefined: no data rows lie outside omega");
  Index hits = 0;
  for (Index i : selected) {
    if (i < 0 || i >= static_cast<Index>(outside.size())) throw Error("selected index out of range");
    if (outside[static_cast<std::size_t>(i)]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(denominator);
}

double low_density_ratio(std::span<const Index> selected, const Matrix& data, const OmegaRegion& omega) {
  return low_density_ratio(selected, outside_mask(data, omega));
}

Matrix uniform_reference(const OmegaRegion& omega, Index m, Rng& rng) {
  const Index q = omega.lower.size();
  if (m < 0) throw Error("reference size must be nonnegative");
  Matrix out(m, q);
  if (m == 0) return out;
  if (omega.discrete) {
    if (omega.lattice.rows() == 0) throw Error("omega contains no lattice points");
    std::uniform_int_distribution<Index> pick(0, omega.lattice.rows() - 1);
    for (Index r = 0; r < m; ++r) out.row(r) = omega.lattice.row(pick(rng));
    return out;
  }
  constexpr double kMinAcceptance = 1e-6;
  if (omega.hit_fraction < kMinAcceptance) {
    throw Error("omega covers too little of its sampling box (acceptance below 1e-6)");
  }
  const Vector width = omega.upper - omega.lower;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector x(q);
  Index filled = 0;
  double attempts = 0.0;
  while (filled < m) {
    for (Index j = 0; j < q; ++j) x(j) = omega.lower(j) + width(j) * unit(rng);
    attempts += 1.0;
    if (omega.contains(x)) out.row(filled++) = x.transpose();
    if (attempts > 1e6 && static_cast<double>(filled) / attempts < kMinAcceptance) {
      throw Error("rejection sampling acceptance fell below 1e-6");
    }
  }
  return out;
}

Matrix rows_in_omega(const Matrix& data, std::span<const Index> selected, const OmegaRegion& omega) {
  std::vector<Index> keep;
  keep.reserve(selected.size());
  for (Index i : selected) {
    if (i < 0 || i >= data.rows()) throw Error("selected index out of range");
    if (omega.contains(data.row(i).transpose())) keep.push_back(i);
  }
  Matrix out(static_cast<Index>(keep.size()), data.cols());
  for (std::size_t r = 0; r < keep.size(); ++r) out.row(static_cast<Index>(r)) = data.row(keep[r]);
  return out;
}

DeviationPoint deviation_point(const OmegaRegion& omega, Index data_rows) {
  DeviationPoint d;
  d.in_omega = static_cast<double>(data_rows) * omega.delta * omega.volume;
  d.total = d.in_omega / omega.coverage;
  return d;
}

}  // namespace dsub
