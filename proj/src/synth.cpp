#include "dsub/synth.hpp"

#include <cmath>
#include <numbers>

namespace dsub {

namespace {

void validate(const DistributionSpec& spec) {
  if (spec.dim < 1) throw Error("distribution dimension must be >= 1");
  if (spec.family == Family::geometric && !(spec.geometric_p > 0.0 && spec.geometric_p < 1.0)) {
    throw Error("geometric p must lie in (0, 1)");
  }
  if (spec.family == Family::mgm && !(spec.mgm_sigma2 > 0.0 && spec.mgm_alpha >= 0.0)) {
    throw Error("mgm requires sigma2 > 0 and alpha >= 0");
  }
}

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double gaussian_density(const Eigen::LLT<Matrix>& chol, double log_det, const Vector& diff) {
  const Vector z = chol.matrixL().solve(diff);
  const double q = static_cast<double>(diff.size());
  return std::exp(-0.5 * z.squaredNorm() - 0.5 * log_det - 0.5 * q * std::log(2.0 * std::numbers::pi));
}

}  // namespace

std::string family_name(Family family) {
  switch (family) {
    case Family::normal: return "normal";
    case Family::gamma: return "gamma";
    case Family::exponential: return "exponential";
    case Family::geometric: return "geometric";
    case Family::mgm: return "mgm";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  for (Family f : {Family::normal, Family::gamma, Family::exponential, Family::geometric, Family::mgm}) {
    if (name == family_name(f)) return f;
  }
  throw Error("unknown distribution '" + std::string(name) +
              "' (expected normal, gamma, exponential, geometric or mgm)");
}

std::string DistributionSpec::name() const { return family_name(family) + "-" + std::to_string(dim) + "d"; }

DistributionSpec benchmark_spec(Family family, Index dim) {
  DistributionSpec spec;
  spec.family = family;
  spec.dim = dim;
  spec.geometric_p = dim == 2 ? 0.5 : 0.9;
  return spec;
}

MgmParameters mgm_parameters(const DistributionSpec& spec) {
  const Index q = spec.dim;
  MgmParameters p;
  p.mean1 = Vector::Zero(q);
  p.mean2.resize(q);
  Vector a(q);
  for (Index k = 0; k < q; ++k) {
    const double i = static_cast<double>(k + 1);
    const double sign = (k + 1) % 2 == 0 ? 1.0 : -1.0;
    p.mean2(k) = spec.mgm_shift * sign;
    a(k) = 0.2 * (i - 2.0) * sign;
  }
  p.covariance = spec.mgm_sigma2 * Matrix::Identity(q, q) + spec.mgm_alpha * a * a.transpose();
  return p;
}

Matrix generate(const DistributionSpec& spec, Index rows, Rng& rng) {
  validate(spec);
  if (rows < 1) throw Error("row count must be >= 1");
  const Index q = spec.dim;
  Matrix out(rows, q);
  switch (spec.family) {
    case Family::normal: {
      std::normal_distribution<double> d(0.0, 1.0);
      for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < q; ++j) out(i, j) = d(rng);
      break;
    }
    case Family::gamma: {
      std::gamma_distribution<double> d(2.0, 2.0);
      for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < q; ++j) out(i, j) = d(rng);
      break;
    }
    case Family::exponential: {
      std::exponential_distribution<double> d(1.0);
      for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < q; ++j) out(i, j) = d(rng);
      break;
    }
    case Family::geometric: {
      // std::geometric_distribution counts failures; support here starts at 1
      std::geometric_distribution<long long> d(spec.geometric_p);
      for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < q; ++j) out(i, j) = static_cast<double>(d(rng) + 1);
      break;
    }
    case Family::mgm: {
      const MgmParameters p = mgm_parameters(spec);
      const Matrix lower = p.covariance.llt().matrixL();
      std::normal_distribution<double> d(0.0, 1.0);
      std::bernoulli_distribution second(0.5);
      Vector z(q);
      for (Index i = 0; i < rows; ++i) {
        const bool use_second = second(rng);
        for (Index j = 0; j < q; ++j) z(j) = d(rng);
        out.row(i) = ((use_second ? p.mean2 : p.mean1) + lower * z).transpose();
      }
      break;
    }
  }
  return out;
}

DensityFunction make_true_density(const DistributionSpec& spec) {
  validate(spec);
  const Index q = spec.dim;
  auto check = [q](const Eigen::Ref<const Vector>& x) {
    if (x.size() != q) throw Error("point dimension does not match the distribution");
  };
  switch (spec.family) {
    case Family::normal:
      return [check](const Eigen::Ref<const Vector>& x) {
        check(x);
        double f = 1.0;
        for (Index j = 0; j < x.size(); ++j) f *= normal_pdf(x(j));
        return f;
      };
    case Family::gamma:
      return [check](const Eigen::Ref<const Vector>& x) {
        check(x);
        double f = 1.0;
        for (Index j = 0; j < x.size(); ++j) f *= x(j) < 0.0 ? 0.0 : x(j) * std::exp(-x(j) / 2.0) / 4.0;
        return f;
      };
    case Family::exponential:
      return [check](const Eigen::Ref<const Vector>& x) {
        check(x);
        double f = 1.0;
        for (Index j = 0; j < x.size(); ++j) f *= x(j) < 0.0 ? 0.0 : std::exp(-x(j));
        return f;
      };
    case Family::geometric:
      return [check, p = spec.geometric_p](const Eigen::Ref<const Vector>& x) {
        check(x);
        double f = 1.0;
        for (Index j = 0; j < x.size(); ++j) {
          const double v = x(j);
          if (v < 1.0 || v != std::floor(v)) return 0.0;
          f *= std::pow(1.0 - p, v - 1.0) * p;
        }
        return f;
      };
    case Family::mgm: {
      const MgmParameters p = mgm_parameters(spec);
      const Eigen::LLT<Matrix> chol(p.covariance);
      const double log_det = 2.0 * chol.matrixLLT().diagonal().array().log().sum();
      return [check, p, chol, log_det](const Eigen::Ref<const Vector>& x) {
        check(x);
        return 0.5 * gaussian_density(chol, log_det, x - p.mean1) +
               0.5 * gaussian_density(chol, log_det, x - p.mean2);
      };
    }
  }
  throw Error("unknown distribution family");
}

double true_density(const DistributionSpec& spec, const Eigen::Ref<const Vector>& x) {
  return make_true_density(spec)(x);
}

Vector true_density_rows(const DistributionSpec& spec, const Matrix& points) {
  const DensityFunction f = make_true_density(spec);
  Vector out(points.rows());
  for (Index i = 0; i < points.rows(); ++i) out(i) = f(points.row(i).transpose());
  return out;
}

Matrix replicate_rows(const Matrix& base, Index copies) {
  if (copies < 1) throw Error("copies must be >= 1");
  return base.replicate(copies, 1);
}

Dataset replicate_dataset(const Dataset& base, Index copies) {
  return Dataset(replicate_rows(base.points(), copies));
}

}  // namespace dsub
