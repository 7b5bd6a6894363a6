#include "dsub/data.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

using namespace dsub;

namespace {

Matrix column(std::initializer_list<double> v) {
  Matrix m(static_cast<Index>(v.size()), 1);
  Index i = 0;
  for (double x : v) m(i++, 0) = x;
  return m;
}

Matrix uniform_points(Index rows, Index cols, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = unit(rng);
  return m;
}

}  // namespace

TEST_CASE("standardize maps endpoints to 0 and 1") {
  const auto a = standardize(Dataset(column({0, 5, 10})));
  CHECK(a.points(0, 0) == 0.0);
  CHECK(a.points(1, 0) == 0.5);
  CHECK(a.points(2, 0) == 1.0);

  const auto b = standardize(Dataset(column({-1, 0, 3})));
  CHECK(b.points(0, 0) == 0.0);
  CHECK(b.points(1, 0) == 0.25);
  CHECK(b.points(2, 0) == 1.0);
}

TEST_CASE("standardize sends constant columns to one half") {
  Matrix m(4, 2);
  m.col(0).setConstant(2.0);
  m.col(1).setConstant(3.0);
  const auto s = standardize(Dataset(m));
  CHECK((s.points.array() == 0.5).all());
  CHECK(s.range(0) == 1.0);
  CHECK(s.invert().isApprox(m));
}

TEST_CASE("standardize inverse recovers the data") {
  Rng rng = make_rng(2);
  Matrix m = uniform_points(500, 3, rng);
  m.col(0) = (m.col(0).array() * 1e6 - 3e5).matrix();
  m.col(2) = (m.col(2).array() * 1e-3 + 7.0).matrix();
  const auto s = standardize(Dataset(m));
  CHECK(s.points.minCoeff() >= 0.0);
  CHECK(s.points.maxCoeff() <= 1.0);
  const Matrix back = s.invert();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      CHECK(std::abs(back(i, j) - m(i, j)) <= 1e-9 * std::max(1.0, std::abs(m(i, j))));
}

TEST_CASE("datasets reject non-finite cells by position") {
  Matrix m = Matrix::Zero(3, 2);
  m(2, 1) = std::numeric_limits<double>::infinity();
  try {
    Dataset d(m);
    FAIL("expected an error");
  } catch (const Error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("row 3") != std::string::npos);
    CHECK(msg.find("column 2") != std::string::npos);
  }
  CHECK_THROWS_AS(Dataset(Matrix(0, 2)), Error);
}

TEST_CASE("perturbation scale on tiny sets") {
  Rng rng = make_rng(1);
  CHECK(perturbation_scale(standardize(Dataset(column({0, 1}))), rng) == 0.125);
  Matrix tri(3, 2);
  tri << 0, 0, 0, 1, 1, 0;
  CHECK(perturbation_scale(standardize(Dataset(tri)), rng) == 0.125);
}

TEST_CASE("perturbation scale on 10^4 uniform points is small and positive") {
  int good = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng = make_rng(seed);
    const auto sd = standardize(Dataset(uniform_points(10'000, 2, rng)));
    const double s = perturbation_scale(sd, rng);
    if (s > 0.0 && s < 0.01) ++good;
  }
  CHECK(good >= 99);
}

TEST_CASE("perturbation scale equals an eighth of the brute-force minimum on all rows") {
  Rng rng = make_rng(4);
  const auto sd = standardize(Dataset(uniform_points(7, 2, rng)));
  double best = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < 7; ++i)
    for (Index j = i + 1; j < 7; ++j) best = std::min(best, (sd.points.row(i) - sd.points.row(j)).norm());
  CHECK(perturbation_scale(sd, rng) == doctest::Approx(best / 8.0).epsilon(1e-14));
}

TEST_CASE("perturbation scale ignores duplicated rows") {
  Matrix m(8, 1);
  m << 0, 0, 0, 0, 1, 1, 1, 1;
  Rng rng = make_rng(9);
  CHECK(perturbation_scale(standardize(Dataset(m)), rng) == 0.125);
}

TEST_CASE("perturbation scale fails on a single repeated point") {
  Rng rng = make_rng(0);
  CHECK_THROWS_AS(perturbation_scale(standardize(Dataset(Matrix::Ones(50, 2))), rng), Error);
}

TEST_CASE("perturbation scale distribution does not depend on row order") {
  Rng data_rng = make_rng(77);
  const Matrix m = uniform_points(400, 2, data_rng);
  std::vector<Index> order(400);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), data_rng);
  Matrix permuted(400, 2);
  for (Index i = 0; i < 400; ++i) permuted.row(i) = m.row(order[static_cast<std::size_t>(i)]);

  const auto a = standardize(Dataset(m));
  const auto b = standardize(Dataset(permuted));
  std::vector<double> sa, sb;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng ra = make_rng(seed, 1);
    Rng rb = make_rng(seed, 2);
    sa.push_back(perturbation_scale(a, ra));
    sb.push_back(perturbation_scale(b, rb));
  }
  CHECK(testing::ks_two_sample_p_value(sa, sb) > 0.01);
}

TEST_CASE("perturb adds noise of the requested scale") {
  Rng rng = make_rng(5);
  const auto sd = standardize(Dataset(uniform_points(100'000, 2, rng)));
  const Matrix before = sd.points;
  const auto p = perturb(sd, 0.01, rng);
  CHECK(p.sigma_p == 0.01);
  CHECK(sd.points == before);
  const Matrix diff = p.points - sd.points;
  for (Index j = 0; j < 2; ++j) {
    const double mean = diff.col(j).mean();
    const double sd_j = std::sqrt((diff.col(j).array() - mean).square().sum() / (diff.rows() - 1.0));
    CHECK(sd_j >= 0.0095);
    CHECK(sd_j <= 0.0105);
  }
}

TEST_CASE("perturb is deterministic in the seed and vanishes with the scale") {
  Rng rng = make_rng(6);
  const auto sd = standardize(Dataset(uniform_points(200, 3, rng)));
  Rng r1 = make_rng(42), r2 = make_rng(42);
  CHECK(perturb(sd, 0.1, r1).points == perturb(sd, 0.1, r2).points);
  Rng r3 = make_rng(42);
  CHECK((perturb(sd, 1e-300, r3).points - sd.points).cwiseAbs().maxCoeff() < 1e-298);
  Rng r4 = make_rng(1);
  CHECK_THROWS_AS(perturb(sd, 0.0, r4), Error);
}

TEST_CASE("min pairwise distance brute force") {
  Matrix m(3, 2);
  m << 0, 0, 3, 4, 0, 1;
  CHECK(min_pairwise_distance(m) == 1.0);
}
