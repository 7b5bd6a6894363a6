#include "dsub/weight_tree.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <random>

using namespace dsub;

TEST_CASE("weight tree interval boundaries") {
  WeightTree tree(std::vector<double>{2, 0, 2});
  CHECK(tree.draw(0.49) == 0);
  CHECK(tree.draw(0.51) == 2);
  tree.zero(0);
  CHECK(tree.total() == 2.0);
}

TEST_CASE("weight tree draws match the worked examples") {
  const std::vector<double> w{1, 2, 3, 4};
  WeightTree tree(w);
  CHECK(tree.total() == 10.0);
  CHECK(tree.draw(0.0) == 0);
  CHECK(tree.draw(0.15) == 1);
  CHECK(tree.draw(0.35) == 2);
  CHECK(tree.draw(0.95) == 3);

  tree.zero(2);
  CHECK(tree.total() == 7.0);
  for (double u = 0.0; u < 1.0; u += 0.01) CHECK(tree.draw(u) != 2);
}

TEST_CASE("weight tree agrees with a linear cumulative scan") {
  Rng rng = make_rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 1 + rng() % 37;
    std::vector<double> w(n);
    for (auto& v : w) v = unit(rng) < 0.2 ? 0.0 : unit(rng) * 5.0;
    w[rng() % n] = 1.0;
    WeightTree tree(w);
    for (int k = 0; k < 200; ++k) {
      const double u = unit(rng);
      CHECK(tree.draw(u) == testing::linear_scan_draw(w, u));
    }
  }
}

TEST_CASE("weight tree total is exact after many zeroings") {
  Rng rng = make_rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> w(1000);
  for (auto& v : w) v = std::exp(20.0 * (unit(rng) - 0.5));
  WeightTree tree(w);
  for (int k = 0; k < 900; ++k) {
    const Index i = tree.draw(unit(rng));
    CHECK(tree.weight(i) > 0.0);
    tree.zero(i);
    w[static_cast<std::size_t>(i)] = 0.0;
  }
  double direct = 0.0;
  for (double v : w) direct += v;
  CHECK(tree.total() == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("weight tree draw frequencies follow the weights") {
  const std::vector<double> w{1, 2, 3, 4, 0, 5};
  WeightTree tree(w);
  Rng rng = make_rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> counts(w.size(), 0.0);
  for (int k = 0; k < 100'000; ++k) counts[static_cast<std::size_t>(tree.draw(unit(rng)))] += 1.0;
  CHECK(counts[4] == 0.0);
  std::vector<double> obs, probs;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) continue;
    obs.push_back(counts[i]);
    probs.push_back(w[i] / 15.0);
  }
  CHECK(testing::chi_square_p_value(obs, probs) > 0.01);
}

TEST_CASE("weight tree rejects bad input") {
  const std::vector<double> negative{1.0, -1.0};
  CHECK_THROWS_AS(WeightTree{negative}, Error);
  const std::vector<double> nan{1.0, std::nan("")};
  CHECK_THROWS_AS(WeightTree{nan}, Error);
  const std::vector<double> zeros{0.0, 0.0};
  WeightTree tree(zeros);
  CHECK_THROWS_AS(tree.draw(0.5), Error);
}

TEST_CASE("weight tree rebuild replaces all leaves") {
  WeightTree tree(std::vector<double>{1, 1, 1});
  tree.rebuild(std::vector<double>{0, 0, 2});
  CHECK(tree.total() == 2.0);
  CHECK(tree.draw(0.0) == 2);
  CHECK(tree.draw(0.999) == 2);
}
