// Acceptance suite: one PASS/FAIL line per criterion.
//
//   dsub_acceptance            run everything
//   dsub_acceptance 4 7        run selected criteria

#include "dsub/experiment.hpp"
#include "dsub/gmm.hpp"
#include "dsub/metrics.hpp"
#include "dsub/sampler.hpp"
#include "dsub/synth.hpp"

#include "support/oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace dsub;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

SamplerConfig seeded(std::uint64_t seed) {
  SamplerConfig cfg;
  cfg.seed = seed;
  return cfg;
}

const Curve& curve(const std::vector<Curve>& curves, Method m) {
  for (const auto& c : curves) {
    if (c.method == m) return c;
  }
  throw Error("missing curve " + method_name(m));
}

double at_size(const Curve& c, Index n) {
  for (std::size_t k = 0; k < c.sizes.size(); ++k) {
    if (c.sizes[k] == n) return c.mean[k];
  }
  throw Error("missing size " + std::to_string(n));
}

ExperimentSetup normal_2d(Index copies, std::vector<Index> sizes, std::vector<Method> methods, Index replicates) {
  ExperimentSetup s = experiment_preset("fig4-normal-2d");
  s.copies = copies;
  s.sizes = std::move(sizes);
  s.methods = std::move(methods);
  s.replicates = replicates;
  s.seed = 20'240'101;
  return s;
}

// Shared by criteria 4 and 5.
const std::vector<Curve>& plain_normal_curves() {
  static const std::vector<Curve> curves = run_experiment(normal_2d(
      1, {20, 520, 1020}, {Method::uniform_ref, Method::random, Method::ds, Method::fps, Method::fps16}, 50));
  return curves;
}

Outcome exact_law() {
  const auto start = Clock::now();
  const std::vector<double> w{1, 2, 3, 4, 5};
  Vector f(5);
  for (Index i = 0; i < 5; ++i) f(i) = 1.0 / w[static_cast<std::size_t>(i)];
  const Dataset data(Matrix::Zero(5, 1));
  std::map<std::vector<Index>, double> counts;
  const int runs = 100'000;
  for (int s = 0; s < runs; ++s) {
    FixedDensity density(f);
    counts[ds_select(data, 3, TargetSpec::uniform(), seeded(static_cast<std::uint64_t>(s)), density).indices] += 1;
  }
  const auto sequences = testing::ordered_selections(5, 3);
  std::vector<double> obs, probs;
  for (const auto& seq : sequences) {
    obs.push_back(counts[seq]);
    probs.push_back(testing::sequence_probability(w, seq));
  }
  const double p = testing::chi_square_p_value(obs, probs);
  const double elapsed = seconds_since(start);
  return {sequences.size() == 60 && counts.size() == 60 && p > 0.01 && elapsed < 30.0,
          fmt("60 ordered triples, chi-square p = %.4f, %.1f s", p, elapsed)};
}

Outcome degeneracy() {
  const auto spec = benchmark_spec(Family::normal, 2);
  Rng rng = make_rng(5);
  const Dataset data(generate(spec, 1000, rng));
  GmmDensityEstimator fitted(data, 32, 10);
  const Vector f_hat = fitted.initial(rng);
  FixedDensity density(f_hat);
  double worst = 0.0;
  Index steps = 0;
  const Index n = data.rows();
  const auto r = ds_select(data, n, TargetSpec::per_point(4.2 * f_hat), seeded(3), density,
                           [&](Index step, const WeightTree& tree) {
                             const double expected = 1.0 / static_cast<double>(n - step + 1);
                             for (Index i = 0; i < n; ++i) {
                               if (tree.weight(i) > 0.0) {
                                 worst = std::max(worst, std::abs(tree.weight(i) / tree.total() - expected));
                               }
                             }
                             ++steps;
                           });
  return {steps == n && worst <= 1e-12,
          fmt("%td draws, %zu refits, max |p - 1/remaining| = %.2e", static_cast<std::ptrdiff_t>(steps),
              r.update_checkpoints.size(), worst)};
}

Outcome inverse_density_uniformity() {
  const auto start = Clock::now();
  std::vector<double> pooled;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng = make_rng(seed, 77);
    Matrix x(100'000, 1);
    for (Index i = 0; i < x.rows(); ++i) x(i, 0) = std::sqrt(1.0 - unit(rng));
    const Dataset data(x);
    FixedDensity density(2.0 * x.col(0));
    for (Index i : ds_select(data, 100, TargetSpec::uniform(), seeded(seed), density).indices) {
      pooled.push_back(x(i, 0));
    }
  }
  const double p = testing::ks_p_value(pooled, [](double v) { return std::clamp(v, 0.0, 1.0); });
  const double elapsed = seconds_since(start);
  return {p > 0.01 && elapsed < 120.0, fmt("%zu pooled points, KS p = %.4f, %.1f s", pooled.size(), p, elapsed)};
}

Outcome energy_ordering() {
  const auto start = Clock::now();
  const auto& curves = plain_normal_curves();
  const auto& ds = curve(curves, Method::ds);
  const auto& rnd = curve(curves, Method::random);
  const auto& uni = curve(curves, Method::uniform_ref);
  bool ordered = true;
  std::string detail;
  for (Index n : {20, 520, 1020}) {
    ordered = ordered && at_size(ds, n) < at_size(rnd, n);
    detail += fmt("n=%td ds %.4f random %.4f uniform %.4f; ", static_cast<std::ptrdiff_t>(n), at_size(ds, n),
                  at_size(rnd, n), at_size(uni, n));
  }
  const double ratio = at_size(ds, 520) / at_size(uni, 520);
  const double elapsed = seconds_since(start);
  return {ordered && ratio <= 2.0 && elapsed < 600.0,
          detail + fmt("ds/uniform at 520 = %.2f, %.0f s", ratio, elapsed)};
}

Outcome replicated() {
  const auto& plain = plain_normal_curves();
  const auto rep = run_experiment(normal_2d(5, {520}, {Method::ds, Method::fps, Method::fps16}, 50));
  const double ds_change = at_size(curve(rep, Method::ds), 520) / at_size(curve(plain, Method::ds), 520);
  const double fps_change = at_size(curve(rep, Method::fps), 520) / at_size(curve(plain, Method::fps), 520);
  const double fps16_change = at_size(curve(rep, Method::fps16), 520) / at_size(curve(plain, Method::fps16), 520);
  return {ds_change <= 1.5 && fps_change >= 1.5,
          fmt("replicated/plain e at n=520: ds %.2f, fps (1 block) %.2f, fps (16 blocks) %.2f", ds_change,
              fps_change, fps16_change)};
}

Outcome low_density_ratio_curve() {
  const auto spec = benchmark_spec(Family::normal, 2);
  double final_sum = 0.0;
  bool monotone = true;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng = make_rng(seed, 6);
    const Dataset data(generate(spec, 10'000, rng));
    OmegaOptions o;
    o.volume_samples = 1000;
    const auto omega = build_omega(spec, data.points(), 0.99, rng, o);
    const auto outside = outside_mask(data.points(), omega);
    const auto picked = ds_select(data, 2000, TargetSpec::uniform(), seeded(seed)).indices;
    double prev = 0.0;
    for (std::size_t k = 1; k <= picked.size(); ++k) {
      const double r = low_density_ratio(std::span<const Index>(picked).first(k), outside);
      monotone = monotone && r >= prev;
      prev = r;
    }
    final_sum += prev;
  }
  const double mean = final_sum / 20.0;
  return {mean >= 0.8 && monotone, fmt("mean r at n=2000 = %.3f, monotone per run: %s", mean, monotone ? "yes" : "no")};
}

Outcome deviation() {
  const auto spec = benchmark_spec(Family::normal, 2);
  Rng rng = make_rng(2024, 7);
  const Matrix data = generate(spec, 10'000, rng);
  const auto omega = build_omega(spec, data, 0.99, rng);
  const DeviationPoint nb = deviation_point(omega, 10'000);

  std::vector<Index> sizes;
  for (Index n = 20; n <= 4020; n += 500) {
    if (static_cast<double>(n) >= 2.0 * nb.total) sizes.push_back(n);
  }
  const auto curves = run_experiment(normal_2d(1, sizes, {Method::uniform_ref, Method::ds}, 20));
  double smallest = std::numeric_limits<double>::infinity();
  for (Index n : sizes) {
    smallest = std::min(smallest, at_size(curve(curves, Method::ds), n) / at_size(curve(curves, Method::uniform_ref), n));
  }
  const bool bracket = nb.total >= 400.0 && nb.total <= 700.0;
  return {bracket && smallest > 1.5,
          fmt("n^b = %.0f (in omega %.0f), smallest ds/uniform ratio over n = %td..%td is %.2f", nb.total,
              nb.in_omega, static_cast<std::ptrdiff_t>(sizes.front()), static_cast<std::ptrdiff_t>(sizes.back()),
              smallest)};
}

Outcome em_properties() {
  double worst_drop = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng = make_rng(seed, 8);
    std::normal_distribution<double> z(0.0, 1.0);
    const Index cols = 1 + static_cast<Index>(seed % 5);
    Matrix x(500, cols);
    for (Index i = 0; i < x.rows(); ++i)
      for (Index j = 0; j < cols; ++j) x(i, j) = (i % 3) * 2.5 + (0.2 + i % 3) * z(rng);
    auto model = gmm_initial_model(x, 1 + static_cast<Index>(seed % 8), rng);
    double prev = gmm_log_likelihood(x, model);
    for (int t = 0; t < 10; ++t) {
      model = gmm_em_sweep(x, model);
      const double now = gmm_log_likelihood(x, model);
      worst_drop = std::max(worst_drop, prev - now);
      prev = now;
    }
  }

  Rng rng = make_rng(8);
  std::gamma_distribution<double> g(2.0, 1.0);
  Matrix x(300, 3);
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = 0; j < 3; ++j) x(i, j) = g(rng);
  const auto one = gmm_fit(x, 1, 1, rng);
  const Vector mean = x.colwise().mean().transpose();
  double worst_moment = std::abs(one.weights(0) - 1.0);
  for (Index j = 0; j < 3; ++j) {
    const double pop_sd = std::sqrt((x.col(j).array() - mean(j)).square().mean());
    worst_moment = std::max({worst_moment, std::abs(one.means(0, j) - mean(j)), std::abs(one.stds(0, j) - pop_sd)});
  }
  return {worst_drop <= 1e-9 && worst_moment <= 1e-9,
          fmt("largest log-likelihood drop %.2e over 50 datasets x 10 sweeps; M=1 moment error %.2e", worst_drop,
              worst_moment)};
}

Outcome runtime_shape() {
  const auto spec = benchmark_spec(Family::normal, 10);
  Rng rng = make_rng(9);
  const Dataset data(generate(spec, 100'000, rng));
  auto timed = [&](Index n) {
    const auto start = Clock::now();
    GmmDensityEstimator density(data, 32, 10);
    ds_select(data, n, TargetSpec::uniform(), seeded(1), density);
    const double wall = seconds_since(start);
    return std::pair{wall, density.fit_seconds() / wall};
  };
  const auto [small_wall, small_share] = timed(1000);
  const auto [large_wall, large_share] = timed(20'000);
  const double ratio = large_wall / small_wall;
  return {ratio <= 2.0 && small_share >= 0.7 && large_share >= 0.7,
          fmt("n=1000 %.2f s (density %.0f%%), n=20000 %.2f s (density %.0f%%), ratio %.2f", small_wall,
              100 * small_share, large_wall, 100 * large_share, ratio)};
}

Outcome metric_correctness() {
  Rng rng = make_rng(10);
  std::normal_distribution<double> z(0.0, 1.0);
  double self = 0.0, asym = 0.0;
  for (int t = 0; t < 20; ++t) {
    Matrix a(30 + t, 3), b(50 - t, 3);
    for (Index i = 0; i < a.size(); ++i) a(i) = z(rng);
    for (Index i = 0; i < b.size(); ++i) b(i) = 2.0 * z(rng) + 1.0;
    self = std::max(self, std::abs(energy_distance(a, a)));
    asym = std::max(asym, std::abs(energy_distance(a, b) - energy_distance(b, a)));
  }
  Matrix zero(1, 1), pair(2, 1);
  zero << 0;
  pair << 0, 1;
  const double hand = energy_distance(zero, pair);
  return {self <= 1e-9 && hand == 0.5 && asym <= 1e-12,
          fmt("max |e(A,A)| %.1e, e({0},{0,1}) = %.17g, max asymmetry %.1e", self, hand, asym)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"exact sequence law", exact_law},
      {"degeneracy to simple random sampling", degeneracy},
      {"uniform law from true-density weights", inverse_density_uniformity},
      {"energy ordering on the normal example", energy_ordering},
      {"replicated-data robustness", replicated},
      {"low-density ratio", low_density_ratio_curve},
      {"deviation point", deviation},
      {"EM properties", em_properties},
      {"runtime shape", runtime_shape},
      {"metric correctness", metric_correctness},
  };
  std::set<int> wanted;
  for (int a = 1; a < argc; ++a) wanted.insert(std::stoi(argv[a]));

  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k + 1);
    if (!wanted.empty() && !wanted.count(id)) continue;
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << id << ". " << criteria[k].first << ": " << o.detail
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
