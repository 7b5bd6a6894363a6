#pragma once

#include "dsub/sampler.hpp"
#include "dsub/synth.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace dsub {

enum class Method { uniform_ref, random, ds, fps, fps16 };
enum class MetricKind { energy, ratio };

std::string method_name(Method method);

/// One comparison grid: fresh data per replicate, Omega from the true
/// density, then each method evaluated at each subsample size.
///
/// Energy curves run every (method, n) separately and score the selected
/// rows that fall inside Omega against a uniform reference over Omega.
/// Ratio curves run each method once at the largest n and read the
/// low-density ratio off the prefixes, so every curve is nondecreasing.
struct ExperimentSetup {
  std::string name;
  DistributionSpec distribution;
  Index rows = 10'000;
  Index copies = 1;  // rows / copies unique points, each repeated `copies` times
  std::vector<Index> sizes;
  MetricKind metric = MetricKind::energy;
  double coverage = 0.99;
  std::vector<Method> methods;
  Index replicates = 50;
  std::uint64_t seed = 1;
  SamplerConfig sampler;
  Index reference_size = 0;  // 0: same as rows
  Index workers = 0;         // 0: DSUB_WORKERS or hardware concurrency
};

struct Curve {
  Method method = Method::ds;
  std::vector<Index> sizes;
  std::vector<double> mean;
  std::vector<double> std_error;
  std::vector<Index> valid;  // replicates contributing at each size
};

/// Runs the grid. Replicate r draws everything from streams derived from
/// (seed, r), so results do not depend on the worker count.
std::vector<Curve> run_experiment(const ExperimentSetup& setup);

/// Named presets; throws listing the known names on an unknown one.
ExperimentSetup experiment_preset(std::string_view name);
std::vector<std::string> experiment_preset_names();

/// Worker count from DSUB_WORKERS, else hardware concurrency (at least 1).
Index default_workers();

}  // namespace dsub
