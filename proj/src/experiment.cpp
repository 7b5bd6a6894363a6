#include "dsub/experiment.hpp"

#include "dsub/baselines.hpp"
#include "dsub/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <span>
#include <thread>

namespace dsub {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
constexpr Index kOmegaVolumeSamples = 200'000;

// Stream layout per replicate: 0 data, 1 omega, 2 reference, then one
// stream per (method, size) cell.
std::uint64_t stream_id(Index replicate, Index slot) {
  return static_cast<std::uint64_t>(replicate) * 1'000'003ull + static_cast<std::uint64_t>(slot);
}

std::vector<Index> run_method(Method method, const Dataset& data, Index n, const SamplerConfig& base,
                              std::uint64_t seed) {
  Rng rng = make_rng(seed);
  switch (method) {
    case Method::random: return random_subsample(data.rows(), n, rng);
    case Method::fps: return farthest_point_subsample(data.points(), n, 1, rng);
    case Method::fps16: return farthest_point_subsample(data.points(), n, 16, rng);
    case Method::ds: {
      SamplerConfig cfg = base;
      cfg.seed = seed;
      return ds_select(data, n, TargetSpec::uniform(), cfg).indices;
    }
    case Method::uniform_ref: break;
  }
  throw Error("method does not select rows from the data");
}

// values[method][size]
using ReplicateValues = std::vector<std::vector<double>>;

ReplicateValues run_replicate(const ExperimentSetup& s, Index r) {
  Rng data_rng = make_rng(s.seed, stream_id(r, 0));
  const Index unique = s.rows / s.copies;
  const Dataset data(replicate_rows(generate(s.distribution, unique, data_rng), s.copies));

  Rng omega_rng = make_rng(s.seed, stream_id(r, 1));
  OmegaOptions options;
  options.volume_samples = kOmegaVolumeSamples;
  const OmegaRegion omega = build_omega(s.distribution, data.points(), s.coverage, omega_rng, options);

  ReplicateValues values(s.methods.size(), std::vector<double>(s.sizes.size(), kMissing));
  const Index max_n = *std::max_element(s.sizes.begin(), s.sizes.end());

  if (s.metric == MetricKind::ratio) {
    const std::vector<bool> outside = outside_mask(data.points(), omega);
    if (std::find(outside.begin(), outside.end(), true) == outside.end()) return values;
    for (std::size_t m = 0; m < s.methods.size(); ++m) {
      if (s.methods[m] == Method::uniform_ref) continue;
      const std::uint64_t seed = make_rng(s.seed, stream_id(r, 3 + static_cast<Index>(m)))();
      const auto picked = run_method(s.methods[m], data, max_n, s.sampler, seed);
      for (std::size_t k = 0; k < s.sizes.size(); ++k) {
        const auto prefix = std::span<const Index>(picked).first(static_cast<std::size_t>(s.sizes[k]));
        values[m][k] = low_density_ratio(prefix, outside);
      }
    }
    return values;
  }

  Rng ref_rng = make_rng(s.seed, stream_id(r, 2));
  const EnergyReference reference(
      uniform_reference(omega, s.reference_size > 0 ? s.reference_size : s.rows, ref_rng));
  for (std::size_t m = 0; m < s.methods.size(); ++m) {
    for (std::size_t k = 0; k < s.sizes.size(); ++k) {
      const Index slot = 3 + static_cast<Index>(m * s.sizes.size() + k);
      const std::uint64_t seed = make_rng(s.seed, stream_id(r, slot))();
      const Index n = s.sizes[k];
      if (s.methods[m] == Method::uniform_ref) {
        Rng rng = make_rng(seed);
        values[m][k] = reference.distance(uniform_reference(omega, n, rng));
        continue;
      }
      const auto picked = run_method(s.methods[m], data, n, s.sampler, seed);
      const Matrix inside = rows_in_omega(data.points(), picked, omega);
      if (inside.rows() > 0) values[m][k] = reference.distance(inside);
    }
  }
  return values;
}

std::vector<Index> grid(Index first, Index step, Index last) {
  std::vector<Index> out;
  for (Index n = first; n <= last; n += step) out.push_back(n);
  return out;
}

}  // namespace

std::string method_name(Method method) {
  switch (method) {
    case Method::uniform_ref: return "uniform-ref";
    case Method::random: return "random";
    case Method::ds: return "ds";
    case Method::fps: return "fps";
    case Method::fps16: return "fps16";
  }
  return "unknown";
}

Index default_workers() {
  if (const char* env = std::getenv("DSUB_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<Index>(v);
  }
  return std::max<Index>(1, static_cast<Index>(std::thread::hardware_concurrency()));
}

std::vector<Curve> run_experiment(const ExperimentSetup& setup) {
  if (setup.sizes.empty()) throw Error("experiment has no subsample sizes");
  if (setup.methods.empty()) throw Error("experiment has no methods");
  if (setup.replicates < 1) throw Error("replicates must be >= 1");
  if (setup.copies < 1 || setup.rows / setup.copies < 1) throw Error("invalid replication factor");
  for (Index n : setup.sizes) {
    if (n < 1 || n > setup.rows) throw Error("subsample size " + std::to_string(n) + " out of range");
  }

  std::vector<ReplicateValues> results(static_cast<std::size_t>(setup.replicates));
  const Index workers = std::min(setup.workers > 0 ? setup.workers : default_workers(), setup.replicates);
  std::atomic<Index> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (Index r = next++; r < setup.replicates; r = next++) {
      try {
        results[static_cast<std::size_t>(r)] = run_replicate(setup, r);
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (Index w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<Curve> curves;
  for (std::size_t m = 0; m < setup.methods.size(); ++m) {
    if (setup.metric == MetricKind::ratio && setup.methods[m] == Method::uniform_ref) continue;
    Curve c;
    c.method = setup.methods[m];
    c.sizes = setup.sizes;
    for (std::size_t k = 0; k < setup.sizes.size(); ++k) {
      double sum = 0.0;
      double sum_sq = 0.0;
      Index count = 0;
      for (const auto& rep : results) {
        const double v = rep[m][k];
        if (std::isnan(v)) continue;
        sum += v;
        sum_sq += v * v;
        ++count;
      }
      const double mean = count > 0 ? sum / static_cast<double>(count) : kMissing;
      double se = count > 0 ? 0.0 : kMissing;
      if (count > 1) {
        const double var = std::max(0.0, (sum_sq - static_cast<double>(count) * mean * mean) /
                                             static_cast<double>(count - 1));
        se = std::sqrt(var / static_cast<double>(count));
      }
      c.mean.push_back(mean);
      c.std_error.push_back(se);
      c.valid.push_back(count);
    }
    curves.push_back(std::move(c));
  }
  return curves;
}

std::vector<std::string> experiment_preset_names() {
  std::vector<std::string> names;
  const Family all[] = {Family::normal, Family::gamma, Family::exponential, Family::geometric, Family::mgm};
  for (const char* q : {"2d", "10d"}) {
    for (Family f : all) names.push_back("fig4-" + family_name(f) + "-" + q);
    for (Family f : all) {
      if (f != Family::geometric) names.push_back("fig5-replicated-" + family_name(f) + "-" + q);
    }
    for (Family f : all) names.push_back("figC-ratios-" + family_name(f) + "-" + q);
    for (Family f : all) {
      if (f != Family::geometric) names.push_back("figC-ratios-replicated-" + family_name(f) + "-" + q);
    }
  }
  names.emplace_back("fig5-replicated");
  names.emplace_back("figC-ratios");
  return names;
}

ExperimentSetup experiment_preset(std::string_view name) {
  std::string key(name);
  if (key == "fig5-replicated") key = "fig5-replicated-normal-2d";
  if (key == "figC-ratios") key = "figC-ratios-normal-2d";

  const auto known = experiment_preset_names();
  if (std::find(known.begin(), known.end(), key) == known.end()) {
    std::string list;
    for (const auto& n : known) list += (list.empty() ? "" : ", ") + n;
    throw Error("unknown preset '" + std::string(name) + "'; known presets: " + list);
  }

  ExperimentSetup s;
  s.name = std::string(name);
  const bool ten = key.ends_with("-10d");
  const auto dash = key.rfind('-');
  const auto family_start = key.rfind('-', dash - 1) + 1;
  const Family family = parse_family(key.substr(family_start, dash - family_start));
  s.distribution = benchmark_spec(family, ten ? 10 : 2);
  s.rows = ten ? 100'000 : 10'000;
  s.coverage = ten ? 0.999 : 0.99;
  s.sizes = ten ? grid(200, 700, 6500) : grid(20, 500, 4020);
  s.copies = key.find("replicated") != std::string::npos ? 5 : 1;
  if (key.starts_with("figC")) {
    s.metric = MetricKind::ratio;
    s.methods = {Method::random, Method::ds, Method::fps, Method::fps16};
  } else {
    s.metric = MetricKind::energy;
    s.methods = {Method::uniform_ref, Method::random, Method::ds, Method::fps, Method::fps16};
  }
  return s;
}

}  // namespace dsub
