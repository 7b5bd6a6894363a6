#include "dsub/commands.hpp"

#include "dsub/baselines.hpp"
#include "dsub/data.hpp"
#include "dsub/experiment.hpp"
#include "dsub/gmm.hpp"
#include "dsub/io.hpp"
#include "dsub/metrics.hpp"
#include "dsub/sampler.hpp"
#include "dsub/synth.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace dsub {

namespace {

std::string format_number(double v) {
  std::ostringstream out;
  out << std::setprecision(10) << v;
  return out.str();
}

Dataset load_dataset(const std::string& path) { return Dataset(read_csv(path).values); }

}  // namespace

nlohmann::json cmd_subsample(const SubsampleOptions& o) {
  const auto start = std::chrono::steady_clock::now();
  if (o.input.empty()) throw Error("subsample: --input is required");
  if (o.output.empty()) throw Error("subsample: --out is required");
  const Dataset data = load_dataset(o.input);

  nlohmann::json manifest;
  std::vector<Index> indices;
  if (o.mode == "ds" || o.mode == "ds-wr") {
    const TargetSpec target =
        o.target_file.empty() ? TargetSpec::uniform() : TargetSpec::per_point(read_values(o.target_file));
    SamplerConfig cfg;
    cfg.components = o.components;
    cfg.niter = o.niter;
    cfg.updates = o.updates;
    cfg.seed = o.seed;
    const SubsampleResult result =
        o.mode == "ds" ? ds_select(data, o.n, target, cfg) : ds_wr_select(data, o.n, target, cfg);
    indices = result.indices;
    manifest["sigma_p"] = result.sigma_p ? nlohmann::json(*result.sigma_p) : nlohmann::json(nullptr);
    manifest["update_checkpoints"] = result.update_checkpoints;
    manifest["density_seconds"] = result.density_seconds;
  } else if (o.mode == "random") {
    Rng rng = make_rng(o.seed);
    indices = random_subsample(data.rows(), o.n, rng);
  } else if (o.mode == "fps") {
    Rng rng = make_rng(o.seed);
    indices = farthest_point_subsample(data.points(), o.n, o.splits, rng);
  } else {
    throw Error("unknown mode '" + o.mode + "' (expected ds, ds-wr, random or fps)");
  }
  write_indices(o.output, indices, o.one_based);

  manifest["input"] = o.input;
  manifest["rows"] = data.rows();
  manifest["cols"] = data.cols();
  manifest["n"] = o.n;
  manifest["mode"] = o.mode;
  manifest["target_file"] = o.target_file;
  manifest["components"] = o.components;
  manifest["niter"] = o.niter;
  manifest["updates"] = o.updates;
  manifest["splits"] = o.splits;
  manifest["seed"] = o.seed;
  manifest["output"] = o.output;
  manifest["one_based"] = o.one_based;
  manifest["wall_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.manifest.empty()) {
    std::ofstream out(o.manifest);
    if (!out) throw Error("cannot open '" + o.manifest + "' for writing");
    out << manifest.dump(2) << '\n';
  }
  return manifest;
}

SubsampleOptions options_from_manifest(const nlohmann::json& m) {
  SubsampleOptions o;
  o.input = m.at("input").get<std::string>();
  o.n = m.at("n").get<Index>();
  o.mode = m.at("mode").get<std::string>();
  o.target_file = m.value("target_file", std::string{});
  o.components = m.value("components", o.components);
  o.niter = m.value("niter", o.niter);
  o.updates = m.value("updates", o.updates);
  o.splits = m.value("splits", o.splits);
  o.seed = m.at("seed").get<std::uint64_t>();
  o.output = m.at("output").get<std::string>();
  o.one_based = m.value("one_based", false);
  return o;
}

std::string cmd_evaluate(const EvaluateOptions& o) {
  const Dataset data = load_dataset(o.data);
  const std::vector<Index> selected = read_indices(o.indices, o.one_based);
  for (Index i : selected) {
    if (i >= data.rows()) {
      throw Error("index " + std::to_string(i + (o.one_based ? 1 : 0)) + " out of range for " +
                  std::to_string(data.rows()) + " rows");
    }
  }
  const double coverage = o.coverage.value_or(data.cols() <= 2 ? 0.99 : 0.999);
  Rng rng = make_rng(o.seed);

  OmegaRegion omega;
  if (!o.distribution.empty()) {
    DistributionSpec spec = benchmark_spec(parse_family(o.distribution), data.cols());
    if (o.geometric_p) spec.geometric_p = *o.geometric_p;
    omega = build_omega(spec, data.points(), coverage, rng);
  } else {
    const auto model = gmm_fit(data.points(), std::min(o.components, data.rows()), o.niter, rng);
    omega = build_omega(density_function(model), data.points(), coverage, rng);
  }

  const Matrix inside = rows_in_omega(data.points(), selected, omega);
  std::string energy = "NA";
  if (inside.rows() > 0) {
    const EnergyReference reference(
        uniform_reference(omega, o.reference_size > 0 ? o.reference_size : data.rows(), rng));
    energy = format_number(reference.distance(inside));
  }
  std::string ratio = "NA";
  const std::vector<bool> outside = outside_mask(data.points(), omega);
  if (std::find(outside.begin(), outside.end(), true) != outside.end()) {
    ratio = format_number(low_density_ratio(selected, outside));
  }
  const DeviationPoint dev = deviation_point(omega, data.rows());

  std::ostringstream table;
  table << "metric,value\n"
        << "subsample_size," << selected.size() << '\n'
        << "inside_omega," << inside.rows() << '\n'
        << "energy_distance," << energy << '\n'
        << "low_density_ratio," << ratio << '\n'
        << "deviation_point," << format_number(dev.total) << '\n'
        << "deviation_point_in_omega," << format_number(dev.in_omega) << '\n'
        << "delta," << format_number(omega.delta) << '\n'
        << "omega_volume," << format_number(omega.volume) << '\n';
  if (!o.output.empty()) {
    std::ofstream out(o.output);
    if (!out) throw Error("cannot open '" + o.output + "' for writing");
    out << table.str();
  }
  return table.str();
}

std::string cmd_experiment(const ExperimentOptions& o) {
  ExperimentSetup setup = experiment_preset(o.preset);
  setup.replicates = o.replicates;
  setup.seed = o.seed;
  setup.workers = o.workers;
  const auto curves = run_experiment(setup);

  std::filesystem::create_directories(o.out_dir);
  std::string written;
  for (const auto& c : curves) {
    const auto path = (std::filesystem::path(o.out_dir) / (o.preset + "__" + method_name(c.method) + ".csv")).string();
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << "n,mean,std_error\n" << std::setprecision(10);
    for (std::size_t k = 0; k < c.sizes.size(); ++k) {
      out << c.sizes[k] << ',' << c.mean[k] << ',' << c.std_error[k] << '\n';
    }
    written += path + '\n';
  }
  return written;
}

void cmd_synth(const SynthOptions& o) {
  if (o.output.empty()) throw Error("synth: --out is required");
  if (o.copies < 1 || o.rows % o.copies != 0) throw Error("synth: rows must be a multiple of copies");
  DistributionSpec spec = benchmark_spec(parse_family(o.distribution), o.dim);
  if (o.geometric_p) spec.geometric_p = *o.geometric_p;
  Rng rng = make_rng(o.seed);
  Table table;
  for (Index j = 0; j < o.dim; ++j) table.header.push_back("x" + std::to_string(j + 1));
  table.values = replicate_rows(generate(spec, o.rows / o.copies, rng), o.copies);
  write_csv(o.output, table);
}

nlohmann::json cmd_density(const DensityOptions& o) {
  const Dataset data = load_dataset(o.input);
  Matrix points = data.points();
  nlohmann::json j;
  if (o.standardize) {
    const StandardizedDataset s = standardize(data);
    points = s.points;
    j["standardize_min"] = std::vector<double>(s.min.data(), s.min.data() + s.min.size());
    j["standardize_range"] = std::vector<double>(s.range.data(), s.range.data() + s.range.size());
  }
  Rng rng = make_rng(o.seed);
  const auto model = gmm_fit(points, std::min(o.components, points.rows()), o.niter, rng);
  j["model"] = to_json(model);
  j["log_likelihood"] = gmm_log_likelihood(points, model);
  if (!o.output.empty()) {
    std::ofstream out(o.output);
    if (!out) throw Error("cannot open '" + o.output + "' for writing");
    out << j.dump(2) << '\n';
  }
  if (o.grid > 0) {
    if (points.cols() != 2) throw Error("density grid output needs 2-column data");
    if (o.grid_output.empty()) throw Error("density: --grid-out is required with --grid");
    const Vector lo = points.colwise().minCoeff().transpose();
    const Vector hi = points.colwise().maxCoeff().transpose();
    Table grid;
    grid.header = {"x", "y", "density"};
    grid.values.resize(o.grid * o.grid, 3);
    const double steps = o.grid > 1 ? static_cast<double>(o.grid - 1) : 1.0;
    for (Index a = 0; a < o.grid; ++a) {
      for (Index b = 0; b < o.grid; ++b) {
        const Index r = a * o.grid + b;
        grid.values(r, 0) = lo(0) + (hi(0) - lo(0)) * static_cast<double>(a) / steps;
        grid.values(r, 1) = lo(1) + (hi(1) - lo(1)) * static_cast<double>(b) / steps;
      }
    }
    grid.values.col(2) = gmm_density(model, grid.values.leftCols(2));
    write_csv(o.grid_output, grid);
  }
  return j;
}

}  // namespace dsub
