// dsub: diversity subsampling from the command line.
//
//   dsub synth      --dist normal --dim 2 --rows 10000 --seed 1 --out data.csv
//   dsub subsample  --input data.csv --n 520 --seed 7 --out idx.txt --manifest run.json
//   dsub evaluate   --data data.csv --indices idx.txt --dist normal
//   dsub experiment --preset fig4-normal-2d --replicates 50 --out-dir curves
//   dsub density    --input data.csv --out model.json

#include "dsub/commands.hpp"
#include "dsub/experiment.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Diversity subsampling: select rows that spread evenly over a dataset's support"};
  app.require_subcommand(1);

  dsub::SubsampleOptions sub;
  std::string from_manifest;
  auto* subsample = app.add_subcommand("subsample", "Select a subsample and write its row indices");
  subsample->add_option("--input", sub.input, "CSV with a header row");
  subsample->add_option("--n", sub.n, "Subsample size");
  subsample->add_option("--mode", sub.mode, "ds | ds-wr | random | fps")->capture_default_str();
  subsample->add_option("--target", sub.target_file, "File of per-row target values (default uniform)");
  subsample->add_option("--components", sub.components, "GMM components")->capture_default_str();
  subsample->add_option("--niter", sub.niter, "EM sweeps for the initial fit")->capture_default_str();
  subsample->add_option("--updates", sub.updates, "U: density refits over the run")->capture_default_str();
  subsample->add_option("--splits", sub.splits, "Blocks for fps mode")->capture_default_str();
  subsample->add_option("--seed", sub.seed, "RNG seed")->capture_default_str();
  subsample->add_option("--out", sub.output, "Index file to write");
  subsample->add_option("--manifest", sub.manifest, "Run manifest (JSON) to write");
  subsample->add_flag("--one-based", sub.one_based, "Write 1-based indices");
  subsample->add_option("--from-manifest", from_manifest, "Rerun the configuration stored in a manifest");

  dsub::EvaluateOptions eval;
  double coverage = 0.0;
  double eval_p = 0.0;
  auto* evaluate = app.add_subcommand("evaluate", "Energy distance, low-density ratio and deviation point");
  evaluate->add_option("--data", eval.data, "Data CSV")->required();
  evaluate->add_option("--indices", eval.indices, "Index file")->required();
  evaluate->add_flag("--one-based", eval.one_based, "Index file is 1-based");
  evaluate->add_option("--dist", eval.distribution, "True distribution (default: GMM estimate)");
  auto* eval_p_opt = evaluate->add_option("--p", eval_p, "Geometric p");
  auto* coverage_opt = evaluate->add_option("--coverage", coverage, "Share of data inside Omega");
  evaluate->add_option("--reference-size", eval.reference_size, "Uniform reference size (default N)");
  evaluate->add_option("--seed", eval.seed, "RNG seed")->capture_default_str();
  evaluate->add_option("--out", eval.output, "Write the table here as well as stdout");

  dsub::ExperimentOptions exp;
  auto* experiment = app.add_subcommand("experiment", "Run a comparison preset and write curve files");
  experiment->add_option("--preset", exp.preset, "Preset name (see --list)");
  experiment->add_option("--replicates", exp.replicates, "Replicates")->capture_default_str();
  experiment->add_option("--seed", exp.seed, "RNG seed")->capture_default_str();
  experiment->add_option("--out-dir", exp.out_dir, "Output directory")->capture_default_str();
  experiment->add_option("--workers", exp.workers, "Worker threads (default DSUB_WORKERS or all cores)");
  bool list_presets = false;
  experiment->add_flag("--list", list_presets, "Print preset names and exit");

  dsub::SynthOptions syn;
  double synth_p = 0.0;
  auto* synth = app.add_subcommand("synth", "Generate a benchmark dataset");
  synth->add_option("--dist", syn.distribution, "normal | gamma | exponential | geometric | mgm")
      ->capture_default_str();
  synth->add_option("--dim", syn.dim, "Dimension")->capture_default_str();
  synth->add_option("--rows", syn.rows, "Total rows")->capture_default_str();
  auto* synth_p_opt = synth->add_option("--p", synth_p, "Geometric p");
  synth->add_option("--copies", syn.copies, "Replicate rows/copies unique points this many times")
      ->capture_default_str();
  synth->add_option("--seed", syn.seed, "RNG seed")->capture_default_str();
  synth->add_option("--out", syn.output, "CSV to write")->required();

  dsub::DensityOptions den;
  auto* density = app.add_subcommand("density", "Fit a diagonal GMM and write it as JSON");
  density->add_option("--input", den.input, "Data CSV")->required();
  density->add_option("--components", den.components, "GMM components")->capture_default_str();
  density->add_option("--niter", den.niter, "EM sweeps")->capture_default_str();
  density->add_option("--seed", den.seed, "RNG seed")->capture_default_str();
  density->add_flag("--standardize", den.standardize, "Fit on min-max standardized data");
  density->add_option("--out", den.output, "Model JSON to write (default stdout)");
  density->add_option("--grid", den.grid, "Also evaluate on a grid x grid lattice (2-D only)");
  density->add_option("--grid-out", den.grid_output, "Grid CSV to write");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*subsample) {
      if (!from_manifest.empty()) {
        std::ifstream in(from_manifest);
        if (!in) throw dsub::Error("cannot open '" + from_manifest + "'");
        sub = dsub::options_from_manifest(nlohmann::json::parse(in));
      }
      dsub::cmd_subsample(sub);
    } else if (*evaluate) {
      if (*coverage_opt) eval.coverage = coverage;
      if (*eval_p_opt) eval.geometric_p = eval_p;
      std::cout << dsub::cmd_evaluate(eval);
    } else if (*experiment) {
      if (list_presets) {
        for (const auto& name : dsub::experiment_preset_names()) std::cout << name << '\n';
        return 0;
      }
      if (exp.preset.empty()) throw dsub::Error("experiment: --preset is required");
      std::cout << dsub::cmd_experiment(exp);
    } else if (*synth) {
      if (*synth_p_opt) syn.geometric_p = synth_p;
      dsub::cmd_synth(syn);
    } else if (*density) {
      const auto j = dsub::cmd_density(den);
      if (den.output.empty()) std::cout << j.dump(2) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "dsub: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
