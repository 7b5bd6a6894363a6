#pragma once

// The work behind each `dsub` subcommand, callable in-process.

#include "dsub/types.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace dsub {

struct SubsampleOptions {
  std::string input;
  Index n = 0;
  std::string mode = "ds";  // ds | ds-wr | random | fps
  std::string target_file;  // empty: uniform target
  Index components = 32;
  int niter = 10;
  int updates = 10;
  Index splits = 1;
  std::uint64_t seed = 0;
  std::string output;
  std::string manifest;  // empty: none written
  bool one_based = false;
};

/// Selects rows and writes the index file (and manifest when requested).
/// Returns the manifest content.
nlohmann::json cmd_subsample(const SubsampleOptions& options);

/// Rebuilds the options recorded in a manifest.
SubsampleOptions options_from_manifest(const nlohmann::json& manifest);

struct EvaluateOptions {
  std::string data;
  std::string indices;
  bool one_based = false;
  std::string distribution;  // empty: estimate the density with a GMM
  std::optional<double> geometric_p;
  std::optional<double> coverage;  // default 0.99 for q <= 2, 0.999 otherwise
  Index reference_size = 0;        // 0: number of data rows
  std::uint64_t seed = 0;
  Index components = 32;
  int niter = 10;
  std::string output;  // empty: returned only
};

/// metric,value table with the subsample size, in-Omega count, energy
/// distance, low-density ratio ("NA" when Omega's complement is empty),
/// deviation point, delta and |Omega|.
std::string cmd_evaluate(const EvaluateOptions& options);

struct ExperimentOptions {
  std::string preset;
  Index replicates = 50;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  Index workers = 0;
};

/// Writes one `<preset>__<method>.csv` (n,mean,std_error) per method and
/// returns the paths written, newline separated.
std::string cmd_experiment(const ExperimentOptions& options);

struct SynthOptions {
  std::string distribution = "normal";
  Index dim = 2;
  Index rows = 10'000;
  std::optional<double> geometric_p;
  Index copies = 1;
  std::uint64_t seed = 0;
  std::string output;
};

void cmd_synth(const SynthOptions& options);

struct DensityOptions {
  std::string input;
  Index components = 32;
  int niter = 10;
  std::uint64_t seed = 0;
  bool standardize = false;
  std::string output;       // model json
  Index grid = 0;           // > 0: also evaluate on a grid x grid lattice (2-D data)
  std::string grid_output;  // x,y,density csv
};

nlohmann::json cmd_density(const DensityOptions& options);

}  // namespace dsub
