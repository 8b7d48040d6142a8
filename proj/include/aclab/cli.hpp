#pragma once

// Experiment orchestration behind the aclab executable.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aclab/config.hpp"
#include "aclab/grid.hpp"

namespace aclab::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,     // invalid configuration or unmet precondition
  kExitDiverged = 3,   // non-finite energy in the solver
  kExitInvariant = 4,  // a checked inequality failed
};

const std::vector<std::string>& subcommands();

struct RunResult {
  int exit_code = kExitOk;
  std::string message;                 // diagnostic for nonzero exits
  std::vector<std::string> artifacts;  // files written, in order
};

// Runs one subcommand and writes its artifacts under out_dir (created if
// needed). Never throws for experiment failures; they map to exit codes.
RunResult run(const ExperimentConfig& config, const std::string& subcommand, const std::string& out_dir);

struct BatchJob {
  ExperimentConfig config;
  std::string subcommand;
  std::string out_dir;
};

// Independent experiments on up to `jobs` threads; results in job order.
std::vector<RunResult> run_batch(const std::vector<BatchJob>& batch, unsigned jobs);

// The boundary datum of the config (or its input_field) with the interior
// initial guess.
VectorField initial_field(const ExperimentConfig& config);

// "%.17g", with "nan" / "inf" / "-inf" for non-finite values.
std::string format_number(double value);

}  // namespace aclab::cli
