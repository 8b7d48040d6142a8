#pragma once

// Experiment configuration: one YAML document per experiment.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aclab/potential.hpp"

namespace aclab {

struct PotentialBlock {
  std::string family = "quadratic";
  std::vector<double> a;       // empty means the origin
  double q = 2.0;              // power-q exponent
  std::vector<double> coeffs;  // anisotropic-power
  std::vector<int> powers;     // anisotropic-power
  double scale = 1.0;
  std::optional<PotentialConstants> constants;

  bool operator==(const PotentialBlock&) const = default;
};

struct BoundaryBlock {
  std::string tag = "constant-a";  // constant-a | radial-profile | angular | random-seeded
  double amplitude = 1.0;          // |g - a| (angular, radial-profile) or its maximum (random-seeded)
  int winding = 1;                 // angular frequency
  int modes = 4;                   // random-seeded band limit

  bool operator==(const BoundaryBlock&) const = default;
};

struct SolverBlock {
  double tol = 1e-6;
  std::uint64_t max_iter = 200000;

  bool operator==(const SolverBlock&) const = default;
};

struct AnalysisBlock {
  std::vector<double> radii;   // profile / monotonicity radii; empty means a default schedule
  std::vector<double> powers;  // extra normalizations for energy profiles
  double tau = 0.0;            // E / R^{n-1-tau} column; 0 means half of 2/(qn)
  double eps = 0.01;
  double alpha = 1.0;
  double slice_R = 0.0;        // R of the good-radius search; 0 means the largest admissible
  std::uint64_t radius_samples = 16;
  std::uint64_t sphere_samples = 0;  // 0 means resolution-based
  double r = 0.0;              // truncation / maximum-principle radius; 0 means automatic
  double S = 0.0;              // annulus radius; 0 means R_max
  double width = 1.0;          // annulus width
  double d = 0.0;              // min-truncation offset above a
  std::vector<std::string> competitors;  // empty means every applicable kind
  double delta_q_base = 1e-8;
  double delta_q_coeff = 1e-3;
  double c_m = 0.05;
  double rise_tolerance = 0.05;
  double bootstrap_tol = 1e-14;
  std::uint64_t verify_samples = 200;
  double box = 2.0;

  bool operator==(const AnalysisBlock&) const = default;
};

struct ExperimentConfig {
  int n = 2;
  int m = 1;
  double h = 0.1;
  double R_max = 4.0;
  std::uint64_t seed = 0;
  PotentialBlock potential;
  BoundaryBlock boundary;
  SolverBlock solver;
  AnalysisBlock analysis;
  std::string input_field;  // optional precomputed field
  std::string output = ".";

  bool operator==(const ExperimentConfig&) const = default;
};

// Parse and validate; ConfigError carries the 1-based line of the problem.
ExperimentConfig parse_config(const std::string& yaml_text);
ExperimentConfig load_config(const std::string& path);

// Canonical YAML (every key, 17 significant digits). parse_config of the
// result reproduces the config exactly.
std::string to_yaml(const ExperimentConfig& config);

// FNV-1a 64 of the canonical YAML, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

// Throws ConfigError (line 0) on inconsistent values.
void validate(const ExperimentConfig& config);

PotentialSpec make_potential(const ExperimentConfig& config);

}  // namespace aclab
