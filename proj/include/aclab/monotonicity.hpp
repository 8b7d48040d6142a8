#pragma once

// Stress-energy tensor T_ij = u_{,i} . u_{,j} - delta_ij e and the
// monotonicity formulas built on it.

#include <cstddef>
#include <string>
#include <vector>

#include "aclab/grid.hpp"
#include "aclab/potential.hpp"

namespace aclab {

// Full symmetric n x n storage per node: data[(i * n + j) * node_count + node].
// Values are computed at every node from centered differences; only
// interior values are meaningful.
struct StressTensorField {
  GridPtr grid;
  int n = 2;
  std::vector<double> data;

  double at(int i, int j, std::size_t node) const noexcept {
    return data[(static_cast<std::size_t>(i) * n + j) * grid->node_count() + node];
  }
  const double* plane(int i, int j) const noexcept {
    return data.data() + (static_cast<std::size_t>(i) * n + j) * grid->node_count();
  }
};

StressTensorField stress_tensor(const VectorField& u, const PotentialSpec& spec);

// (div T)_j = sum_i d_i T_ij by centered differences on interior nodes; an
// n-component field, zero off the interior.
VectorField stress_divergence(const StressTensorField& T);

// tr T at every node.
ScalarField stress_trace(const StressTensorField& T);

// max over interior nodes of |tr T + ((n-2)/2 |grad u|^2 + n W)| / max(1, e).
double trace_identity_error(const StressTensorField& T, const VectorField& u, const PotentialSpec& spec);

// min over interior nodes of the smallest eigenvalue of T + e I (the Gram
// matrix of grad u).
double positivity_check(const StressTensorField& T, const VectorField& u, const PotentialSpec& spec);

struct PohozaevBalance {
  double R = 0.0;
  double volume = 0.0;         // integral of tr T over B_R
  double boundary = 0.0;       // R * integral of nu . T nu over the sphere
  double gap = 0.0;            // boundary + R * integral of e: R * integral of (d_nu u)^2 >= 0
  double balance_error = 0.0;  // |volume - boundary|
  std::size_t samples = 0;
};

// Requires R + h <= R_max. K = 0 picks default_sphere_samples.
PohozaevBalance pohozaev_balance(const VectorField& u, const PotentialSpec& spec, double R, std::size_t K = 0);

struct MonotoneViolation {
  std::string sequence;  // "weak", "strong" or "classical"
  std::size_t step = 0;  // between radii[step] and radii[step + 1]
  double drop = 0.0;     // value[step] - value[step + 1] (> tolerance)
};

struct MonotonicityOptions {
  double residual_tol = 1e-6;  // u must solve the equation to this residual
  double c_m = 0.05;           // per-step tolerance delta_m = c_m * h
};

struct MonotonicityReport {
  std::vector<double> radii;
  std::vector<double> f;             // integral over B_R of (n-2)/2 |grad u|^2 + n W
  std::vector<double> f_gradient;    // gradient part of f
  std::vector<double> f_potential;   // potential part of f
  std::vector<double> E;             // integral over B_R of e
  std::vector<double> weak;          // R^{2-n} f
  std::vector<double> strong;        // R^{1-n} f
  std::vector<double> classical;     // R^{1-n} E
  std::vector<MonotoneViolation> violations;
  double modica = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;            // delta_m
  bool strong_checked = false;       // Modica bound held within delta_m
  bool weak_ok = true;
  bool strong_ok = true;
  bool classical_ok = true;
};

// Throws NotASolution when el_residual(u) exceeds options.residual_tol.
// Radii must be strictly increasing within (0, R_max].
MonotonicityReport monotone_quantities(const VectorField& u, const PotentialSpec& spec, const std::vector<double>& radii,
                                       const MonotonicityOptions& options = {});

}  // namespace aclab
