#pragma once

// Ball-energy growth: profiles E(R), the annulus comparison bound and the
// exponent bootstrap.

#include <cstddef>
#include <vector>

#include "aclab/grid.hpp"
#include "aclab/potential.hpp"

namespace aclab {

struct EnergyProfile {
  std::vector<double> radii;
  std::vector<double> energies;                 // E(R) = integral of e over B_R
  std::vector<double> powers;                   // normalization exponents p
  std::vector<std::vector<double>> normalized;  // normalized[k][j] = E(R_j) / R_j^{powers[k]}
  std::vector<double> slopes;                   // d log E / d log R between consecutive radii (NaN when E = 0)
};

// Radii must increase strictly within (0, R_max]. Empty `powers` means {n - 1}.
EnergyProfile energy_profile(const VectorField& u, const PotentialSpec& spec, const std::vector<double>& radii,
                             const std::vector<double>& powers = {});

// Ball energy over B_R of the annulus competitor (a on B_{R-width}, radially
// linear up to u on the sphere of radius R). Requires width + 2h <= R <= R_max.
double comparison_bound(const VectorField& u, const PotentialSpec& spec, double R, double width = 1.0);

// gamma(k) = n - 1 - 2(n - k)/(qn + 2). Requires q >= 2, n >= 2, 0 < k <= n - 1.
double bootstrap_map(double k, int n, double q);

// beta = q(n - k)/(qn + 2). Requires q >= 2, n >= 2, 0 < k <= n.
double beta_of(double k, int n, double q);

struct FixedPointResult {
  double k = 0.0;
  std::size_t iterations = 0;
  double contraction = 0.0;  // 2/(qn + 2)
  double exact = 0.0;        // n - 1 - 2/(qn)
  std::vector<double> iterates;
};

// Iterates gamma from k0 = n - 1 until successive iterates differ by <= tol.
FixedPointResult bootstrap_fixed_point(int n, double q, double tol);

struct GrowthDiagnostic {
  std::vector<double> radii;
  std::vector<double> energies;
  std::vector<double> normalized;      // E / R^{n-1}
  std::vector<double> relative_rises;  // normalized[j+1] / normalized[j] - 1 (0 when both vanish)
  std::vector<std::size_t> violations; // steps whose rise exceeds the tolerance
  double tolerance = 0.0;
  double fitted_exponent = 0.0;        // least-squares slope of log E against log R
  double predicted_exponent = 0.0;     // n - 1 - 2/(qn)
  bool all_zero = false;
};

// Needs at least 3 radii. `rise_tolerance` is the allowed relative increase
// of E/R^{n-1} per step.
GrowthDiagnostic growth_diagnostic(const std::vector<double>& radii, const std::vector<double>& energies, int n,
                                      double q, double rise_tolerance = 0.05);

}  // namespace aclab
