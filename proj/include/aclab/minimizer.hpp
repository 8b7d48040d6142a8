#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "aclab/grid.hpp"
#include "aclab/potential.hpp"

namespace aclab {

// Discrete energy
//   E_h(u) = h^n sum_{interior p} W(u_p) + 1/2 h^{n-2} sum_{edges e} |u_{e+} - u_{e-}|^2,
// summing over grid edges with at least one interior end. Its gradient is
// h^n (grad W(u) - Lap_h u) on interior nodes and zero elsewhere, so
// stationary points are exactly the discrete solutions of Lap u = grad W(u).
double discrete_energy(const VectorField& u, const PotentialSpec& spec);

// E_h(v) - E_h(u), evaluated term by term so that small changes are not
// lost to cancellation. u and v must share the grid.
double discrete_energy_change(const VectorField& u, const VectorField& v, const PotentialSpec& spec);

VectorField discrete_energy_gradient(const VectorField& u, const PotentialSpec& spec);

// Per-node Lap_h u - grad W(u) on interior nodes, zero elsewhere.
VectorField el_residual_field(const VectorField& u, const PotentialSpec& spec);

// sup over interior nodes of |Lap_h u - grad W(u)|.
double el_residual(const VectorField& u, const PotentialSpec& spec);

// max over interior nodes of 1/2 |grad u|^2 - W(u) (centered differences).
double modica_check(const VectorField& u, const PotentialSpec& spec);

struct MinimizerOptions {
  double armijo_c = 1e-4;
  int max_backtracks = 60;
  double step_max = 1e12;           // in units of the initial step
  std::size_t trace_every = 100;    // energy trace sampling
};

struct SolveReport {
  std::size_t iterations = 0;
  double initial_energy = 0.0;
  double energy = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool converged = false;
  bool monotone = true;            // every accepted step lowered the energy
  std::string stop_reason;         // "tolerance", "max_iter", "line_search"
  double step_min = 0.0;
  double step_max = 0.0;
  double step_geometric_mean = 0.0;
  std::size_t backtracks = 0;
  std::size_t bb_fallbacks = 0;    // steps where the BB quotient was unusable
  std::vector<std::size_t> trace_iterations;
  std::vector<double> trace_energies;
  double wall_seconds = 0.0;
};

struct SolveResult {
  VectorField u;
  SolveReport report;
};

// Steepest descent with Barzilai-Borwein steps and an Armijo backtracking
// safeguard. Interior values of u0 are the initial guess; every other node is
// held fixed. Stops when el_residual <= tol or after max_iter iterations.
// Throws DivergedError when the energy becomes non-finite.
SolveResult minimize(const VectorField& u0, const PotentialSpec& spec, double tol, std::size_t max_iter,
                     const MinimizerOptions& options = {});

}  // namespace aclab
