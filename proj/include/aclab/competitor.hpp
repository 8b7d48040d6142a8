#pragma once

// Competitor constructions with the same boundary data as u, and the energy
// comparisons a minimizer must win.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aclab/grid.hpp"
#include "aclab/minimizer.hpp"
#include "aclab/potential.hpp"

namespace aclab {

enum class CompetitorKind { Annulus, Truncation, MinTruncation, ConstantShell };

std::string_view to_string(CompetitorKind kind);
CompetitorKind competitor_kind_from_string(std::string_view tag);

// Quadrature slack for energy comparisons: base + coeff * h^2 * |B_{R_max}|.
double quadrature_slack(const Grid& grid, double base = 1e-8, double coeff = 1e-3);

// u = a on B_{S-w}, u linear in |x| from a to u(S theta) on the shell
// S - w < |x| <= S, u unchanged outside B_S. u(S theta) is interpolated on
// the sphere. Requires w + 2h <= S <= R_max.
VectorField build_annulus_competitor(const VectorField& u, const PotentialSpec& spec, double S, double width = 1.0);

// 1 for tau <= r, (2r - tau)/r on [r, 2r], 0 beyond. Requires r > 0.
double truncation_alpha(double tau, double r);

// a + min(rho, r) alpha(rho) nu with rho = |u - a|, nu = (u - a)/rho; nodes
// with rho <= r are copied bit for bit, rho = 0 maps to a. Requires
// 0 < r < r0 / 2.
VectorField build_truncation(const VectorField& u, std::span<const double> a, double r, double r0);

// a + r nu wherever rho > 0 (a where rho = 0).
VectorField build_constant_shell(const VectorField& u, std::span<const double> a, double r);

// Pointwise min(u, level); m = 1 only (Unsupported otherwise).
VectorField build_min_truncation(const VectorField& u, double level);

// Leftmost minimizer of W over a uniform 10^4-point scan of [a + d, max u]
// (max over interior nodes). m = 1 only; throws InvalidArgument when the
// interval is empty.
double select_truncation_level(const VectorField& u, double a, double d, const PotentialSpec& spec);

// Edge-wise split of discrete_energy using
//   |u_q - u_p|^2 = (rho_q - rho_p)^2 + rho_p rho_q |nu_q - nu_p|^2,
// exact for every edge; edges with a rho = 0 end contribute to the first
// term only.
struct EnergyDecomposition {
  double grad_rho = 0.0;
  double rho2_grad_nu = 0.0;
  double potential = 0.0;
  std::size_t zero_nodes = 0;  // interior nodes with rho = 0
  double total() const noexcept { return grad_rho + rho2_grad_nu + potential; }
};
EnergyDecomposition energy_decomposition(const VectorField& u, std::span<const double> a, const PotentialSpec& spec);

struct CompetitorReport {
  CompetitorKind kind = CompetitorKind::Annulus;
  double energy_u = 0.0;
  double energy_competitor = 0.0;
  double difference = 0.0;          // energy_competitor - energy_u
  double boundary_deviation = 0.0;  // max over boundary nodes of |competitor - u|
  double slack = 0.0;               // delta_q
  bool minimality_ok = true;        // difference >= -slack
  std::map<std::string, double> parameters;
};

double boundary_deviation(const VectorField& u, const VectorField& v);

CompetitorReport compare_competitor(const VectorField& u, const VectorField& competitor, const PotentialSpec& spec,
                                    CompetitorKind kind, std::map<std::string, double> parameters, double slack);

struct MaxPrincipleOptions {
  double tol = 1e-6;
  std::size_t max_iter = 200000;
  double slack = -1.0;       // delta_q; negative means quadrature_slack(grid)
  double sup_slack = -1.0;   // allowed excess of the interior sup over r; negative means 2h
  std::size_t assumption_samples = 200;
  std::uint64_t seed = 0;
};

struct MaxPrincipleReport {
  double r = 0.0;
  double r0 = 0.0;
  double boundary_sup = 0.0;  // max over boundary nodes of |g - a|
  double interior_sup = 0.0;  // max over interior nodes of |u - a|
  bool sup_ok = false;        // interior_sup <= r + sup_slack
  double sup_slack = 0.0;
  bool ball_pos_ok = true;    // W > 0 on the punctured 2 r0 ball
  bool potential_ordered = true;  // W(u~) <= W(u) at every node
  SolveReport solve;
  CompetitorReport truncation;
  EnergyDecomposition decomposition_u;
  EnergyDecomposition decomposition_truncated;
  std::optional<VectorField> u;  // the minimizer
};

// Minimizes with the boundary data carried by `data`, truncates at r and
// compares. Requires the radial monotonicity assumption of the potential
// (PreconditionError otherwise), r < r0/2 and boundary data within r of a.
// Throws InvariantViolation when the truncation changes the energy by more
// than the slack in either direction.
MaxPrincipleReport max_principle_check(const VectorField& data, const PotentialSpec& spec, double r,
                                       const MaxPrincipleOptions& options = {});

}  // namespace aclab
