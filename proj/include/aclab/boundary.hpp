#pragma once

// Boundary data generators. Each fills the boundary and exterior nodes with
// the datum g and the interior with an initial guess.

#include <cstdint>
#include <string_view>
#include <vector>

#include "aclab/grid.hpp"
#include "aclab/potential.hpp"

namespace aclab {

enum class BoundaryTag { ConstantA, RadialProfile, Angular, RandomSeeded };

std::string_view to_string(BoundaryTag tag);
BoundaryTag boundary_tag_from_string(std::string_view tag);

struct BoundarySpec {
  BoundaryTag tag = BoundaryTag::ConstantA;
  double amplitude = 1.0;
  int winding = 1;
  int modes = 4;
  std::uint64_t seed = 0;
};

// phi'' + (n-1)/r phi' = d/dphi W(a + phi e_1) on [0, R] with phi'(0) = 0 and
// phi(R) = amplitude, by Newton on a uniform grid of spacing <= dr.
struct RadialProfile {
  double dr = 0.0;
  std::vector<double> values;  // phi(k dr)
  double residual = 0.0;       // max nodal residual of the discrete equation
  std::size_t newton_steps = 0;

  // Linear interpolation; constant beyond the last node.
  double at(double r) const noexcept;
};

RadialProfile solve_radial_profile(const PotentialSpec& spec, int n, double R, double amplitude, double dr);

// constant-a:     g = a, interior a.
// angular:        g = a + A (cos k theta, sin k theta, 0, ...), or a + A cos k theta
//                 for m = 1, with theta the azimuth of x; interior a.
// radial-profile: a + phi(|x|) e_1 everywhere, phi from solve_radial_profile on
//                 [0, R_max] with spacing h / 4.
// random-seeded:  band-limited data (Fourier modes up to `modes` for n = 2,
//                 polynomials of degree <= modes in x/|x| for n = 3) with
//                 decaying Gaussian coefficients, scaled so that the maximum
//                 of |g - a| over boundary nodes equals the amplitude; interior a.
VectorField make_boundary_field(const GridPtr& grid, const PotentialSpec& spec, const BoundarySpec& boundary);

// max over boundary nodes of |u - a|.
double boundary_sup(const VectorField& u, std::span<const double> a);

}  // namespace aclab
