#pragma once

// Stencils, ball quadrature, sphere sampling and field serialization on the
// masked grid.

#include <cstddef>
#include <string>
#include <vector>

#include "aclab/grid.hpp"
#include "aclab/potential.hpp"

namespace aclab {

// Centered-difference gradient; one-sided on the faces of the array.
// Layout: data[(axis * m + c) * node_count + node].
struct Gradient {
  GridPtr grid;
  int m = 0;
  std::vector<double> data;

  double at(int axis, int c, std::size_t node) const noexcept {
    return data[(static_cast<std::size_t>(axis) * m + c) * grid->node_count() + node];
  }
  const double* plane(int axis, int c) const noexcept {
    return data.data() + (static_cast<std::size_t>(axis) * m + c) * grid->node_count();
  }
};

Gradient centered_gradient(const VectorField& u);

// |grad u|^2 at every node.
ScalarField gradient_norm2(const VectorField& u);

// Second-order five/seven-point Laplacian per component on interior nodes;
// zero elsewhere.
VectorField laplacian(const VectorField& f);

// e = 1/2 |grad u|^2 + W(u) at every node.
ScalarField energy_density(const VectorField& u, const PotentialSpec& spec);

// W(u) at every node.
ScalarField potential_density(const VectorField& u, const PotentialSpec& spec);

// Fraction of the cell [lo, hi] (a box in the first `dim` coordinates)
// lying inside the centered ball of radius R. Exact in 2-D; in 3-D the
// cross-section areas are exact and integrated by piecewise Gauss-Legendre.
double cell_ball_fraction(int dim, const Point& lo, const Point& hi, double R);

// Midpoint rule over node cells, each cut cell weighted by its clipped
// fraction. Nodes and weights (cell volume times fraction) of B_R.
struct BallQuadrature {
  std::vector<std::size_t> nodes;
  std::vector<double> weights;
};
BallQuadrature ball_quadrature(const Grid& grid, double R);

// Integral of s over B_R. Requires 0 < R <= R_max.
double integrate_ball(const ScalarField& s, double R);
double integrate_ball(const Grid& grid, std::span<const double> values, double R);
double integrate(const BallQuadrature& q, std::span<const double> values);

// |S^{n-1}|: 2 pi for n = 2, 4 pi for n = 3.
double unit_sphere_measure(int dim);
double sphere_area(int dim, double R);
double ball_volume(int dim, double R);

// K points on the sphere of radius R: equiangular for n = 2, Fibonacci
// (equal-area) for n = 3.
std::vector<Point> sphere_points(int dim, double R, std::size_t K);

// Multilinear interpolation of node values at x. x must lie at least one
// cell inside the array.
double interpolate(const Grid& grid, std::span<const double> values, const Point& x);

struct SphereSample {
  Point point;
  double value = 0.0;
};

// Requires R + h <= R_max and K >= 8.
std::vector<SphereSample> sample_sphere(const ScalarField& s, double R, std::size_t K);
std::vector<SphereSample> sample_sphere(const Grid& grid, std::span<const double> values, double R, std::size_t K);

// Equal-weight quadrature of the samples over the sphere of radius R.
double slice_integral(const std::vector<SphereSample>& samples, int dim, double R);

// Sample count resolving the sphere of radius R at spacing about h / 2.
std::size_t default_sphere_samples(int dim, double R, double h);

// Binary layout (little endian): int32 n, int32 m, float64 h, float64 R_max,
// n x int64 axis sizes, then node-major component-minor float64 values.
// A JSON sidecar `<path>.json` describes the same header.
void write_field(const std::string& path, const VectorField& u);
VectorField read_field(const std::string& path);

// Slice samples as CSV: coordinates, azimuth theta (and polar angle phi for
// n = 3), value, and a covered flag when `covered` is given.
void write_slice_csv(const std::string& path, const std::vector<SphereSample>& samples, int dim,
                     const std::vector<bool>& covered = {});

}  // namespace aclab
