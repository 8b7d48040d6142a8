#pragma once

// Sphere-slice analysis: good radii, Hölder constants, the clearing-out
// threshold and the greedy covering of high-energy regions by discs.

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "aclab/field.hpp"
#include "aclab/grid.hpp"

namespace aclab {

struct GoodRadius {
  double S = 0.0;             // chosen radius in (R, 2R)
  double slice_energy = 0.0;  // integral of e over the sphere of radius S
  double shell_mean = 0.0;    // (1/R) * integral of e over B_2R \ B_R
  std::vector<double> radii;
  std::vector<double> energies;
};

// Slice integrals at the midpoints of `samples` equal subintervals of
// (R, 2R); returns the smallest (first on ties). Requires 2R + h <= R_max.
GoodRadius select_good_radius(const ScalarField& e, double R, std::size_t samples);

struct HolderOptions {
  double max_distance = 1.0;   // pairs farther apart are ignored
  double region_radius = 0.0;  // restrict to |x| <= region_radius; 0 means the whole interior
  int dense_cells = 4;         // all offsets up to this many cells per axis
};

// max |e(x) - e(y)| / |x - y|^alpha over interior node pairs within
// max_distance: every offset up to dense_cells per axis, plus axis and
// diagonal offsets out to max_distance.
double holder_constant(const ScalarField& e, double alpha, const HolderOptions& options = {});

// Same quotient over pairs of sphere samples, distance measured along the
// sphere of radius S.
double holder_constant(const std::vector<SphereSample>& samples, int dim, double S, double alpha,
                       double max_distance = 1.0);

// mu = (eps / 2^n) |S^{n-1}| min{1, (eps / 2 C4)^{1/alpha}}^{n-1}.
// C4 = 0 (constant field) saturates the minimum at 1.
double clearing_out_threshold(double eps, double C4, double alpha, int n);

// Geodesic distance on the sphere of radius S (arc length in 2-D, great
// circle in 3-D); points are taken on that sphere.
double geodesic_distance(const Point& x, const Point& y, double S);

// Fixed-radius neighbor queries among points on a sphere.
class SphereNeighborIndex {
 public:
  SphereNeighborIndex(const std::vector<Point>& points, double S, double max_distance);
  // Calls fn(j, distance) for every j with geodesic distance <= radius
  // (radius <= max_distance), including i itself.
  void for_each_within(std::size_t i, double radius, const std::function<void(std::size_t, double)>& fn) const;

 private:
  std::array<long, 3> cell_of(const Point& p) const;
  long key(const std::array<long, 3>& c) const;

  std::vector<Point> points_;
  double S_;
  double cell_;
  long cells_per_axis_;
  // Points sorted by bucket key (compressed rows).
  std::vector<long> keys_;
  std::vector<std::size_t> starts_;
  std::vector<std::size_t> order_;
};

struct BadDiscReport {
  double R = 0.0;
  double S = 0.0;
  double eps = 0.0;
  double C4 = 0.0;
  double alpha = 1.0;
  double mu = 0.0;
  int dim = 2;
  std::vector<Point> centers;
  std::vector<std::size_t> center_samples;
  std::size_t count = 0;             // N
  double off_disc_sup = 0.0;         // sup of e outside every disc
  double slice_energy = 0.0;
  double overlap_constant = 0.0;     // C5 for centers pairwise more than 1 apart
  double count_bound = 0.0;          // C5 * slice_energy / mu
  double max_ball_energy = 0.0;      // largest 2-ball slice energy seen
  std::vector<SphereSample> samples;
  std::vector<bool> covered;
};

// Greedy covering: repeatedly pick the uncovered sample with the largest
// geodesic 2-ball slice energy (ties: larger e, then lower index); if that
// energy reaches mu it becomes a disc center and its geodesic 1-ball is
// covered. Stops once every sample with e > eps is covered. If the best
// remaining 2-ball energy is below mu while such a sample is uncovered,
// throws ClearingOutViolated.
BadDiscReport find_bad_discs(const std::vector<SphereSample>& samples, int dim, double S, double eps, double mu);
BadDiscReport find_bad_discs(const ScalarField& e, double S, double eps, double mu, std::size_t K);

// Overlap bound for 2-balls around centers pairwise more than 1 apart.
double disc_overlap_constant(int dim);

}  // namespace aclab
