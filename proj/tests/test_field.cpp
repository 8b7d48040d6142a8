#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "aclab/error.hpp"
#include "aclab/field.hpp"
#include "test_util.hpp"

using namespace aclab;
using aclab::fixtures::field_from;
using aclab::fixtures::order;
using aclab::fixtures::scalar_from;

namespace {

double sup_interior(const VectorField& f, const std::function<double(const Point&)>& exact, double r_in) {
  double worst = 0.0;
  for (std::size_t k : f.grid().interior_nodes())
    if (f.grid().radius(k) <= r_in) worst = std::max(worst, std::abs(f.at(k, 0) - exact(f.grid().point(k))));
  return worst;
}

}  // namespace

TEST(Stencils, LaplacianOfConstantIsZero) {
  const auto g = Grid::make(2, 0.1, 1.0);
  const auto lap = laplacian(VectorField(g, 2, 3.7));
  for (double v : lap.raw()) EXPECT_EQ(v, 0.0);
}

TEST(Stencils, LaplacianExactOnQuadratics) {
  for (int n : {2, 3}) {
    const auto g = Grid::make(n, 0.125, 1.0);
    const auto lap = laplacian(field_from(g, 1, [](const Point& x, int) { return x[0] * x[0]; }));
    for (std::size_t k : g->interior_nodes()) EXPECT_NEAR(lap.at(k, 0), 2.0, 1e-10);
    for (std::size_t k : g->boundary_nodes()) EXPECT_EQ(lap.at(k, 0), 0.0);
  }
}

TEST(Stencils, LaplacianSecondOrderOnSine) {
  std::vector<double> err;
  for (double h : {0.1, 0.05, 0.025}) {
    const auto g = Grid::make(2, h, 1.0);
    const auto lap = laplacian(field_from(g, 1, [](const Point& x, int) { return std::sin(x[0]); }));
    err.push_back(sup_interior(lap, [](const Point& x) { return -std::sin(x[0]); }, 1.0));
  }
  EXPECT_GT(order(err[0], err[1]), 1.9);
  EXPECT_GT(order(err[1], err[2]), 1.9);
}

TEST(Stencils, GradientExactOnAffineFields) {
  const auto g = Grid::make(3, 0.25, 1.0);
  const auto u = field_from(g, 2, [](const Point& x, int c) { return c == 0 ? 1 + 2 * x[0] - x[2] : 3 * x[1]; });
  const Gradient G = centered_gradient(u);
  for (std::size_t k = 0; k < g->node_count(); ++k) {
    EXPECT_NEAR(G.at(0, 0, k), 2.0, 1e-12);
    EXPECT_NEAR(G.at(2, 0, k), -1.0, 1e-12);
    EXPECT_NEAR(G.at(1, 1, k), 3.0, 1e-12);
    EXPECT_NEAR(G.at(0, 1, k), 0.0, 1e-12);
  }
}

TEST(Stencils, EnergyDensityOfExponentialIsSecondOrder) {
  const auto spec = PotentialSpec::quadratic({0.0});
  std::vector<double> err;
  for (double h : {0.1, 0.05, 0.025}) {
    const auto g = Grid::make(2, h, 1.0);
    const auto e = energy_density(field_from(g, 1, [](const Point& x, int) { return std::exp(x[0]); }), spec);
    double worst = 0.0;
    for (std::size_t k : g->interior_nodes()) worst = std::max(worst, std::abs(e[k] - std::exp(2 * g->point(k)[0])));
    err.push_back(worst);
  }
  EXPECT_GT(order(err[0], err[1]), 1.9);
  EXPECT_GT(order(err[1], err[2]), 1.9);
}

TEST(Stencils, EnergyDensityOfLinearField) {
  const auto g = Grid::make(2, 0.1, 1.0);
  const auto spec = PotentialSpec::quadratic({0.0, 0.0});
  const auto u = field_from(g, 2, [](const Point& x, int c) { return c == 0 ? 0.5 * x[0] : -x[1] + 0.2; });
  const auto e = energy_density(u, spec);
  for (std::size_t k : g->interior_nodes()) {
    const Point x = g->point(k);
    const double w = 0.5 * (0.25 * x[0] * x[0] + (0.2 - x[1]) * (0.2 - x[1]));
    EXPECT_NEAR(e[k], 0.5 * (0.25 + 1.0) + w, 1e-12);
  }
}

TEST(Stencils, EnergyDensityIsZeroAtA) {
  const auto g = Grid::make(2, 0.1, 1.0);
  const auto spec = PotentialSpec::power({0.4, -0.1}, 4.0);
  const auto e = energy_density(field_from(g, 2, [](const Point&, int c) { return c == 0 ? 0.4 : -0.1; }), spec);
  for (double v : e.values()) EXPECT_EQ(v, 0.0);
}

TEST(Quadrature, CellFractionBasics) {
  EXPECT_DOUBLE_EQ(cell_ball_fraction(2, {0, 0, 0}, {0.1, 0.1, 0}, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(cell_ball_fraction(2, {2, 2, 0}, {2.1, 2.1, 0}, 1.0), 0.0);
  // A quarter disc in the unit cell.
  EXPECT_NEAR(cell_ball_fraction(2, {0, 0, 0}, {1, 1, 0}, 1.0), M_PI / 4, 1e-14);
  // An eighth of the unit ball in the unit cube.
  EXPECT_NEAR(cell_ball_fraction(3, {0, 0, 0}, {1, 1, 1}, 1.0), M_PI / 6, 1e-12);
}

TEST(Quadrature, ConstantIntegratesToBallVolume) {
  for (double h : {0.1, 0.05}) {
    const auto g = Grid::make(2, h, 1.5);
    EXPECT_NEAR(integrate_ball(ScalarField(g, 1.0), 1.0), M_PI, 2 * h);
    EXPECT_NEAR(integrate_ball(ScalarField(g, 1.0), 1.0), M_PI, 1e-10);
    EXPECT_EQ(integrate_ball(ScalarField(g, 0.0), 1.0), 0.0);
  }
  const auto g3 = Grid::make(3, 0.1, 1.0);
  EXPECT_NEAR(integrate_ball(ScalarField(g3, 1.0), 0.8), ball_volume(3, 0.8), 1e-9);
}

TEST(Quadrature, MonotoneInRadiusForNonnegativeIntegrands) {
  const auto g = Grid::make(2, 0.1, 2.0);
  const auto s = scalar_from(g, [](const Point& x) { return 1.0 + std::sin(3 * x[0]) * std::sin(3 * x[0]); });
  double prev = 0.0;
  for (int j = 1; j <= 40; ++j) {
    const double v = integrate_ball(s, 0.05 * j);
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(Quadrature, BumpConvergesToRefinedOracle) {
  // Smoothed indicator of the disc of radius 0.6: the 4x-refined grid
  // serves as the oracle.
  auto bump = [](const Point& x) { return 0.5 * (1.0 - std::tanh((std::hypot(x[0], x[1]) - 0.6) / 0.05)); };
  const double oracle = integrate_ball(scalar_from(Grid::make(2, 0.1 / 16, 1.0), bump), 1.0);
  std::vector<double> err;
  for (double h : {0.1, 0.05, 0.025}) err.push_back(std::abs(integrate_ball(scalar_from(Grid::make(2, h, 1.0), bump), 1.0) - oracle));
  EXPECT_LT(err[2], err[0]);
  EXPECT_LT(err[2], 1e-3);
}

TEST(Quadrature, RadiusOutOfRangeThrows) {
  const auto g = Grid::make(2, 0.1, 1.0);
  EXPECT_THROW(integrate_ball(ScalarField(g, 1.0), 0.0), InvalidArgument);
  EXPECT_THROW(integrate_ball(ScalarField(g, 1.0), 1.5), InvalidArgument);
}

TEST(Sphere, MeasuresAndPoints) {
  EXPECT_DOUBLE_EQ(unit_sphere_measure(2), 2 * M_PI);
  EXPECT_DOUBLE_EQ(unit_sphere_measure(3), 4 * M_PI);
  EXPECT_DOUBLE_EQ(sphere_area(3, 2.0), 16 * M_PI);
  for (int n : {2, 3}) {
    const auto pts = sphere_points(n, 1.7, 100);
    ASSERT_EQ(pts.size(), 100u);
    for (const auto& p : pts) EXPECT_NEAR(std::hypot(p[0], p[1], p[2]), 1.7, 1e-13);
  }
}

TEST(Sphere, ConstantFieldSamplesExactly) {
  const auto g = Grid::make(2, 0.1, 2.0);
  const auto samples = sample_sphere(ScalarField(g, 3.25), 1.3, 64);
  for (const auto& s : samples) EXPECT_DOUBLE_EQ(s.value, 3.25);
  EXPECT_NEAR(slice_integral(sample_sphere(ScalarField(g, 1.0), 1.3, 64), 2, 1.3), 2 * M_PI * 1.3, 1e-12);
}

TEST(Sphere, RadialFieldSecondOrder) {
  auto prof = [](double r) { return std::cos(2 * r); };
  std::vector<double> err;
  for (double h : {0.1, 0.05, 0.025}) {
    const auto g = Grid::make(2, h, 2.0);
    const auto samples = sample_sphere(scalar_from(g, [&](const Point& x) { return prof(std::hypot(x[0], x[1])); }), 1.1, 200);
    double worst = 0.0;
    for (const auto& s : samples) worst = std::max(worst, std::abs(s.value - prof(1.1)));
    err.push_back(worst);
  }
  EXPECT_GT(order(err[0], err[2]) / 2.0, 1.8);
}

TEST(Sphere, NonnegativeFieldsSampleNonnegative) {
  const auto g = Grid::make(3, 0.2, 2.0);
  const auto s = scalar_from(g, [](const Point& x) { return std::abs(std::sin(5 * x[0] * x[1])); });
  for (const auto& p : sample_sphere(s, 1.2, 300)) EXPECT_GE(p.value, 0.0);
}

TEST(Sphere, PreconditionsEnforced) {
  const auto g = Grid::make(2, 0.1, 2.0);
  EXPECT_THROW(sample_sphere(ScalarField(g, 1.0), 1.95, 64), InvalidArgument);
  EXPECT_THROW(sample_sphere(ScalarField(g, 1.0), 1.0, 4), InvalidArgument);
}

TEST(Interpolation, ExactOnMultilinearFields) {
  const auto g = Grid::make(3, 0.2, 1.0);
  auto f = [](const Point& x) { return 1 + x[0] - 2 * x[1] + 0.5 * x[0] * x[1] * x[2] + x[1] * x[2]; };
  const auto s = scalar_from(g, f);
  for (const Point& p : sphere_points(3, 0.77, 50)) EXPECT_NEAR(interpolate(*g, s.values(), p), f(p), 1e-12);
}

TEST(FieldIO, RoundTripIsBitExact) {
  const auto g = Grid::make(2, 0.1, 1.0);
  const auto u = aclab::fixtures::random_smooth_field(g, 3, 5);
  const auto path = (std::filesystem::temp_directory_path() / "aclab_field_roundtrip.bin").string();
  write_field(path, u);
  EXPECT_TRUE(std::filesystem::exists(path + ".json"));
  const VectorField v = read_field(path);
  EXPECT_EQ(v.m(), 3);
  EXPECT_EQ(v.grid().dim(), 2);
  EXPECT_EQ(v.grid().h(), 0.1);
  EXPECT_EQ(v.grid().r_max(), 1.0);
  EXPECT_EQ(v.raw(), u.raw());
  std::filesystem::remove(path);
  std::filesystem::remove(path + ".json");
}

TEST(FieldIO, RejectsMissingAndTruncatedFiles) {
  EXPECT_ANY_THROW(read_field("/nonexistent/aclab.bin"));
  const auto path = (std::filesystem::temp_directory_path() / "aclab_truncated.bin").string();
  {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    const int hdr[2] = {2, 1};
    std::fwrite(hdr, sizeof hdr, 1, f);
    std::fclose(f);
  }
  EXPECT_ANY_THROW(read_field(path));
  std::filesystem::remove(path);
}
