#include "aclab/field.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "aclab/error.hpp"
#include "aclab/parallel.hpp"
#include "aclab/simd/kernels.hpp"

namespace aclab {

static_assert(std::endian::native == std::endian::little, "field I/O assumes a little-endian host");

namespace {

std::vector<std::size_t> face_nodes(const Grid& g) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < g.node_count(); ++i)
    if (g.on_array_face(i)) out.push_back(i);
  return out;
}

// 16-point Gauss-Legendre rule on [-1, 1], computed once by Newton iteration.
struct GaussLegendre {
  static constexpr int kPoints = 16;
  std::array<double, kPoints> x{};
  std::array<double, kPoints> w{};

  GaussLegendre() {
    const int n = kPoints;
    for (int i = 0; i < n; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        const double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      x[i] = z;
      w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
  }
};

const GaussLegendre& gauss_legendre() {
  static const GaussLegendre rule;
  return rule;
}

// Area of [0, x] x [0, y] inside the disc of radius R, for x, y >= 0.
double quadrant_area(double x, double y, double R) {
  if (x <= 0.0 || y <= 0.0 || R <= 0.0) return 0.0;
  auto G = [R](double s) { return 0.5 * (s * std::sqrt(std::max(R * R - s * s, 0.0)) + R * R * std::asin(std::min(s / R, 1.0))); };
  const double xs = std::sqrt(std::max(R * R - y * y, 0.0));
  const double xr = std::min(x, R);
  double area = y * std::min(x, xs);
  if (xr > xs) area += G(xr) - G(xs);
  return area;
}

double signed_area(double x, double y, double R) {
  const double s = (x < 0.0 ? -1.0 : 1.0) * (y < 0.0 ? -1.0 : 1.0);
  return s * quadrant_area(std::abs(x), std::abs(y), R);
}

double rect_disc_area(double x0, double x1, double y0, double y1, double R) {
  return signed_area(x1, y1, R) - signed_area(x0, y1, R) - signed_area(x1, y0, R) + signed_area(x0, y0, R);
}

double box_ball_volume(const Point& lo, const Point& hi, double R) {
  const double zlo = std::max(lo[2], -R);
  const double zhi = std::min(hi[2], R);
  if (zhi <= zlo) return 0.0;
  std::vector<double> cuts{zlo, zhi, 0.0};
  std::vector<double> radii{std::abs(lo[0]), std::abs(hi[0]), std::abs(lo[1]), std::abs(hi[1])};
  for (double xv : {lo[0], hi[0]})
    for (double yv : {lo[1], hi[1]}) radii.push_back(std::hypot(xv, yv));
  for (double t : radii) {
    if (t < R) {
      const double z = std::sqrt(R * R - t * t);
      cuts.push_back(z);
      cuts.push_back(-z);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  const auto& gl = gauss_legendre();
  double vol = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = std::max(cuts[k], zlo);
    const double b = std::min(cuts[k + 1], zhi);
    if (b <= a) continue;
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = 0.0;
    for (int q = 0; q < GaussLegendre::kPoints; ++q) {
      const double z = mid + half * gl.x[q];
      const double rho = std::sqrt(std::max(R * R - z * z, 0.0));
      s += gl.w[q] * rect_disc_area(lo[0], hi[0], lo[1], hi[1], rho);
    }
    vol += half * s;
  }
  return vol;
}

void check_radius(const Grid& g, double R) {
  if (!(R > 0.0) || !(R <= g.r_max() * (1.0 + 1e-12)))
    throw InvalidArgument("ball radius " + std::to_string(R) + " outside (0, R_max]");
}

}  // namespace

Gradient centered_gradient(const VectorField& u) {
  const Grid& g = u.grid();
  const std::size_t N = g.node_count();
  const int n = g.dim();
  const int m = u.m();
  Gradient out{u.grid_ptr(), m, std::vector<double>(static_cast<std::size_t>(n) * m * N, 0.0)};
  const auto& k = simd::active_kernels();
  const double inv_2h = 0.5 / g.h();
  for (int d = 0; d < n; ++d) {
    for (int c = 0; c < m; ++c) {
      const double* in = u.component(c).data();
      double* dst = out.data.data() + (static_cast<std::size_t>(d) * m + c) * N;
      const std::size_t s = g.stride(d);
      parallel::for_blocks(g.stencil_begin(), g.stencil_end(),
                           [&](std::size_t lo, std::size_t hi) { k.central_difference(in, dst, lo, hi, s, inv_2h); });
    }
  }
  // Faces of the array: the flat stencil wraps or is out of range there.
  const double inv_h = 1.0 / g.h();
  const std::size_t last = g.axis_size() - 1;
  for (std::size_t i : face_nodes(g)) {
    const auto ijk = g.multi_index(i);
    for (int d = 0; d < n; ++d) {
      const std::size_t s = g.stride(d);
      for (int c = 0; c < m; ++c) {
        const double* in = u.component(c).data();
        double v;
        if (ijk[d] == 0)
          v = (in[i + s] - in[i]) * inv_h;
        else if (ijk[d] == last)
          v = (in[i] - in[i - s]) * inv_h;
        else
          v = (in[i + s] - in[i - s]) * inv_2h;
        out.data[(static_cast<std::size_t>(d) * m + c) * N + i] = v;
      }
    }
  }
  return out;
}

ScalarField gradient_norm2(const VectorField& u) {
  const Gradient grad = centered_gradient(u);
  const Grid& g = u.grid();
  ScalarField out(u.grid_ptr(), 0.0);
  const auto& k = simd::active_kernels();
  double* acc = out.values().data();
  for (int d = 0; d < g.dim(); ++d)
    for (int c = 0; c < u.m(); ++c) {
      const double* x = grad.plane(d, c);
      parallel::for_blocks(0, g.node_count(), [&](std::size_t lo, std::size_t hi) { k.accumulate_square(acc, x, lo, hi); });
    }
  return out;
}

VectorField laplacian(const VectorField& f) {
  const Grid& g = f.grid();
  VectorField out(f.grid_ptr(), f.m(), 0.0);
  const auto& k = simd::active_kernels();
  const double inv_h2 = 1.0 / (g.h() * g.h());
  const double* mask = g.interior_mask().data();
  for (int c = 0; c < f.m(); ++c) {
    const double* in = f.component(c).data();
    double* dst = out.component(c).data();
    parallel::for_blocks(g.stencil_begin(), g.stencil_end(), [&](std::size_t lo, std::size_t hi) {
      k.laplacian(in, dst, lo, hi, g.strides(), g.dim(), inv_h2);
      for (std::size_t i = lo; i < hi; ++i) dst[i] *= mask[i];
    });
  }
  return out;
}

ScalarField potential_density(const VectorField& u, const PotentialSpec& spec) {
  if (spec.m() != u.m()) throw InvalidArgument("potential and field component counts differ");
  ScalarField out(u.grid_ptr(), 0.0);
  const auto planes = u.planes();
  double* dst = out.values().data();
  parallel::for_blocks(0, u.node_count(), [&](std::size_t lo, std::size_t hi) { spec.eval_batch(planes.data(), lo, hi, dst); });
  return out;
}

ScalarField energy_density(const VectorField& u, const PotentialSpec& spec) {
  ScalarField e = gradient_norm2(u);
  const ScalarField w = potential_density(u, spec);
  auto ev = e.values();
  const auto wv = w.values();
  for (std::size_t i = 0; i < ev.size(); ++i) ev[i] = 0.5 * ev[i] + wv[i];
  return e;
}

double cell_ball_fraction(int dim, const Point& lo, const Point& hi, double R) {
  double dmin2 = 0.0, dmax2 = 0.0, vol = 1.0;
  for (int d = 0; d < dim; ++d) {
    const double nearest = std::clamp(0.0, lo[d], hi[d]);
    dmin2 += nearest * nearest;
    dmax2 += std::max(lo[d] * lo[d], hi[d] * hi[d]);
    vol *= hi[d] - lo[d];
  }
  const double R2 = R * R;
  if (dmax2 <= R2) return 1.0;
  if (dmin2 >= R2) return 0.0;
  const double inside = dim == 2 ? rect_disc_area(lo[0], hi[0], lo[1], hi[1], R) : box_ball_volume(lo, hi, R);
  return std::clamp(inside / vol, 0.0, 1.0);
}

BallQuadrature ball_quadrature(const Grid& g, double R) {
  check_radius(g, R);
  BallQuadrature q;
  const double half = 0.5 * g.h();
  const double reach = R + half * std::sqrt(static_cast<double>(g.dim()));
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const Point p = g.point(i);
    if (std::abs(p[0]) > reach || std::abs(p[1]) > reach || std::abs(p[2]) > reach) continue;
    Point lo{0, 0, 0}, hi{0, 0, 0};
    for (int d = 0; d < g.dim(); ++d) {
      lo[d] = p[d] - half;
      hi[d] = p[d] + half;
    }
    const double f = cell_ball_fraction(g.dim(), lo, hi, R);
    if (f > 0.0) {
      q.nodes.push_back(i);
      q.weights.push_back(g.cell_volume() * f);
    }
  }
  return q;
}

double integrate(const BallQuadrature& q, std::span<const double> values) {
  double s = 0.0;
  for (std::size_t k = 0; k < q.nodes.size(); ++k) s += q.weights[k] * values[q.nodes[k]];
  return s;
}

double integrate_ball(const Grid& grid, std::span<const double> values, double R) {
  if (values.size() != grid.node_count()) throw InvalidArgument("value count does not match the grid");
  return integrate(ball_quadrature(grid, R), values);
}

double integrate_ball(const ScalarField& s, double R) { return integrate_ball(s.grid(), s.values(), R); }

double unit_sphere_measure(int dim) {
  if (dim == 2) return 2.0 * std::numbers::pi;
  if (dim == 3) return 4.0 * std::numbers::pi;
  throw InvalidArgument("dimension must be 2 or 3");
}

double sphere_area(int dim, double R) { return unit_sphere_measure(dim) * std::pow(R, dim - 1); }

double ball_volume(int dim, double R) { return unit_sphere_measure(dim) * std::pow(R, dim) / dim; }

std::vector<Point> sphere_points(int dim, double R, std::size_t K) {
  std::vector<Point> pts(K, Point{0, 0, 0});
  if (dim == 2) {
    for (std::size_t k = 0; k < K; ++k) {
      const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(K);
      pts[k] = {R * std::cos(t), R * std::sin(t), 0.0};
    }
    return pts;
  }
  if (dim != 3) throw InvalidArgument("dimension must be 2 or 3");
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t k = 0; k < K; ++k) {
    const double z = 1.0 - (2.0 * static_cast<double>(k) + 1.0) / static_cast<double>(K);
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(k);
    pts[k] = {R * rho * std::cos(phi), R * rho * std::sin(phi), R * z};
  }
  return pts;
}

double interpolate(const Grid& g, std::span<const double> values, const Point& x) {
  const double center = 0.5 * static_cast<double>(g.axis_size() - 1);
  std::array<std::size_t, 3> base{0, 0, 0};
  std::array<double, 3> frac{0, 0, 0};
  for (int d = 0; d < g.dim(); ++d) {
    const double t = x[d] / g.h() + center;
    const double j = std::floor(t);
    if (!(j >= 0.0) || !(j + 1.0 <= static_cast<double>(g.axis_size() - 1)))
      throw InvalidArgument("interpolation point outside the grid");
    base[d] = static_cast<std::size_t>(j);
    frac[d] = t - j;
  }
  const std::size_t i0 = g.index(base);
  double s = 0.0;
  const int corners = 1 << g.dim();
  for (int c = 0; c < corners; ++c) {
    double w = 1.0;
    std::size_t off = 0;
    for (int d = 0; d < g.dim(); ++d) {
      const bool up = (c >> d) & 1;
      w *= up ? frac[d] : 1.0 - frac[d];
      if (up) off += g.stride(d);
    }
    if (w != 0.0) s += w * values[i0 + off];
  }
  return s;
}

std::vector<SphereSample> sample_sphere(const Grid& g, std::span<const double> values, double R, std::size_t K) {
  if (K < 8) throw InvalidArgument("sphere sampling needs at least 8 points");
  if (!(R > 0.0) || !(R + g.h() <= g.r_max() * (1.0 + 1e-12)))
    throw InvalidArgument("sphere radius " + std::to_string(R) + " too close to the grid edge");
  if (values.size() != g.node_count()) throw InvalidArgument("value count does not match the grid");
  const auto pts = sphere_points(g.dim(), R, K);
  std::vector<SphereSample> out(K);
  for (std::size_t k = 0; k < K; ++k) out[k] = {pts[k], interpolate(g, values, pts[k])};
  return out;
}

std::vector<SphereSample> sample_sphere(const ScalarField& s, double R, std::size_t K) {
  return sample_sphere(s.grid(), s.values(), R, K);
}

double slice_integral(const std::vector<SphereSample>& samples, int dim, double R) {
  if (samples.empty()) return 0.0;
  double s = 0.0;
  for (const auto& p : samples) s += p.value;
  return sphere_area(dim, R) * s / static_cast<double>(samples.size());
}

std::size_t default_sphere_samples(int dim, double R, double h) {
  const double spacing = 0.5 * h;
  if (dim == 2) return std::max<std::size_t>(64, static_cast<std::size_t>(std::ceil(2.0 * std::numbers::pi * R / spacing)));
  const double count = std::ceil(sphere_area(3, R) / (spacing * spacing));
  return std::clamp<std::size_t>(static_cast<std::size_t>(count), 256, std::size_t{1} << 17);
}

void write_field(const std::string& path, const VectorField& u) {
  const Grid& g = u.grid();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidArgument("cannot open " + path + " for writing");
  const std::int32_t n = g.dim();
  const std::int32_t m = u.m();
  const double h = g.h();
  const double rmax = g.r_max();
  os.write(reinterpret_cast<const char*>(&n), sizeof n);
  os.write(reinterpret_cast<const char*>(&m), sizeof m);
  os.write(reinterpret_cast<const char*>(&h), sizeof h);
  os.write(reinterpret_cast<const char*>(&rmax), sizeof rmax);
  for (int d = 0; d < n; ++d) {
    const std::int64_t size = static_cast<std::int64_t>(g.axis_size());
    os.write(reinterpret_cast<const char*>(&size), sizeof size);
  }
  std::vector<double> row(static_cast<std::size_t>(m));
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    u.get(i, row.data());
    os.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size() * sizeof(double)));
  }
  if (!os) throw InvalidArgument("write to " + path + " failed");

  nlohmann::ordered_json side;
  side["format"] = "aclab-field";
  side["version"] = 1;
  side["n"] = n;
  side["m"] = m;
  side["h"] = h;
  side["R_max"] = rmax;
  side["axis_sizes"] = std::vector<std::int64_t>(static_cast<std::size_t>(n), static_cast<std::int64_t>(g.axis_size()));
  side["layout"] = "node-major, component-minor, float64, little-endian";
  side["node_order"] = "x fastest";
  side["header_bytes"] = 24 + 8 * n;
  side["interior_nodes"] = g.interior_nodes().size();
  side["boundary_nodes"] = g.boundary_nodes().size();
  std::ofstream js(path + ".json");
  js << side.dump(2) << "\n";
}

VectorField read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidArgument("cannot open field file " + path);
  std::int32_t n = 0, m = 0;
  double h = 0.0, rmax = 0.0;
  is.read(reinterpret_cast<char*>(&n), sizeof n);
  is.read(reinterpret_cast<char*>(&m), sizeof m);
  is.read(reinterpret_cast<char*>(&h), sizeof h);
  is.read(reinterpret_cast<char*>(&rmax), sizeof rmax);
  if (!is || (n != 2 && n != 3) || m < 1 || m > 16) throw InvalidArgument("malformed field header in " + path);
  auto grid = Grid::make(n, h, rmax);
  for (int d = 0; d < n; ++d) {
    std::int64_t size = 0;
    is.read(reinterpret_cast<char*>(&size), sizeof size);
    if (!is || size != static_cast<std::int64_t>(grid->axis_size()))
      throw InvalidArgument("axis size in " + path + " does not match the grid layout");
  }
  VectorField u(grid, m);
  std::vector<double> row(static_cast<std::size_t>(m));
  for (std::size_t i = 0; i < grid->node_count(); ++i) {
    is.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row.size() * sizeof(double)));
    if (!is) throw InvalidArgument("truncated field payload in " + path);
    for (double v : row)
      if (!std::isfinite(v)) throw InvalidArgument("non-finite value in " + path);
    u.set(i, row.data());
  }
  return u;
}

void write_slice_csv(const std::string& path, const std::vector<SphereSample>& samples, int dim,
                     const std::vector<bool>& covered) {
  if (!covered.empty() && covered.size() != samples.size())
    throw InvalidArgument("covered flags must match the samples");
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (f == nullptr) throw InvalidArgument("cannot open " + path + " for writing");
  std::fputs(dim == 3 ? "x,y,z,theta,phi,value" : "x,y,theta,value", f);
  std::fputs(covered.empty() ? "\n" : ",covered\n", f);
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const Point& p = samples[k].point;
    const double theta = std::atan2(p[1], p[0]);
    if (dim == 3) {
      const double phi = std::atan2(std::hypot(p[0], p[1]), p[2]);
      std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", p[0], p[1], p[2], theta, phi, samples[k].value);
    } else {
      std::fprintf(f, "%.17g,%.17g,%.17g,%.17g", p[0], p[1], theta, samples[k].value);
    }
    if (!covered.empty()) std::fprintf(f, ",%d", covered[k] ? 1 : 0);
    std::fputc('\n', f);
  }
  std::fclose(f);
}

}  // namespace aclab
