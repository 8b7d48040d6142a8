#include "aclab/slice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "aclab/error.hpp"

namespace aclab {

GoodRadius select_good_radius(const ScalarField& e, double R, std::size_t samples) {
  const Grid& g = e.grid();
  if (!(R > 0.0) || !(2.0 * R + g.h() <= g.r_max() * (1.0 + 1e-12)))
    throw InvalidArgument("good radius search needs 0 < R and 2R + h <= R_max");
  if (samples == 0) throw InvalidArgument("good radius search needs at least one radius");
  GoodRadius out;
  out.radii.resize(samples);
  out.energies.resize(samples);
  for (std::size_t j = 0; j < samples; ++j) {
    const double S = R + (static_cast<double>(j) + 0.5) * R / static_cast<double>(samples);
    const auto pts = sample_sphere(e, S, default_sphere_samples(g.dim(), S, g.h()));
    out.radii[j] = S;
    out.energies[j] = slice_integral(pts, g.dim(), S);
  }
  const auto best = std::min_element(out.energies.begin(), out.energies.end());
  out.S = out.radii[static_cast<std::size_t>(best - out.energies.begin())];
  out.slice_energy = *best;
  out.shell_mean = (integrate_ball(e, 2.0 * R) - integrate_ball(e, R)) / R;
  return out;
}

double holder_constant(const ScalarField& e, double alpha, const HolderOptions& opt) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("Hölder exponent must lie in (0, 1]");
  if (!(opt.max_distance > 0.0)) throw InvalidArgument("Hölder pair distance must be positive");
  const Grid& g = e.grid();
  const int n = g.dim();
  const double h = g.h();
  const long D = std::max(1, opt.dense_cells);
  const long reach = static_cast<long>(std::floor(opt.max_distance / h + 1e-9));

  // Lexicographically positive offsets, so every unordered pair is seen once.
  std::vector<std::array<long, 3>> offsets;
  auto positive = [n](const std::array<long, 3>& o) {
    for (int d = n - 1; d >= 0; --d)
      if (o[d] != 0) return o[d] > 0;
    return false;
  };
  auto length = [n, h](const std::array<long, 3>& o) {
    double s = 0.0;
    for (int d = 0; d < n; ++d) s += static_cast<double>(o[d] * o[d]);
    return std::sqrt(s) * h;
  };
  const long lim_z = n == 3 ? D : 0;
  for (long z = -lim_z; z <= lim_z; ++z)
    for (long y = -D; y <= D; ++y)
      for (long x = -D; x <= D; ++x) {
        const std::array<long, 3> o{x, y, z};
        if (positive(o) && length(o) <= opt.max_distance * (1.0 + 1e-12)) offsets.push_back(o);
      }
  const long dz = n == 3 ? 1 : 0;
  for (long z = -dz; z <= dz; ++z)
    for (long y = -1; y <= 1; ++y)
      for (long x = -1; x <= 1; ++x) {
        const std::array<long, 3> dir{x, y, z};
        if (!positive(dir)) continue;
        for (long k = D + 1; k <= reach; ++k) {
          const std::array<long, 3> o{k * x, k * y, k * z};
          if (length(o) > opt.max_distance * (1.0 + 1e-12)) break;
          offsets.push_back(o);
        }
      }

  const auto kinds = g.kinds();
  const double region2 = opt.region_radius > 0.0 ? opt.region_radius * opt.region_radius * (1.0 + 1e-12) : -1.0;
  auto eligible = [&](std::size_t i) {
    if (kinds[i] != NodeKind::Interior) return false;
    if (region2 < 0.0) return true;
    const Point p = g.point(i);
    return p[0] * p[0] + p[1] * p[1] + p[2] * p[2] <= region2;
  };
  std::vector<double> scale(offsets.size());
  std::vector<long> shift(offsets.size());
  for (std::size_t k = 0; k < offsets.size(); ++k) {
    scale[k] = 1.0 / std::pow(length(offsets[k]), alpha);
    long s = 0;
    for (int d = 0; d < n; ++d) s += offsets[k][d] * static_cast<long>(g.stride(d));
    shift[k] = s;
  }
  const long last = static_cast<long>(g.axis_size()) - 1;
  const auto v = e.values();
  double best = 0.0;
  for (std::size_t i : g.interior_nodes()) {
    if (!eligible(i)) continue;
    const auto ijk = g.multi_index(i);
    for (std::size_t k = 0; k < offsets.size(); ++k) {
      bool inside = true;
      for (int d = 0; d < n; ++d) {
        const long c = static_cast<long>(ijk[d]) + offsets[k][d];
        if (c < 0 || c > last) inside = false;
      }
      if (!inside) continue;
      const std::size_t j = static_cast<std::size_t>(static_cast<long>(i) + shift[k]);
      if (!eligible(j)) continue;
      best = std::max(best, std::abs(v[i] - v[j]) * scale[k]);
    }
  }
  return best;
}

double geodesic_distance(const Point& x, const Point& y, double S) {
  const double cx = x[1] * y[2] - x[2] * y[1];
  const double cy = x[2] * y[0] - x[0] * y[2];
  const double cz = x[0] * y[1] - x[1] * y[0];
  const double cross = std::sqrt(cx * cx + cy * cy + cz * cz);
  const double dot = x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
  return S * std::atan2(cross, dot);
}

SphereNeighborIndex::SphereNeighborIndex(const std::vector<Point>& points, double S, double max_distance)
    : points_(points), S_(S) {
  if (!(S > 0.0) || !(max_distance > 0.0)) throw InvalidArgument("neighbor index needs positive radius and distance");
  // Chord length never exceeds geodesic distance, so a cell of side
  // max_distance keeps every neighbor within the adjacent cells.
  cell_ = std::max(max_distance, 2.0 * S / 200.0);
  cells_per_axis_ = static_cast<long>(std::ceil(2.0 * S / cell_)) + 2;
  std::vector<std::pair<long, std::size_t>> tagged(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) tagged[i] = {key(cell_of(points[i])), i};
  std::sort(tagged.begin(), tagged.end());
  order_.resize(points.size());
  for (std::size_t i = 0; i < tagged.size(); ++i) {
    order_[i] = tagged[i].second;
    if (i == 0 || tagged[i].first != tagged[i - 1].first) {
      keys_.push_back(tagged[i].first);
      starts_.push_back(i);
    }
  }
  starts_.push_back(tagged.size());
}

std::array<long, 3> SphereNeighborIndex::cell_of(const Point& p) const {
  std::array<long, 3> c{};
  for (int d = 0; d < 3; ++d) c[d] = static_cast<long>(std::floor((p[d] + S_) / cell_)) + 1;
  return c;
}

long SphereNeighborIndex::key(const std::array<long, 3>& c) const {
  return (c[2] * cells_per_axis_ + c[1]) * cells_per_axis_ + c[0];
}

void SphereNeighborIndex::for_each_within(std::size_t i, double radius,
                                          const std::function<void(std::size_t, double)>& fn) const {
  const Point& p = points_[i];
  const auto c = cell_of(p);
  for (long dz = -1; dz <= 1; ++dz)
    for (long dy = -1; dy <= 1; ++dy)
      for (long dx = -1; dx <= 1; ++dx) {
        const long k = key({c[0] + dx, c[1] + dy, c[2] + dz});
        const auto it = std::lower_bound(keys_.begin(), keys_.end(), k);
        if (it == keys_.end() || *it != k) continue;
        const std::size_t row = static_cast<std::size_t>(it - keys_.begin());
        for (std::size_t t = starts_[row]; t < starts_[row + 1]; ++t) {
          const std::size_t j = order_[t];
          const double d = geodesic_distance(p, points_[j], S_);
          if (d <= radius) fn(j, d);
        }
      }
}

double holder_constant(const std::vector<SphereSample>& samples, int dim, double S, double alpha, double max_distance) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("Hölder exponent must lie in (0, 1]");
  (void)dim;
  std::vector<Point> pts(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) pts[i] = samples[i].point;
  const SphereNeighborIndex index(pts, S, max_distance);
  double best = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i)
    index.for_each_within(i, max_distance, [&](std::size_t j, double d) {
      if (j <= i || d <= 0.0) return;
      best = std::max(best, std::abs(samples[i].value - samples[j].value) / std::pow(d, alpha));
    });
  return best;
}

double clearing_out_threshold(double eps, double C4, double alpha, int n) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidArgument("clearing-out threshold needs eps > 0");
  if (!(C4 >= 0.0) || !std::isfinite(C4)) throw InvalidArgument("clearing-out threshold needs finite C4 >= 0");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("Hölder exponent must lie in (0, 1]");
  const double radius = C4 > 0.0 ? std::min(1.0, std::pow(eps / (2.0 * C4), 1.0 / alpha)) : 1.0;
  return eps / std::pow(2.0, n) * unit_sphere_measure(n) * std::pow(radius, n - 1);
}

double disc_overlap_constant(int dim) {
  if (dim == 2) return 5.0;
  if (dim == 3) return 25.0;
  throw InvalidArgument("dimension must be 2 or 3");
}

BadDiscReport find_bad_discs(const std::vector<SphereSample>& samples, int dim, double S, double eps, double mu) {
  if (samples.empty()) throw InvalidArgument("bad-disc search needs sphere samples");
  if (!(S > 0.0)) throw InvalidArgument("bad-disc search needs S > 0");
  if (!(eps > 0.0) || !(mu > 0.0)) throw InvalidArgument("bad-disc search needs eps > 0 and mu > 0");
  const std::size_t K = samples.size();
  BadDiscReport rep;
  rep.S = S;
  rep.eps = eps;
  rep.mu = mu;
  rep.dim = dim;
  rep.samples = samples;
  rep.covered.assign(K, false);
  rep.slice_energy = slice_integral(samples, dim, S);
  rep.overlap_constant = disc_overlap_constant(dim);
  rep.count_bound = rep.overlap_constant * rep.slice_energy / mu;

  std::vector<Point> pts(K);
  for (std::size_t i = 0; i < K; ++i) pts[i] = samples[i].point;
  const SphereNeighborIndex index(pts, S, 2.0);
  const double weight = sphere_area(dim, S) / static_cast<double>(K);
  std::vector<double> ball(K, 0.0);
  for (std::size_t i = 0; i < K; ++i) {
    double s = 0.0;
    index.for_each_within(i, 2.0, [&](std::size_t j, double) { s += samples[j].value; });
    ball[i] = weight * s;
  }

  auto better = [&](std::size_t i, std::size_t b) {
    const double tie = 1e-12 * std::max(std::abs(ball[i]), std::abs(ball[b]));
    if (std::abs(ball[i] - ball[b]) <= tie) return samples[i].value > samples[b].value;
    return ball[i] > ball[b];
  };

  for (;;) {
    bool pending = false;
    for (std::size_t i = 0; i < K && !pending; ++i) pending = !rep.covered[i] && samples[i].value > eps;
    if (!pending) break;
    std::size_t pick = K;
    for (std::size_t i = 0; i < K; ++i)
      if (!rep.covered[i] && (pick == K || better(i, pick))) pick = i;
    rep.max_ball_energy = std::max(rep.max_ball_energy, ball[pick]);
    if (ball[pick] < mu)
      throw ClearingOutViolated("sample with e > eps lies in no 2-ball of energy >= mu (best " +
                                std::to_string(ball[pick]) + " < " + std::to_string(mu) +
                                "); the Hölder data are too small for this field");
    rep.centers.push_back(samples[pick].point);
    rep.center_samples.push_back(pick);
    index.for_each_within(pick, 1.0, [&](std::size_t j, double) { rep.covered[j] = true; });
  }
  rep.count = rep.centers.size();
  for (std::size_t i = 0; i < K; ++i)
    if (!rep.covered[i]) rep.off_disc_sup = std::max(rep.off_disc_sup, samples[i].value);
  return rep;
}

BadDiscReport find_bad_discs(const ScalarField& e, double S, double eps, double mu, std::size_t K) {
  return find_bad_discs(sample_sphere(e, S, K), e.grid().dim(), S, eps, mu);
}

}  // namespace aclab
