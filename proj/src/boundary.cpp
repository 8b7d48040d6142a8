#include "aclab/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "aclab/error.hpp"

namespace aclab {

std::string_view to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::ConstantA: return "constant-a";
    case BoundaryTag::RadialProfile: return "radial-profile";
    case BoundaryTag::Angular: return "angular";
    case BoundaryTag::RandomSeeded: return "random-seeded";
  }
  return "?";
}

BoundaryTag boundary_tag_from_string(std::string_view tag) {
  if (tag == "constant-a") return BoundaryTag::ConstantA;
  if (tag == "radial-profile") return BoundaryTag::RadialProfile;
  if (tag == "angular") return BoundaryTag::Angular;
  if (tag == "random-seeded") return BoundaryTag::RandomSeeded;
  throw InvalidArgument("unknown boundary tag '" + std::string(tag) + "'");
}

double RadialProfile::at(double r) const noexcept {
  if (values.empty()) return 0.0;
  const double t = r / dr;
  if (!(t < static_cast<double>(values.size() - 1))) return values.back();
  const auto k = static_cast<std::size_t>(t);
  const double f = t - static_cast<double>(k);
  return (1.0 - f) * values[k] + f * values[k + 1];
}

namespace {

// Thomas algorithm; all arrays have length K, lo[0] and up[K-1] unused.
void solve_tridiagonal(std::vector<double> lo, std::vector<double> di, std::vector<double> up, std::vector<double>& rhs) {
  const std::size_t K = di.size();
  for (std::size_t i = 1; i < K; ++i) {
    const double w = lo[i] / di[i - 1];
    di[i] -= w * up[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[K - 1] /= di[K - 1];
  for (std::size_t i = K - 1; i-- > 0;) rhs[i] = (rhs[i] - up[i] * rhs[i + 1]) / di[i];
}

}  // namespace

RadialProfile solve_radial_profile(const PotentialSpec& spec, int n, double R, double amplitude, double dr) {
  if (!(R > 0.0) || !(dr > 0.0) || !std::isfinite(amplitude)) throw InvalidArgument("radial profile needs R > 0, dr > 0");
  const auto K = static_cast<std::size_t>(std::ceil(R / dr - 1e-9));
  RadialProfile prof;
  prof.dr = R / static_cast<double>(K);
  const double d2 = 1.0 / (prof.dr * prof.dr);
  std::vector<double> phi(K + 1);
  for (std::size_t i = 0; i <= K; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(K);
    phi[i] = amplitude * s * s;
  }

  std::vector<double> u(spec.a().begin(), spec.a().end());
  auto force = [&](double p, double* slope) {
    u[0] = spec.a()[0] + p;
    if (slope) *slope = spec.hessian(u)[0];
    return spec.grad(u)[0];
  };

  auto residual = [&](const std::vector<double>& f, std::vector<double>& res, std::vector<double>* slopes) {
    double worst = 0.0;
    for (std::size_t i = 0; i < K; ++i) {
      double lap;
      if (i == 0) {
        lap = 2.0 * n * (f[1] - f[0]) * d2;
      } else {
        const double c = (n - 1) / (2.0 * static_cast<double>(i));
        lap = (f[i + 1] - 2.0 * f[i] + f[i - 1]) * d2 + c * (f[i + 1] - f[i - 1]) * d2;
      }
      res[i] = lap - force(f[i], slopes ? &(*slopes)[i] : nullptr);
      worst = std::max(worst, std::abs(res[i]));
    }
    return worst;
  };

  std::vector<double> res(K), slopes(K), lo(K), di(K), up(K);
  const double target = 1e-10 * std::max(1.0, std::abs(amplitude)) * d2;
  double norm = residual(phi, res, &slopes);
  std::size_t steps = 0;
  for (; steps < 200 && norm > target; ++steps) {
    for (std::size_t i = 0; i < K; ++i) {
      if (i == 0) {
        di[i] = -2.0 * n * d2 - slopes[i];
        up[i] = 2.0 * n * d2;
      } else {
        const double c = (n - 1) / (2.0 * static_cast<double>(i));
        lo[i] = (1.0 - c) * d2;
        di[i] = -2.0 * d2 - slopes[i];
        up[i] = (1.0 + c) * d2;
      }
    }
    std::vector<double> delta(res);
    for (double& v : delta) v = -v;
    solve_tridiagonal(lo, di, up, delta);
    // Damped Newton: halve until the residual decreases.
    double t = 1.0;
    std::vector<double> trial(phi);
    double trial_norm = norm;
    for (int k = 0; k < 40; ++k, t *= 0.5) {
      for (std::size_t i = 0; i < K; ++i) trial[i] = phi[i] + t * delta[i];
      trial_norm = residual(trial, res, &slopes);
      if (trial_norm < norm) break;
    }
    if (!(trial_norm < norm)) break;
    phi.swap(trial);
    norm = trial_norm;
  }
  if (!(norm <= target)) throw InvalidArgument("radial profile Newton iteration did not converge");
  prof.values = std::move(phi);
  prof.residual = norm;
  prof.newton_steps = steps;
  return prof;
}

namespace {

// Standard normals from mt19937_64 by Box-Muller, identical on every platform.
class Normal {
 public:
  explicit Normal(std::uint64_t seed) : gen_(seed) {}
  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1;
    do u1 = uniform(); while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

 private:
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct Monomial {
  int i, j, k;
};

}  // namespace

VectorField make_boundary_field(const GridPtr& grid, const PotentialSpec& spec, const BoundarySpec& b) {
  const Grid& g = *grid;
  const int m = spec.m();
  const int n = g.dim();
  const auto a = spec.a();
  if (!(b.amplitude >= 0.0) || !std::isfinite(b.amplitude)) throw InvalidArgument("boundary amplitude must be finite and >= 0");
  VectorField u(grid, m, 0.0);
  for (int c = 0; c < m; ++c) std::fill(u.component(c).begin(), u.component(c).end(), a[c]);
  if (b.tag == BoundaryTag::ConstantA || b.amplitude == 0.0) return u;

  const std::size_t N = g.node_count();
  auto outside = [&](std::size_t k) { return g.kinds()[k] != NodeKind::Interior; };

  switch (b.tag) {
    case BoundaryTag::ConstantA: break;
    case BoundaryTag::Angular: {
      for (std::size_t k = 0; k < N; ++k) {
        if (!outside(k)) continue;
        const Point x = g.point(k);
        const double th = std::atan2(x[1], x[0]);
        u.at(k, 0) = a[0] + b.amplitude * std::cos(b.winding * th);
        if (m >= 2) u.at(k, 1) = a[1] + b.amplitude * std::sin(b.winding * th);
      }
      break;
    }
    case BoundaryTag::RadialProfile: {
      const RadialProfile prof = solve_radial_profile(spec, n, g.r_max(), b.amplitude, g.h() / 4.0);
      for (std::size_t k = 0; k < N; ++k) u.at(k, 0) = a[0] + prof.at(g.radius(k));
      break;
    }
    case BoundaryTag::RandomSeeded: {
      Normal normal(b.seed);
      std::vector<std::vector<double>> coef(static_cast<std::size_t>(m));
      std::vector<Monomial> monos;
      if (n == 2) {
        for (int c = 0; c < m; ++c)
          for (int q = 0; q <= b.modes; ++q) {
            const double s = 1.0 / ((1.0 + q) * (1.0 + q));
            coef[c].push_back(s * normal());
            coef[c].push_back(s * normal());
          }
      } else {
        for (int d = 0; d <= b.modes; ++d)
          for (int i = d; i >= 0; --i)
            for (int j = d - i; j >= 0; --j) monos.push_back({i, j, d - i - j});
        for (int c = 0; c < m; ++c)
          for (const auto& mo : monos) {
            const int d = mo.i + mo.j + mo.k;
            coef[c].push_back(normal() / ((1.0 + d) * (1.0 + d)));
          }
      }
      std::vector<double> val(static_cast<std::size_t>(m));
      std::vector<double> pw[3];
      auto evaluate = [&](std::size_t node) {
        const Point x = g.point(node);
        const double r = g.radius(node);
        if (n == 2) {
          const double th = std::atan2(x[1], x[0]);
          for (int c = 0; c < m; ++c) {
            double s = 0.0;
            for (int q = 0; q <= b.modes; ++q)
              s += coef[c][2 * q] * std::cos(q * th) + coef[c][2 * q + 1] * std::sin(q * th);
            val[c] = s;
          }
        } else {
          for (int d = 0; d < 3; ++d) {
            pw[d].assign(static_cast<std::size_t>(b.modes) + 1, 1.0);
            for (int p = 1; p <= b.modes; ++p) pw[d][p] = pw[d][p - 1] * (x[d] / r);
          }
          for (int c = 0; c < m; ++c) {
            double s = 0.0;
            for (std::size_t t = 0; t < monos.size(); ++t)
              s += coef[c][t] * pw[0][monos[t].i] * pw[1][monos[t].j] * pw[2][monos[t].k];
            val[c] = s;
          }
        }
      };
      double peak = 0.0;
      for (std::size_t k : g.boundary_nodes()) {
        evaluate(k);
        double s = 0.0;
        for (double v : val) s += v * v;
        peak = std::max(peak, std::sqrt(s));
      }
      if (!(peak > 0.0)) break;
      double scale = b.amplitude / peak;
      for (std::size_t k = 0; k < N; ++k) {
        if (!outside(k)) continue;
        evaluate(k);
        for (int c = 0; c < m; ++c) u.at(k, c) = a[c] + scale * val[c];
      }
      // Rounding can push the realized maximum a hair above the amplitude.
      for (int attempt = 0; attempt < 4 && boundary_sup(u, a) > b.amplitude; ++attempt) {
        scale *= 1.0 - 4e-16;
        for (std::size_t k = 0; k < N; ++k) {
          if (!outside(k)) continue;
          evaluate(k);
          for (int c = 0; c < m; ++c) u.at(k, c) = a[c] + scale * val[c];
        }
      }
      break;
    }
  }
  return u;
}

double boundary_sup(const VectorField& u, std::span<const double> a) {
  double worst = 0.0;
  for (std::size_t k : u.grid().boundary_nodes()) {
    double s = 0.0;
    for (int c = 0; c < u.m(); ++c) {
      const double d = u.at(k, c) - a[c];
      s += d * d;
    }
    worst = std::max(worst, std::sqrt(s));
  }
  return worst;
}

}  // namespace aclab
