#include "aclab/monotonicity.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "aclab/error.hpp"
#include "aclab/field.hpp"
#include "aclab/minimizer.hpp"

namespace aclab {

StressTensorField stress_tensor(const VectorField& u, const PotentialSpec& spec) {
  const Grid& g = u.grid();
  const int n = g.dim();
  const std::size_t N = g.node_count();
  const Gradient grad = centered_gradient(u);
  const ScalarField w = potential_density(u, spec);
  StressTensorField T{u.grid_ptr(), n, std::vector<double>(static_cast<std::size_t>(n) * n * N, 0.0)};
  std::vector<double> norm2(N, 0.0);
  for (int d = 0; d < n; ++d)
    for (int c = 0; c < u.m(); ++c) {
      const double* p = grad.plane(d, c);
      for (std::size_t k = 0; k < N; ++k) norm2[k] += p[k] * p[k];
    }
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double* dst = T.data.data() + (static_cast<std::size_t>(i) * n + j) * N;
      for (int c = 0; c < u.m(); ++c) {
        const double* pi = grad.plane(i, c);
        const double* pj = grad.plane(j, c);
        for (std::size_t k = 0; k < N; ++k) dst[k] += pi[k] * pj[k];
      }
      if (i == j)
        for (std::size_t k = 0; k < N; ++k) dst[k] -= 0.5 * norm2[k] + w[k];
      else
        std::copy(dst, dst + N, T.data.data() + (static_cast<std::size_t>(j) * n + i) * N);
    }
  return T;
}

VectorField stress_divergence(const StressTensorField& T) {
  const Grid& g = *T.grid;
  const int n = T.n;
  VectorField div(T.grid, n, 0.0);
  const double inv_2h = 0.5 / g.h();
  for (std::size_t k : g.interior_nodes()) {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) {
        const double* p = T.plane(i, j);
        const std::size_t st = g.stride(i);
        s += (p[k + st] - p[k - st]) * inv_2h;
      }
      div.at(k, j) = s;
    }
  }
  return div;
}

ScalarField stress_trace(const StressTensorField& T) {
  ScalarField tr(T.grid, 0.0);
  auto v = tr.values();
  for (int i = 0; i < T.n; ++i) {
    const double* p = T.plane(i, i);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] += p[k];
  }
  return tr;
}

double trace_identity_error(const StressTensorField& T, const VectorField& u, const PotentialSpec& spec) {
  const int n = T.n;
  const ScalarField g2 = gradient_norm2(u);
  const ScalarField w = potential_density(u, spec);
  const ScalarField tr = stress_trace(T);
  double worst = 0.0;
  for (std::size_t k : u.grid().interior_nodes()) {
    const double expected = -(0.5 * (n - 2) * g2[k] + n * w[k]);
    const double e = 0.5 * g2[k] + w[k];
    worst = std::max(worst, std::abs(tr[k] - expected) / std::max(1.0, std::abs(e)));
  }
  return worst;
}

double positivity_check(const StressTensorField& T, const VectorField& u, const PotentialSpec& spec) {
  const ScalarField e = energy_density(u, spec);
  const int n = T.n;
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t k : u.grid().interior_nodes()) {
    double lo;
    if (n == 2) {
      Eigen::Matrix2d M;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) M(i, j) = T.at(i, j, k) + (i == j ? e[k] : 0.0);
      lo = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(M, Eigen::EigenvaluesOnly).eigenvalues()(0);
    } else {
      Eigen::Matrix3d M;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) M(i, j) = T.at(i, j, k) + (i == j ? e[k] : 0.0);
      lo = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(M, Eigen::EigenvaluesOnly).eigenvalues()(0);
    }
    worst = std::min(worst, lo);
  }
  return worst;
}

PohozaevBalance pohozaev_balance(const VectorField& u, const PotentialSpec& spec, double R, std::size_t K) {
  const Grid& g = u.grid();
  if (!(R > 0.0) || !(R + g.h() <= g.r_max() * (1.0 + 1e-12)))
    throw InvalidArgument("Pohozaev balance needs 0 < R and R + h <= R_max");
  const int n = g.dim();
  if (K == 0) K = default_sphere_samples(n, R, g.h());
  const StressTensorField T = stress_tensor(u, spec);
  const ScalarField e = energy_density(u, spec);
  PohozaevBalance out;
  out.R = R;
  out.samples = K;
  out.volume = integrate_ball(stress_trace(T), R);
  const auto pts = sphere_points(n, R, K);
  double normal_stress = 0.0, energy = 0.0;
  for (const Point& x : pts) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double Tij = interpolate(g, {T.plane(i, j), g.node_count()}, x);
        s += (x[i] / R) * Tij * (x[j] / R);
      }
    normal_stress += s;
    energy += interpolate(g, e.values(), x);
  }
  const double weight = sphere_area(n, R) / static_cast<double>(K);
  out.boundary = R * weight * normal_stress;
  out.gap = out.boundary + R * weight * energy;
  out.balance_error = std::abs(out.volume - out.boundary);
  return out;
}

MonotonicityReport monotone_quantities(const VectorField& u, const PotentialSpec& spec, const std::vector<double>& radii,
                                       const MonotonicityOptions& opt) {
  const Grid& g = u.grid();
  const int n = g.dim();
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] > 0.0) || !(radii[k] <= g.r_max() * (1.0 + 1e-12)))
      throw InvalidArgument("monotonicity radii must lie in (0, R_max]");
    if (k > 0 && !(radii[k] > radii[k - 1])) throw InvalidArgument("monotonicity radii must increase strictly");
  }
  MonotonicityReport rep;
  rep.residual = el_residual(u, spec);
  if (!(rep.residual <= opt.residual_tol))
    throw NotASolution("field residual " + std::to_string(rep.residual) + " exceeds " + std::to_string(opt.residual_tol));
  rep.radii = radii;
  rep.tolerance = opt.c_m * g.h();
  rep.modica = modica_check(u, spec);
  rep.strong_checked = rep.modica <= rep.tolerance;

  const ScalarField g2 = gradient_norm2(u);
  const ScalarField w = potential_density(u, spec);
  for (double R : radii) {
    const BallQuadrature q = ball_quadrature(g, R);
    const double grad_int = integrate(q, g2.values());
    const double w_int = integrate(q, w.values());
    const double fg = 0.5 * (n - 2) * grad_int;
    const double fw = n * w_int;
    rep.f_gradient.push_back(fg);
    rep.f_potential.push_back(fw);
    rep.f.push_back(fg + fw);
    rep.E.push_back(0.5 * grad_int + w_int);
    rep.weak.push_back(std::pow(R, 2 - n) * (fg + fw));
    rep.strong.push_back(std::pow(R, 1 - n) * (fg + fw));
    rep.classical.push_back(std::pow(R, 1 - n) * (0.5 * grad_int + w_int));
  }
  auto scan = [&](const std::vector<double>& seq, const char* name, bool& ok) {
    for (std::size_t k = 0; k + 1 < seq.size(); ++k) {
      const double drop = seq[k] - seq[k + 1];
      if (drop > rep.tolerance) {
        rep.violations.push_back({name, k, drop});
        ok = false;
      }
    }
  };
  scan(rep.weak, "weak", rep.weak_ok);
  if (rep.strong_checked) {
    scan(rep.strong, "strong", rep.strong_ok);
    scan(rep.classical, "classical", rep.classical_ok);
  }
  return rep;
}

}  // namespace aclab
