#include "aclab/minimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "aclab/error.hpp"
#include "aclab/field.hpp"
#include "aclab/parallel.hpp"
#include "aclab/simd/kernels.hpp"

namespace aclab {

namespace {

void check_pair(const VectorField& u, const PotentialSpec& spec) {
  if (u.m() != spec.m()) throw InvalidArgument("potential and field component counts differ");
}

// Reusable buffers for one gradient evaluation.
struct Workspace {
  VectorField lap;
  VectorField grad_w;
  std::vector<double> norm2;

  explicit Workspace(const VectorField& u) : lap(u.grid_ptr(), u.m()), grad_w(u.grid_ptr(), u.m()), norm2(u.node_count()) {}
};

struct GradientInfo {
  double norm2 = 0.0;     // |G|^2 (Euclidean over all entries)
  double residual = 0.0;  // sup over nodes of |Lap u - grad W|
};

// G = h^n (grad W - Lap u) on interior nodes.
GradientInfo energy_gradient(const VectorField& u, const PotentialSpec& spec, Workspace& ws, VectorField& G) {
  const Grid& g = u.grid();
  const auto& k = simd::active_kernels();
  const std::size_t b = g.stencil_begin(), e = g.stencil_end();
  const double inv_h2 = 1.0 / (g.h() * g.h());
  const double scale = g.cell_volume();
  const double* mask = g.interior_mask().data();
  const auto u_planes = u.planes();
  auto gw_planes = ws.grad_w.planes();
  std::fill(ws.norm2.begin(), ws.norm2.end(), 0.0);
  parallel::for_blocks(b, e, [&](std::size_t lo, std::size_t hi) {
    spec.grad_batch(u_planes.data(), lo, hi, gw_planes.data());
    for (int c = 0; c < u.m(); ++c) {
      double* lap = ws.lap.component(c).data();
      double* out = G.component(c).data();
      k.laplacian(u_planes[c], lap, lo, hi, g.strides(), g.dim(), inv_h2);
      k.scaled_residual(out, lap, gw_planes[c], mask, scale, lo, hi);
      k.accumulate_square(ws.norm2.data(), out, lo, hi);
    }
  });
  GradientInfo info;
  info.norm2 = parallel::sum_blocks(b, e, [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += ws.norm2[i];
    return s;
  });
  const double peak = parallel::max_blocks(b, e, [&](std::size_t lo, std::size_t hi) { return k.max_value(ws.norm2.data(), lo, hi); });
  info.residual = std::sqrt(std::max(peak, 0.0)) / scale;
  return info;
}

}  // namespace

double discrete_energy(const VectorField& u, const PotentialSpec& spec) {
  check_pair(u, spec);
  const Grid& g = u.grid();
  const auto& k = simd::active_kernels();
  const std::size_t b = g.stencil_begin(), e = g.stencil_end();
  const auto planes = u.planes();
  const double* mask = g.interior_mask().data();
  std::vector<double> w(u.node_count(), 0.0);
  const double potential = parallel::sum_blocks(b, e, [&](std::size_t lo, std::size_t hi) {
    spec.eval_batch(planes.data(), lo, hi, w.data());
    return k.dot(w.data(), mask, lo, hi);
  });
  double dirichlet = 0.0;
  for (int d = 0; d < g.dim(); ++d) {
    const double* ew = g.edge_weights(d).data();
    const std::size_t s = g.stride(d);
    for (int c = 0; c < u.m(); ++c)
      dirichlet += parallel::sum_blocks(b, e, [&](std::size_t lo, std::size_t hi) {
        return k.weighted_sq_diff(planes[c], s, ew, lo, hi);
      });
  }
  return g.cell_volume() * potential + 0.5 * std::pow(g.h(), g.dim() - 2) * dirichlet;
}

double discrete_energy_change(const VectorField& u, const VectorField& v, const PotentialSpec& spec) {
  check_pair(u, spec);
  if (u.grid_ptr() != v.grid_ptr() || u.m() != v.m()) throw InvalidArgument("energy change needs fields on one grid");
  const Grid& g = u.grid();
  const auto& k = simd::active_kernels();
  const std::size_t b = g.stencil_begin(), e = g.stencil_end();
  const auto up = u.planes();
  const auto vp = v.planes();
  const double* mask = g.interior_mask().data();
  const double potential = parallel::sum_blocks(b, e, [&](std::size_t lo, std::size_t hi) {
    return spec.eval_difference(up.data(), vp.data(), mask, lo, hi);
  });
  double dirichlet = 0.0;
  for (int d = 0; d < g.dim(); ++d) {
    const double* ew = g.edge_weights(d).data();
    const std::size_t s = g.stride(d);
    for (int c = 0; c < u.m(); ++c)
      dirichlet += parallel::sum_blocks(b, e, [&](std::size_t lo, std::size_t hi) {
        return k.weighted_sq_diff_change(up[c], vp[c], s, ew, lo, hi);
      });
  }
  return g.cell_volume() * potential + 0.5 * std::pow(g.h(), g.dim() - 2) * dirichlet;
}

VectorField discrete_energy_gradient(const VectorField& u, const PotentialSpec& spec) {
  check_pair(u, spec);
  Workspace ws(u);
  VectorField G(u.grid_ptr(), u.m());
  energy_gradient(u, spec, ws, G);
  return G;
}

VectorField el_residual_field(const VectorField& u, const PotentialSpec& spec) {
  VectorField r = discrete_energy_gradient(u, spec);
  const double inv = -1.0 / u.grid().cell_volume();
  for (double& x : r.raw()) x *= inv;
  return r;
}

double el_residual(const VectorField& u, const PotentialSpec& spec) {
  check_pair(u, spec);
  Workspace ws(u);
  VectorField G(u.grid_ptr(), u.m());
  return energy_gradient(u, spec, ws, G).residual;
}

double modica_check(const VectorField& u, const PotentialSpec& spec) {
  const ScalarField grad2 = gradient_norm2(u);
  const ScalarField w = potential_density(u, spec);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i : u.grid().interior_nodes()) worst = std::max(worst, 0.5 * grad2[i] - w[i]);
  return worst;
}

SolveResult minimize(const VectorField& u0, const PotentialSpec& spec, double tol, std::size_t max_iter,
                     const MinimizerOptions& opt) {
  check_pair(u0, spec);
  if (!(tol > 0.0)) throw InvalidArgument("minimize: tolerance must be positive");
  for (double x : u0.raw())
    if (!std::isfinite(x)) throw InvalidArgument("minimize: initial field is not finite");

  const auto t0 = std::chrono::steady_clock::now();
  const Grid& g = u0.grid();
  const auto& k = simd::active_kernels();
  const std::size_t b = g.stencil_begin(), e = g.stencil_end();

  VectorField u = u0;
  VectorField v = u0;
  VectorField G(u.grid_ptr(), u.m());
  VectorField G_next(u.grid_ptr(), u.m());
  Workspace ws(u);

  SolveReport rep;
  rep.tolerance = tol;
  rep.initial_energy = discrete_energy(u, spec);
  if (!std::isfinite(rep.initial_energy)) throw DivergedError("minimize: initial energy is not finite", {}, {rep.initial_energy});
  double energy = rep.initial_energy;
  GradientInfo info = energy_gradient(u, spec, ws, G);
  rep.trace_iterations.push_back(0);
  rep.trace_energies.push_back(energy);

  // Stable explicit step for the stencil part; BB steps take over after the first iteration.
  const double alpha0 = 1.0 / (g.cell_volume() * (4.0 * g.dim() / (g.h() * g.h()) + 1.0));
  const double alpha_cap = alpha0 * opt.step_max;
  double alpha = alpha0;
  double log_step_sum = 0.0;
  rep.step_min = std::numeric_limits<double>::infinity();

  std::vector<double> recent_steps, recent_energies;
  auto remember = [&](double a, double en) {
    recent_steps.push_back(a);
    recent_energies.push_back(en);
    if (recent_steps.size() > 32) {
      recent_steps.erase(recent_steps.begin());
      recent_energies.erase(recent_energies.begin());
    }
  };

  rep.stop_reason = "max_iter";
  std::size_t iter = 0;
  while (true) {
    if (info.residual <= tol) {
      rep.converged = true;
      rep.stop_reason = "tolerance";
      break;
    }
    if (iter >= max_iter) break;

    // Armijo backtracking along -G.
    double change = 0.0;
    int tries = 0;
    bool accepted = false;
    while (tries <= opt.max_backtracks) {
      for (int c = 0; c < u.m(); ++c) {
        const double* src = u.component(c).data();
        double* dst = v.component(c).data();
        const double* gc = G.component(c).data();
        parallel::for_blocks(b, e, [&](std::size_t lo, std::size_t hi) {
          std::copy(src + lo, src + hi, dst + lo);
          k.axpy(dst, -alpha, gc, lo, hi);
        });
      }
      change = discrete_energy_change(u, v, spec);
      remember(alpha, energy + change);
      if (!std::isfinite(change))
        throw DivergedError("minimize: energy became non-finite at iteration " + std::to_string(iter), recent_steps,
                            recent_energies);
      if (change <= -opt.armijo_c * alpha * info.norm2) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
      ++tries;
      ++rep.backtracks;
    }
    if (!accepted) {
      rep.stop_reason = "line_search";
      break;
    }
    if (change > 0.0) rep.monotone = false;

    const GradientInfo next = energy_gradient(v, spec, ws, G_next);
    // BB1: s = -alpha G, y = G_next - G; alpha_bb = s.s / s.y.
    double gy = 0.0;
    for (int c = 0; c < u.m(); ++c) {
      const double* g0 = G.component(c).data();
      const double* g1 = G_next.component(c).data();
      gy += parallel::sum_blocks(b, e, [&](std::size_t lo, std::size_t hi) { return k.dot(g0, g1, lo, hi); });
    }
    const double sy = alpha * (info.norm2 - gy);
    const double ss = alpha * alpha * info.norm2;

    rep.step_min = std::min(rep.step_min, alpha);
    rep.step_max = std::max(rep.step_max, alpha);
    log_step_sum += std::log(alpha);

    std::swap(u, v);
    std::swap(G, G_next);
    energy += change;
    info = next;
    ++iter;
    if (opt.trace_every > 0 && iter % opt.trace_every == 0) {
      rep.trace_iterations.push_back(iter);
      rep.trace_energies.push_back(energy);
    }

    if (sy > 0.0 && std::isfinite(ss / sy)) {
      alpha = std::min(ss / sy, alpha_cap);
    } else {
      ++rep.bb_fallbacks;
      alpha = std::min(2.0 * alpha, alpha_cap);
    }
  }

  rep.iterations = iter;
  rep.energy = discrete_energy(u, spec);
  rep.residual = info.residual;
  if (iter == 0) rep.step_min = 0.0;
  rep.step_geometric_mean = iter > 0 ? std::exp(log_step_sum / static_cast<double>(iter)) : 0.0;
  if (rep.trace_iterations.back() != iter) {
    rep.trace_iterations.push_back(iter);
    rep.trace_energies.push_back(rep.energy);
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(u), rep};
}

}  // namespace aclab
