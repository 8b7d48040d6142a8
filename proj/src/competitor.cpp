#include "aclab/competitor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aclab/error.hpp"
#include "aclab/field.hpp"

namespace aclab {

namespace {

void check_center(const VectorField& u, std::span<const double> a) {
  if (static_cast<int>(a.size()) != u.m()) throw InvalidArgument("zero 'a' and field component counts differ");
}

double distance_to(const VectorField& u, std::size_t k, std::span<const double> a) {
  double s = 0.0;
  for (int c = 0; c < u.m(); ++c) {
    const double d = u.at(k, c) - a[c];
    s += d * d;
  }
  return std::sqrt(s);
}

// Boundary values that differ from u only by rounding are replaced by u's
// own bits, so the competitor carries exactly the same Dirichlet data.
void snap_boundary(const VectorField& u, VectorField& v) {
  for (std::size_t k : u.grid().boundary_nodes()) {
    bool close = true;
    for (int c = 0; c < u.m(); ++c)
      close = close && std::abs(v.at(k, c) - u.at(k, c)) <= 1e-12 * std::max(1.0, std::abs(u.at(k, c)));
    if (close)
      for (int c = 0; c < u.m(); ++c) v.at(k, c) = u.at(k, c);
  }
}

}  // namespace

std::string_view to_string(CompetitorKind kind) {
  switch (kind) {
    case CompetitorKind::Annulus: return "annulus";
    case CompetitorKind::Truncation: return "truncation";
    case CompetitorKind::MinTruncation: return "min-truncation";
    case CompetitorKind::ConstantShell: return "constant-r-shell";
  }
  return "unknown";
}

CompetitorKind competitor_kind_from_string(std::string_view tag) {
  if (tag == "annulus") return CompetitorKind::Annulus;
  if (tag == "truncation") return CompetitorKind::Truncation;
  if (tag == "min-truncation") return CompetitorKind::MinTruncation;
  if (tag == "constant-r-shell") return CompetitorKind::ConstantShell;
  throw InvalidArgument("unknown competitor kind '" + std::string(tag) + "'");
}

double quadrature_slack(const Grid& grid, double base, double coeff) {
  return base + coeff * grid.h() * grid.h() * ball_volume(grid.dim(), grid.r_max());
}

VectorField build_annulus_competitor(const VectorField& u, const PotentialSpec& spec, double S, double width) {
  const Grid& g = u.grid();
  if (spec.m() != u.m()) throw InvalidArgument("potential and field component counts differ");
  if (!(width > 0.0)) throw InvalidArgument("annulus width must be positive");
  if (!(S >= width + 2.0 * g.h() - 1e-12)) throw InvalidArgument("annulus radius too small: need S >= width + 2h");
  if (!(S <= g.r_max() * (1.0 + 1e-12))) throw InvalidArgument("annulus radius exceeds R_max");
  const auto a = spec.a();
  VectorField v = u;
  const double inner = S - width;
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    if (g.kind(k) == NodeKind::Exterior) continue;
    const Point x = g.point(k);
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    if (r > S) continue;
    if (r <= inner) {
      for (int c = 0; c < u.m(); ++c) v.at(k, c) = a[c];
      continue;
    }
    const Point y{S * x[0] / r, S * x[1] / r, S * x[2] / r};
    const double t = (S - r) / width;
    for (int c = 0; c < u.m(); ++c) {
      const double us = interpolate(g, u.component(c), y);
      v.at(k, c) = us + (a[c] - us) * t;
    }
  }
  snap_boundary(u, v);
  return v;
}

double truncation_alpha(double tau, double r) {
  if (!(r > 0.0)) throw InvalidArgument("truncation radius must be positive");
  if (tau <= r) return 1.0;
  if (tau >= 2.0 * r) return 0.0;
  return (2.0 * r - tau) / r;
}

VectorField build_truncation(const VectorField& u, std::span<const double> a, double r, double r0) {
  check_center(u, a);
  if (!(r > 0.0) || !(r < 0.5 * r0)) throw InvalidArgument("truncation needs 0 < r < r0 / 2");
  VectorField v = u;
  const double keep = r * (1.0 + 4.0 * std::numeric_limits<double>::epsilon());
  for (std::size_t k = 0; k < u.node_count(); ++k) {
    const double rho = distance_to(u, k, a);
    if (rho <= keep) continue;
    const double factor = std::min(rho, r) * truncation_alpha(rho, r) / rho;
    for (int c = 0; c < u.m(); ++c) v.at(k, c) = a[c] + factor * (u.at(k, c) - a[c]);
  }
  snap_boundary(u, v);
  return v;
}

VectorField build_constant_shell(const VectorField& u, std::span<const double> a, double r) {
  check_center(u, a);
  if (!(r > 0.0)) throw InvalidArgument("shell radius must be positive");
  VectorField v = u;
  for (std::size_t k = 0; k < u.node_count(); ++k) {
    const double rho = distance_to(u, k, a);
    for (int c = 0; c < u.m(); ++c) v.at(k, c) = rho > 0.0 ? a[c] + r * (u.at(k, c) - a[c]) / rho : a[c];
  }
  snap_boundary(u, v);
  return v;
}

VectorField build_min_truncation(const VectorField& u, double level) {
  if (u.m() != 1) throw Unsupported("min-truncation is defined for scalar fields only");
  if (!std::isfinite(level)) throw InvalidArgument("truncation level must be finite");
  VectorField v = u;
  for (double& x : v.raw()) x = std::min(x, level);
  return v;
}

double select_truncation_level(const VectorField& u, double a, double d, const PotentialSpec& spec) {
  if (u.m() != 1 || spec.m() != 1) throw Unsupported("truncation level selection is defined for scalar fields only");
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t k : u.grid().interior_nodes()) top = std::max(top, u.at(k, 0));
  const double lo = a + d;
  if (!(top >= lo)) throw InvalidArgument("truncation interval [a + d, max u] is empty");
  constexpr int kPoints = 10000;
  double best = lo;
  double best_w = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kPoints; ++i) {
    const double t = lo + (top - lo) * static_cast<double>(i) / (kPoints - 1);
    const double w = spec.eval(std::span<const double>(&t, 1));
    if (w < best_w) {
      best_w = w;
      best = t;
    }
  }
  return best;
}

EnergyDecomposition energy_decomposition(const VectorField& u, std::span<const double> a, const PotentialSpec& spec) {
  check_center(u, a);
  const Grid& g = u.grid();
  const int m = u.m();
  const std::size_t N = g.node_count();
  std::vector<double> rho(N);
  for (std::size_t k = 0; k < N; ++k) rho[k] = distance_to(u, k, a);

  EnergyDecomposition out;
  double grad = 0.0, angular = 0.0;
  for (int d = 0; d < g.dim(); ++d) {
    const auto w = g.edge_weights(d);
    const std::size_t s = g.stride(d);
    for (std::size_t p = g.stencil_begin(); p < g.stencil_end(); ++p) {
      if (w[p] == 0.0) continue;
      const std::size_t q = p + s;
      const double dr = rho[q] - rho[p];
      grad += w[p] * dr * dr;
      if (rho[p] > 0.0 && rho[q] > 0.0) {
        double nn = 0.0;
        for (int c = 0; c < m; ++c) {
          const double dn = (u.at(q, c) - a[c]) / rho[q] - (u.at(p, c) - a[c]) / rho[p];
          nn += dn * dn;
        }
        angular += w[p] * rho[p] * rho[q] * nn;
      }
    }
  }
  const double edge_scale = 0.5 * std::pow(g.h(), g.dim() - 2);
  out.grad_rho = edge_scale * grad;
  out.rho2_grad_nu = edge_scale * angular;
  const ScalarField wv = potential_density(u, spec);
  double pot = 0.0;
  for (std::size_t k : g.interior_nodes()) {
    pot += wv[k];
    if (rho[k] == 0.0) ++out.zero_nodes;
  }
  out.potential = g.cell_volume() * pot;
  return out;
}

double boundary_deviation(const VectorField& u, const VectorField& v) {
  double worst = 0.0;
  for (std::size_t k : u.grid().boundary_nodes()) {
    double s = 0.0;
    for (int c = 0; c < u.m(); ++c) {
      const double d = v.at(k, c) - u.at(k, c);
      s += d * d;
    }
    worst = std::max(worst, std::sqrt(s));
  }
  return worst;
}

CompetitorReport compare_competitor(const VectorField& u, const VectorField& competitor, const PotentialSpec& spec,
                                    CompetitorKind kind, std::map<std::string, double> parameters, double slack) {
  CompetitorReport rep;
  rep.kind = kind;
  rep.energy_u = discrete_energy(u, spec);
  rep.energy_competitor = discrete_energy(competitor, spec);
  rep.difference = discrete_energy_change(u, competitor, spec);
  rep.boundary_deviation = boundary_deviation(u, competitor);
  rep.slack = slack;
  rep.minimality_ok = rep.difference >= -slack;
  rep.parameters = std::move(parameters);
  return rep;
}

MaxPrincipleReport max_principle_check(const VectorField& data, const PotentialSpec& spec, double r,
                                       const MaxPrincipleOptions& opt) {
  if (spec.m() != data.m()) throw InvalidArgument("potential and field component counts differ");
  const Grid& g = data.grid();
  const auto a = spec.a();
  const AssumptionReport assumptions = verify_assumptions(spec, opt.assumption_samples, opt.seed);
  if (!assumptions.monot_ok)
    throw PreconditionError("potential is not radially nondecreasing on (0, r0]; the truncation argument does not apply");
  MaxPrincipleReport rep;
  rep.r = r;
  rep.r0 = spec.constants().r0;
  rep.ball_pos_ok = assumptions.ball_pos_ok;
  if (!(r > 0.0) || !(r < 0.5 * rep.r0)) throw PreconditionError("maximum principle needs 0 < r < r0 / 2");
  for (std::size_t k : g.boundary_nodes()) rep.boundary_sup = std::max(rep.boundary_sup, distance_to(data, k, a));
  if (rep.boundary_sup > r * (1.0 + 1e-12))
    throw PreconditionError("boundary data leave the r-ball around a (sup " + std::to_string(rep.boundary_sup) + ")");

  SolveResult solved = minimize(data, spec, opt.tol, opt.max_iter);
  rep.solve = solved.report;
  const VectorField& u = solved.u;
  const double slack = opt.slack >= 0.0 ? opt.slack : quadrature_slack(g);
  const VectorField truncated = build_truncation(u, a, r, rep.r0);
  rep.truncation = compare_competitor(u, truncated, spec, CompetitorKind::Truncation, {{"r", r}, {"r0", rep.r0}}, slack);
  rep.decomposition_u = energy_decomposition(u, a, spec);
  rep.decomposition_truncated = energy_decomposition(truncated, a, spec);

  const ScalarField wu = potential_density(u, spec);
  const ScalarField wt = potential_density(truncated, spec);
  for (std::size_t k : g.interior_nodes()) {
    rep.interior_sup = std::max(rep.interior_sup, distance_to(u, k, a));
    if (wt[k] > wu[k] * (1.0 + 1e-12) + 1e-300) rep.potential_ordered = false;
  }
  rep.sup_slack = opt.sup_slack >= 0.0 ? opt.sup_slack : 2.0 * g.h();
  rep.sup_ok = rep.interior_sup <= r + rep.sup_slack;
  rep.u = u;

  if (rep.truncation.difference > slack)
    throw InvariantViolation("truncation raised the energy by " + std::to_string(rep.truncation.difference) +
                             " > slack " + std::to_string(slack));
  if (rep.truncation.difference < -slack)
    throw InvariantViolation("truncation beat the computed minimizer by " + std::to_string(-rep.truncation.difference));
  return rep;
}

}  // namespace aclab
