#include "aclab/growth.hpp"

#include <cmath>
#include <limits>

#include "aclab/competitor.hpp"
#include "aclab/error.hpp"
#include "aclab/field.hpp"

namespace aclab {

EnergyProfile energy_profile(const VectorField& u, const PotentialSpec& spec, const std::vector<double>& radii,
                             const std::vector<double>& powers) {
  const Grid& g = u.grid();
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] > 0.0) || !(radii[k] <= g.r_max() * (1.0 + 1e-12)))
      throw InvalidArgument("profile radii must lie in (0, R_max]");
    if (k > 0 && !(radii[k] > radii[k - 1])) throw InvalidArgument("profile radii must increase strictly");
  }
  EnergyProfile p;
  p.radii = radii;
  p.powers = powers.empty() ? std::vector<double>{static_cast<double>(g.dim() - 1)} : powers;
  const ScalarField e = energy_density(u, spec);
  for (double R : radii) p.energies.push_back(integrate_ball(e, R));
  for (double pw : p.powers) {
    std::vector<double> row;
    for (std::size_t j = 0; j < radii.size(); ++j) row.push_back(p.energies[j] / std::pow(radii[j], pw));
    p.normalized.push_back(std::move(row));
  }
  for (std::size_t j = 0; j + 1 < radii.size(); ++j) {
    const double e0 = p.energies[j], e1 = p.energies[j + 1];
    p.slopes.push_back(e0 > 0.0 && e1 > 0.0 ? std::log(e1 / e0) / std::log(radii[j + 1] / radii[j])
                                            : std::numeric_limits<double>::quiet_NaN());
  }
  return p;
}

double comparison_bound(const VectorField& u, const PotentialSpec& spec, double R, double width) {
  const VectorField v = build_annulus_competitor(u, spec, R, width);
  return integrate_ball(energy_density(v, spec), R);
}

namespace {
void check_exponents(int n, double q) {
  if (n < 2) throw InvalidArgument("bootstrap needs n >= 2");
  if (!(q >= 2.0) || !std::isfinite(q)) throw InvalidArgument("bootstrap needs q >= 2");
}
}  // namespace

double bootstrap_map(double k, int n, double q) {
  check_exponents(n, q);
  if (!(k > 0.0) || !(k <= n - 1.0)) throw InvalidArgument("bootstrap map needs 0 < k <= n - 1");
  return n - 1.0 - 2.0 * (n - k) / (q * n + 2.0);
}

double beta_of(double k, int n, double q) {
  check_exponents(n, q);
  if (!(k > 0.0) || !(k <= static_cast<double>(n))) throw InvalidArgument("beta needs 0 < k <= n");
  return q * (n - k) / (q * n + 2.0);
}

FixedPointResult bootstrap_fixed_point(int n, double q, double tol) {
  check_exponents(n, q);
  if (!(tol > 0.0)) throw InvalidArgument("bootstrap tolerance must be positive");
  FixedPointResult r;
  r.contraction = 2.0 / (q * n + 2.0);
  r.exact = n - 1.0 - 2.0 / (q * n);
  double k = n - 1.0;
  r.iterates.push_back(k);
  for (;;) {
    const double next = bootstrap_map(k, n, q);
    ++r.iterations;
    r.iterates.push_back(next);
    const double step = std::abs(next - k);
    k = next;
    if (step <= tol || r.iterations >= 10000) break;
  }
  r.k = k;
  return r;
}

GrowthDiagnostic growth_diagnostic(const std::vector<double>& radii, const std::vector<double>& energies, int n,
                                      double q, double rise_tolerance) {
  if (radii.size() < 3 || radii.size() != energies.size())
    throw InvalidArgument("growth diagnostic needs at least 3 matching (R, E) pairs");
  check_exponents(n, q);
  GrowthDiagnostic d;
  d.radii = radii;
  d.energies = energies;
  d.tolerance = rise_tolerance;
  d.predicted_exponent = n - 1.0 - 2.0 / (q * n);
  d.all_zero = true;
  for (std::size_t j = 0; j < radii.size(); ++j) {
    if (!(radii[j] > 0.0) || (j > 0 && !(radii[j] > radii[j - 1])))
      throw InvalidArgument("growth diagnostic radii must be positive and increasing");
    d.normalized.push_back(energies[j] / std::pow(radii[j], n - 1));
    if (energies[j] != 0.0) d.all_zero = false;
  }
  for (std::size_t j = 0; j + 1 < radii.size(); ++j) {
    const double a = d.normalized[j], b = d.normalized[j + 1];
    double rise = 0.0;
    if (a > 0.0)
      rise = b / a - 1.0;
    else if (b > 0.0)
      rise = std::numeric_limits<double>::infinity();
    d.relative_rises.push_back(rise);
    if (rise > rise_tolerance) d.violations.push_back(j);
  }
  // Least-squares slope over the radii with positive energy.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t cnt = 0;
  for (std::size_t j = 0; j < radii.size(); ++j) {
    if (!(energies[j] > 0.0)) continue;
    const double x = std::log(radii[j]), y = std::log(energies[j]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  const double den = cnt * sxx - sx * sx;
  d.fitted_exponent = cnt >= 2 && den > 0.0 ? (cnt * sxy - sx * sy) / den : 0.0;
  return d;
}

}  // namespace aclab
