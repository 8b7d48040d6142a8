#include "aclab/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <limits>
#include <map>
#include <thread>

#include "aclab/boundary.hpp"
#include "aclab/competitor.hpp"
#include "aclab/error.hpp"
#include "aclab/field.hpp"
#include "aclab/growth.hpp"
#include "aclab/minimizer.hpp"
#include "aclab/monotonicity.hpp"
#include "aclab/potential.hpp"
#include "aclab/slice.hpp"

namespace aclab::cli {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"minimize",       "energy-profile", "bad-discs", "monotonicity",
                                              "max-principle",  "competitor",     "bootstrap", "verify-potential"};
  return names;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

constexpr const char* kSolverLimitation =
    "convergence certifies a discrete critical point reached by energy descent; global minimality is not certified";

// Artifacts of one run. Throwing after partial output is fine: files are
// listed as they are written.
class Context {
 public:
  Context(const ExperimentConfig& cfg, std::string out_dir, RunResult& result)
      : cfg(cfg), hash(config_hash(cfg)), out_(std::move(out_dir)), result_(result) {}

  const ExperimentConfig& cfg;
  const std::string hash;

  std::string path(const std::string& name) const { return (fs::path(out_) / name).string(); }

  json header(const std::string& kind, const std::string& quantity) const {
    json j;
    j["kind"] = kind;
    j["quantity"] = quantity;
    j["units"] = "nondimensional";
    j["config_hash"] = hash;
    j["grid"] = {{"n", cfg.n}, {"m", cfg.m}, {"h", cfg.h}, {"R_max", cfg.R_max}};
    j["seed"] = cfg.seed;
    return j;
  }

  void write_text(const std::string& name, const std::string& text) {
    const std::string p = path(name);
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + p);
    os << text;
    result_.artifacts.push_back(p);
  }

  void add_artifact(const std::string& name) { result_.artifacts.push_back(path(name)); }

  void write_json(const std::string& name, const json& j) { write_text(name, j.dump(2) + "\n"); }

  void write_field(const std::string& name, const VectorField& u) {
    const std::string p = path(name);
    aclab::write_field(p, u);
    result_.artifacts.push_back(p);
    result_.artifacts.push_back(p + ".json");
  }

 private:
  std::string out_;
  RunResult& result_;
};

std::string csv_row(const std::vector<double>& values) {
  std::string s;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) s += ',';
    s += format_number(values[k]);
  }
  return s + "\n";
}

json solve_json(const SolveReport& r) {
  json j;
  j["converged"] = r.converged;
  j["stop_reason"] = r.stop_reason;
  j["iterations"] = r.iterations;
  j["initial_energy"] = r.initial_energy;
  j["energy"] = r.energy;
  j["residual"] = r.residual;
  j["tolerance"] = r.tolerance;
  j["monotone"] = r.monotone;
  j["step_min"] = r.step_min;
  j["step_max"] = r.step_max;
  j["step_geometric_mean"] = r.step_geometric_mean;
  j["backtracks"] = r.backtracks;
  j["bb_fallbacks"] = r.bb_fallbacks;
  j["trace"] = {{"iterations", r.trace_iterations}, {"energies", r.trace_energies}};
  j["limitation"] = kSolverLimitation;
  return j;
}

json competitor_json(const CompetitorReport& r) {
  json j;
  j["kind"] = std::string(to_string(r.kind));
  j["energy_u"] = r.energy_u;
  j["energy_competitor"] = r.energy_competitor;
  j["difference"] = r.difference;
  j["boundary_deviation"] = r.boundary_deviation;
  j["slack"] = r.slack;
  j["minimality_ok"] = r.minimality_ok;
  json p = json::object();
  for (const auto& [k, v] : r.parameters) p[k] = v;
  j["parameters"] = p;
  return j;
}

json decomposition_json(const EnergyDecomposition& d) {
  return {{"grad_rho", d.grad_rho},
          {"rho2_grad_nu", d.rho2_grad_nu},
          {"potential", d.potential},
          {"total", d.total()},
          {"zero_nodes", d.zero_nodes}};
}

json constants_json(const PotentialConstants& c) { return {{"q", c.q}, {"c0", c.c0}, {"r1", c.r1}, {"r0", c.r0}}; }

BoundarySpec boundary_spec(const ExperimentConfig& cfg) {
  BoundarySpec b;
  b.tag = boundary_tag_from_string(cfg.boundary.tag);
  b.amplitude = cfg.boundary.amplitude;
  b.winding = cfg.boundary.winding;
  b.modes = cfg.boundary.modes;
  b.seed = cfg.seed;
  return b;
}

// Evenly spaced schedule j R_max / count, j = 1..count.
std::vector<double> default_radii(const ExperimentConfig& cfg, std::size_t count) {
  std::vector<double> r;
  for (std::size_t j = 1; j <= count; ++j) r.push_back(cfg.R_max * static_cast<double>(j) / static_cast<double>(count));
  return r;
}

SolveResult solve(const ExperimentConfig& cfg, const PotentialSpec& spec) {
  return minimize(initial_field(cfg), spec, cfg.solver.tol, cfg.solver.max_iter);
}

// A field to analyse: the input field as given, or a fresh solve.
struct Solution {
  VectorField u;
  std::optional<SolveReport> report;
};

Solution solution(const ExperimentConfig& cfg, const PotentialSpec& spec) {
  if (!cfg.input_field.empty()) return {initial_field(cfg), std::nullopt};
  SolveResult r = solve(cfg, spec);
  return {std::move(r.u), std::move(r.report)};
}

void attach_solve(json& j, const Solution& s) {
  if (s.report)
    j["solve"] = solve_json(*s.report);
  else
    j["input_field"] = "precomputed";
}

int cmd_minimize(Context& ctx, const PotentialSpec& spec) {
  const SolveResult r = solve(ctx.cfg, spec);
  ctx.write_field("field.bin", r.u);
  json j = ctx.header("solve_report", "discrete energy minimization with Dirichlet data");
  j["potential"] = {{"family", std::string(to_string(spec.family()))}, {"constants", constants_json(spec.constants())}};
  j["boundary"] = ctx.cfg.boundary.tag;
  j["solve"] = solve_json(r.report);
  ctx.write_json("solve_report.json", j);
  return kExitOk;
}

int cmd_energy_profile(Context& ctx, const PotentialSpec& spec) {
  const auto& cfg = ctx.cfg;
  const Solution s = solution(cfg, spec);
  const std::vector<double> radii = cfg.analysis.radii.empty() ? default_radii(cfg, 8) : cfg.analysis.radii;
  const double q = spec.constants().q;
  const double tau = cfg.analysis.tau > 0.0 ? cfg.analysis.tau : 1.0 / (q * cfg.n);
  std::vector<double> powers{cfg.n - 1.0, cfg.n - 1.0 - tau};
  powers.insert(powers.end(), cfg.analysis.powers.begin(), cfg.analysis.powers.end());
  const EnergyProfile prof = energy_profile(s.u, spec, radii, powers);

  std::vector<double> bounds;
  for (double R : radii) {
    const bool ok = R >= cfg.analysis.width + 2.0 * cfg.h - 1e-12;
    bounds.push_back(ok ? comparison_bound(s.u, spec, R, cfg.analysis.width) : std::nan(""));
  }

  std::string csv = "R,E,E_over_R^" + format_number(powers[0]) + ",E_over_R^" + format_number(powers[1]);
  for (std::size_t k = 2; k < powers.size(); ++k) csv += ",E_over_R^" + format_number(powers[k]);
  csv += ",comparison_bound\n";
  for (std::size_t j = 0; j < radii.size(); ++j) {
    std::vector<double> row{radii[j], prof.energies[j]};
    for (const auto& col : prof.normalized) row.push_back(col[j]);
    row.push_back(bounds[j]);
    csv += csv_row(row);
  }
  ctx.write_text("energy_profile.csv", csv);

  json j = ctx.header("energy_profile", "ball energy E(R) and its normalizations");
  attach_solve(j, s);
  j["radii"] = radii;
  j["energies"] = prof.energies;
  j["powers"] = powers;
  j["normalized"] = prof.normalized;
  j["slopes"] = prof.slopes;
  j["comparison_bound"] = bounds;
  json below = json::array();
  for (std::size_t k = 0; k < radii.size(); ++k)
    below.push_back(std::isnan(bounds[k]) ? json(nullptr) : json(prof.energies[k] <= bounds[k]));
  j["below_comparison_bound"] = below;
  if (radii.size() >= 3) {
    const GrowthDiagnostic d = growth_diagnostic(radii, prof.energies, cfg.n, q, cfg.analysis.rise_tolerance);
    j["growth"] = {{"normalized", d.normalized},       {"relative_rises", d.relative_rises},
                   {"violations", d.violations},       {"tolerance", d.tolerance},
                   {"fitted_exponent", d.fitted_exponent}, {"predicted_exponent", d.predicted_exponent},
                   {"all_zero", d.all_zero}};
  }
  ctx.write_json("energy_profile.json", j);
  return kExitOk;
}

int cmd_bad_discs(Context& ctx, const PotentialSpec& spec) {
  const auto& cfg = ctx.cfg;
  const auto& an = cfg.analysis;
  const Solution s = solution(cfg, spec);
  const ScalarField e = energy_density(s.u, spec);
  const double R = an.slice_R > 0.0 ? an.slice_R : 0.5 * (cfg.R_max - cfg.h);
  const GoodRadius good = select_good_radius(e, R, an.radius_samples);
  const std::size_t K = an.sphere_samples ? an.sphere_samples : default_sphere_samples(cfg.n, good.S, cfg.h);
  const auto samples = sample_sphere(e, good.S, K);
  HolderOptions ho;
  ho.region_radius = std::min(cfg.R_max, good.S + 1.0);
  const double c_grid = holder_constant(e, an.alpha, ho);
  const double c_sphere = holder_constant(samples, cfg.n, good.S, an.alpha);
  const double C4 = std::max(c_grid, c_sphere);
  const double mu = clearing_out_threshold(an.eps, C4, an.alpha, cfg.n);

  json j = ctx.header("bad_discs", "greedy covering of the high-energy part of a sphere slice");
  attach_solve(j, s);
  j["good_radius"] = {{"R", R},
                      {"S", good.S},
                      {"slice_energy", good.slice_energy},
                      {"shell_mean", good.shell_mean},
                      {"radii", good.radii},
                      {"energies", good.energies}};
  j["holder"] = {{"alpha", an.alpha}, {"grid", c_grid}, {"sphere", c_sphere}, {"C4", C4}};
  j["eps"] = an.eps;
  j["mu"] = mu;

  int code = kExitOk;
  std::vector<bool> covered;
  try {
    const BadDiscReport rep = find_bad_discs(samples, cfg.n, good.S, an.eps, mu);
    json centers = json::array();
    for (const Point& p : rep.centers) {
      json c = json::array();
      for (int d = 0; d < cfg.n; ++d) c.push_back(p[d]);
      centers.push_back(c);
    }
    j["count"] = rep.count;
    j["centers"] = centers;
    j["center_samples"] = rep.center_samples;
    j["off_disc_sup"] = rep.off_disc_sup;
    j["off_disc_ok"] = rep.off_disc_sup <= an.eps;
    j["slice_energy"] = rep.slice_energy;
    j["overlap_constant"] = rep.overlap_constant;
    j["count_bound"] = rep.count_bound;
    j["count_ok"] = static_cast<double>(rep.count) <= rep.count_bound;
    j["max_ball_energy"] = rep.max_ball_energy;
    j["samples"] = rep.samples.size();
    covered = rep.covered;
    if (rep.off_disc_sup > an.eps) code = kExitInvariant;
  } catch (const ClearingOutViolated& ex) {
    j["clearing_out_violation"] = ex.what();
    code = kExitInvariant;
  }
  ctx.write_json("bad_discs.json", j);
  write_slice_csv(ctx.path("slice.csv"), samples, cfg.n, covered);
  ctx.add_artifact("slice.csv");
  return code;
}

int cmd_monotonicity(Context& ctx, const PotentialSpec& spec) {
  const auto& cfg = ctx.cfg;
  const Solution s = solution(cfg, spec);
  const std::vector<double> radii = cfg.analysis.radii.empty() ? default_radii(cfg, 10) : cfg.analysis.radii;
  MonotonicityOptions opt;
  opt.residual_tol = cfg.solver.tol;
  opt.c_m = cfg.analysis.c_m;
  const MonotonicityReport rep = monotone_quantities(s.u, spec, radii, opt);

  const StressTensorField T = stress_tensor(s.u, spec);
  const VectorField div = stress_divergence(T);
  // Nodes next to the Dirichlet layer see the kink of the data; stay 3h inside.
  const double inner = cfg.R_max - 3.0 * cfg.h;
  double div_sup = 0.0;
  for (std::size_t k : s.u.grid().interior_nodes())
    if (s.u.grid().radius(k) <= inner)
      for (int c = 0; c < div.m(); ++c) div_sup = std::max(div_sup, std::abs(div.at(k, c)));
  const double R_poh = std::min(0.5 * cfg.R_max, cfg.R_max - cfg.h);

  json j = ctx.header("monotonicity", "power-normalized ball energies of a solution");
  attach_solve(j, s);
  j["radii"] = rep.radii;
  j["f"] = rep.f;
  j["f_gradient"] = rep.f_gradient;
  j["f_potential"] = rep.f_potential;
  j["E"] = rep.E;
  j["weak"] = rep.weak;
  j["strong"] = rep.strong;
  j["classical"] = rep.classical;
  json viol = json::array();
  for (const auto& v : rep.violations) viol.push_back({{"sequence", v.sequence}, {"step", v.step}, {"drop", v.drop}});
  j["violations"] = viol;
  j["modica"] = rep.modica;
  j["residual"] = rep.residual;
  j["tolerance"] = rep.tolerance;
  j["strong_checked"] = rep.strong_checked;
  j["weak_ok"] = rep.weak_ok;
  j["strong_ok"] = rep.strong_ok;
  j["classical_ok"] = rep.classical_ok;
  j["trace_identity_error"] = trace_identity_error(T, s.u, spec);
  j["gram_min_eigenvalue"] = positivity_check(T, s.u, spec);
  j["divergence_sup"] = {{"radius", inner}, {"value", div_sup}};
  if (R_poh > 0.0) {
    const PohozaevBalance pb = pohozaev_balance(s.u, spec, R_poh);
    j["pohozaev"] = {{"R", pb.R},       {"volume", pb.volume},   {"boundary", pb.boundary},
                     {"gap", pb.gap},   {"balance_error", pb.balance_error}, {"samples", pb.samples}};
  }
  ctx.write_json("monotonicity.json", j);

  std::string csv = "R,f,E,weak,strong,classical\n";
  for (std::size_t k = 0; k < rep.radii.size(); ++k)
    csv += csv_row({rep.radii[k], rep.f[k], rep.E[k], rep.weak[k], rep.strong[k], rep.classical[k]});
  ctx.write_text("monotonicity.csv", csv);
  return rep.weak_ok && rep.strong_ok && rep.classical_ok ? kExitOk : kExitInvariant;
}

int cmd_max_principle(Context& ctx, const PotentialSpec& spec) {
  const auto& cfg = ctx.cfg;
  const double r = cfg.analysis.r > 0.0 ? cfg.analysis.r : 0.25 * spec.constants().r0;
  MaxPrincipleOptions opt;
  opt.tol = cfg.solver.tol;
  opt.max_iter = cfg.solver.max_iter;
  opt.assumption_samples = cfg.analysis.verify_samples;
  opt.seed = cfg.seed;
  opt.slack = quadrature_slack(*Grid::make(cfg.n, cfg.h, cfg.R_max), cfg.analysis.delta_q_base, cfg.analysis.delta_q_coeff);
  const MaxPrincipleReport rep = max_principle_check(initial_field(cfg), spec, r, opt);
  if (rep.u) ctx.write_field("field.bin", *rep.u);

  json j = ctx.header("max_principle", "interior sup of |u - a| for data inside the r-ball");
  j["r"] = rep.r;
  j["r0"] = rep.r0;
  j["boundary_sup"] = rep.boundary_sup;
  j["interior_sup"] = rep.interior_sup;
  j["sup_slack"] = rep.sup_slack;
  j["sup_ok"] = rep.sup_ok;
  j["ball_pos_ok"] = rep.ball_pos_ok;
  j["potential_ordered"] = rep.potential_ordered;
  j["solve"] = solve_json(rep.solve);
  j["truncation"] = competitor_json(rep.truncation);
  j["decomposition_u"] = decomposition_json(rep.decomposition_u);
  j["decomposition_truncated"] = decomposition_json(rep.decomposition_truncated);
  ctx.write_json("max_principle.json", j);
  if (!rep.solve.converged) return kExitInvariant;
  return rep.sup_ok ? kExitOk : kExitInvariant;
}

int cmd_competitor(Context& ctx, const PotentialSpec& spec) {
  const auto& cfg = ctx.cfg;
  const auto& an = cfg.analysis;
  const Solution s = solution(cfg, spec);
  const Grid& g = s.u.grid();
  const auto a = spec.a();
  const double slack = quadrature_slack(g, an.delta_q_base, an.delta_q_coeff);
  const double gsup = boundary_sup(s.u, a);
  const double r = an.r > 0.0 ? an.r : gsup;

  std::vector<CompetitorKind> kinds;
  if (an.competitors.empty())
    kinds = {CompetitorKind::Annulus, CompetitorKind::Truncation, CompetitorKind::MinTruncation,
             CompetitorKind::ConstantShell};
  else
    for (const auto& k : an.competitors) kinds.push_back(competitor_kind_from_string(k));

  json j = ctx.header("competitor", "energy of same-boundary competitors against the computed minimizer");
  attach_solve(j, s);
  j["slack"] = slack;
  j["boundary_sup"] = gsup;
  json reports = json::array();
  json skipped = json::array();
  bool ok = true;
  for (CompetitorKind kind : kinds) {
    const std::string name(to_string(kind));
    auto skip = [&](const std::string& why) { skipped.push_back({{"kind", name}, {"reason", why}}); };
    std::optional<CompetitorReport> rep;
    switch (kind) {
      case CompetitorKind::Annulus: {
        const double S = an.S > 0.0 ? an.S : cfg.R_max;
        if (S < an.width + 2.0 * cfg.h - 1e-12) {
          skip("annulus radius below width + 2h");
          break;
        }
        rep = compare_competitor(s.u, build_annulus_competitor(s.u, spec, S, an.width), spec, kind,
                                 {{"S", S}, {"width", an.width}}, slack);
        break;
      }
      case CompetitorKind::Truncation: {
        const double r0 = spec.constants().r0;
        if (!(r > 0.0) || !(r < 0.5 * r0)) {
          skip("needs 0 < r < r0/2");
          break;
        }
        rep = compare_competitor(s.u, build_truncation(s.u, a, r, r0), spec, kind, {{"r", r}, {"r0", r0}}, slack);
        break;
      }
      case CompetitorKind::MinTruncation: {
        if (cfg.m != 1) {
          skip("defined for m = 1 only");
          break;
        }
        // The level never drops below the boundary data, so V keeps u's
        // Dirichlet values; an empty scan interval leaves V = u.
        double gmax = -std::numeric_limits<double>::infinity();
        for (std::size_t k : g.boundary_nodes()) gmax = std::max(gmax, s.u.at(k, 0));
        const double d = std::max(an.d, gmax - a[0]);
        double top = -std::numeric_limits<double>::infinity();
        for (std::size_t k : g.interior_nodes()) top = std::max(top, s.u.at(k, 0));
        const double level = top >= a[0] + d ? select_truncation_level(s.u, a[0], d, spec) : a[0] + d;
        rep = compare_competitor(s.u, build_min_truncation(s.u, level), spec, kind,
                                 {{"level", level}, {"d", an.d}, {"boundary_max", gmax}}, slack);
        break;
      }
      case CompetitorKind::ConstantShell: {
        if (!(r > 0.0)) {
          skip("needs r > 0");
          break;
        }
        rep = compare_competitor(s.u, build_constant_shell(s.u, a, r), spec, kind, {{"r", r}}, slack);
        break;
      }
    }
    if (rep) {
      reports.push_back(competitor_json(*rep));
      ok = ok && rep->minimality_ok;
    }
  }
  j["competitors"] = reports;
  j["skipped"] = skipped;
  j["minimality_ok"] = ok;
  // Blow-down bookkeeping for the scalar case: u_eps(y) = u(y / eps), eps = 1/R.
  j["rescaling"] = {{"R", cfg.R_max}, {"eps", 1.0 / cfg.R_max}, {"map", "u_eps(y) = u(y / eps)"}};
  ctx.write_json("competitor.json", j);
  return ok ? kExitOk : kExitInvariant;
}

int cmd_bootstrap(Context& ctx, const PotentialSpec& spec) {
  const auto& cfg = ctx.cfg;
  const double q = spec.constants().q;
  const FixedPointResult fp = bootstrap_fixed_point(cfg.n, q, cfg.analysis.bootstrap_tol);
  json j = ctx.header("bootstrap", "fixed point of the growth-exponent bootstrap");
  j["n"] = cfg.n;
  j["q"] = q;
  j["fixed_point"] = fp.k;
  j["exact"] = fp.exact;
  j["error"] = std::abs(fp.k - fp.exact);
  j["iterations"] = fp.iterations;
  j["contraction"] = fp.contraction;
  j["beta_at_fixed_point"] = beta_of(fp.k, cfg.n, q);
  j["iterates"] = fp.iterates;
  ctx.write_json("bootstrap.json", j);
  return kExitOk;
}

int cmd_verify_potential(Context& ctx, const PotentialSpec& spec) {
  const auto& cfg = ctx.cfg;
  const auto& an = cfg.analysis;
  const AssumptionReport r = verify_assumptions(spec, an.verify_samples, cfg.seed, an.box);
  json j = ctx.header("verify_potential", "sampled check of the standing assumptions on W");
  j["family"] = std::string(to_string(spec.family()));
  j["constants"] = constants_json(spec.constants());
  j["pos"] = {{"ok", r.pos_ok}, {"min_value", r.pos_min_value}, {"worst_point", r.pos_worst_point}};
  j["lower_bound"] = {{"ok", r.lower_bound_ok},
                      {"worst_r", r.lower_bound_worst_r},
                      {"worst_nu", r.lower_bound_worst_nu},
                      {"worst_margin", r.lower_bound_worst_margin}};
  j["radial_monotone"] = {{"ok", r.monot_ok},
                          {"strict_ok", r.monot_strict_ok},
                          {"worst_step", r.monot_worst_step},
                          {"worst_nu", r.monot_worst_nu}};
  j["hessian"] = {{"ok", r.hessian_pd_ok}, {"min_eigenvalue", r.hessian_min_eig}};
  j["ball_pos_ok"] = r.ball_pos_ok;
  j["m_eps"] = {{"eps", an.eps}, {"value", sublevel_radius(spec, an.eps, an.box, 256, 4000, cfg.seed)}};
  j["samples"] = {{"directions", r.direction_samples},
                  {"radial", r.radial_samples},
                  {"box", r.box_samples},
                  {"box_half_width", r.box_half_width}};
  ctx.write_json("verify_potential.json", j);
  return kExitOk;
}

}  // namespace

VectorField initial_field(const ExperimentConfig& cfg) {
  if (!cfg.input_field.empty()) {
    VectorField u = read_field(cfg.input_field);
    const Grid& g = u.grid();
    if (g.dim() != cfg.n || u.m() != cfg.m || g.h() != cfg.h || g.r_max() != cfg.R_max)
      throw ConfigError("input_field " + cfg.input_field + " does not match n, m, h, R_max of the config");
    return u;
  }
  const GridPtr grid = Grid::make(cfg.n, cfg.h, cfg.R_max);
  return make_boundary_field(grid, make_potential(cfg), boundary_spec(cfg));
}

RunResult run(const ExperimentConfig& config, const std::string& subcommand, const std::string& out_dir) {
  RunResult result;
  auto finish = [&](int code, const std::string& msg) {
    result.exit_code = code;
    result.message = msg;
    return result;
  };
  static const std::map<std::string, std::function<int(Context&, const PotentialSpec&)>> table{
      {"minimize", cmd_minimize},           {"energy-profile", cmd_energy_profile},
      {"bad-discs", cmd_bad_discs},         {"monotonicity", cmd_monotonicity},
      {"max-principle", cmd_max_principle}, {"competitor", cmd_competitor},
      {"bootstrap", cmd_bootstrap},         {"verify-potential", cmd_verify_potential}};
  const auto it = table.find(subcommand);
  if (it == table.end()) return finish(kExitConfig, "unknown subcommand '" + subcommand + "'");
  try {
    validate(config);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) return finish(kExitConfig, "cannot create output directory " + out_dir + ": " + ec.message());
    Context ctx(config, out_dir, result);
    ctx.write_text("config.yaml", to_yaml(config));
    const PotentialSpec spec = make_potential(config);
    const int code = it->second(ctx, spec);
    return finish(code, code == kExitOk ? "" : subcommand + ": a checked inequality failed; see the report");
  } catch (const ConfigError& e) {
    return finish(kExitConfig, std::string("config error: ") + e.what());
  } catch (const PreconditionError& e) {
    return finish(kExitConfig, std::string("precondition not met: ") + e.what());
  } catch (const InvalidArgument& e) {
    return finish(kExitConfig, std::string("invalid argument: ") + e.what());
  } catch (const Unsupported& e) {
    return finish(kExitConfig, std::string("unsupported: ") + e.what());
  } catch (const MaskConstructionError& e) {
    return finish(kExitConfig, std::string("grid error: ") + e.what());
  } catch (const DivergedError& e) {
    return finish(kExitDiverged, std::string("solver diverged: ") + e.what());
  } catch (const InvariantViolation& e) {
    return finish(kExitInvariant, std::string("invariant violated: ") + e.what());
  } catch (const NotASolution& e) {
    return finish(kExitInvariant, std::string("not a solution: ") + e.what());
  } catch (const ClearingOutViolated& e) {
    return finish(kExitInvariant, std::string("clearing-out violated: ") + e.what());
  } catch (const std::exception& e) {
    return finish(1, std::string("error: ") + e.what());
  }
}

std::vector<RunResult> run_batch(const std::vector<BatchJob>& batch, unsigned jobs) {
  std::vector<RunResult> results(batch.size());
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(batch.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < batch.size();)
      results[k] = run(batch[k].config, batch[k].subcommand, batch[k].out_dir);
  };
  std::vector<std::thread> threads;
  for (unsigned t = 1; t < jobs; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  return results;
}

}  // namespace aclab::cli
