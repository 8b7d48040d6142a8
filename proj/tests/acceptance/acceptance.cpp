// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "aclab/boundary.hpp"
#include "aclab/cli.hpp"
#include "aclab/config.hpp"
#include "aclab/field.hpp"
#include "aclab/growth.hpp"
#include "aclab/minimizer.hpp"
#include "aclab/monotonicity.hpp"
#include "aclab/slice.hpp"

using namespace aclab;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

struct Scratch {
  fs::path root = fs::temp_directory_path() / "aclab_acceptance";
  Scratch() {
    fs::remove_all(root);
    fs::create_directories(root);
  }
  ~Scratch() { fs::remove_all(root); }
  std::string dir(const std::string& name) const { return (root / name).string(); }
};

std::string slurp(const std::string& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

json read_json(const std::string& p) { return json::parse(slurp(p)); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Standard experiment set: n = 2, angular data of amplitude 1, quadratic or
// quartic W (radially increasing everywhere, so r0 = 4 admits truncation at
// the boundary sup).
struct StandardCase {
  int m;
  std::string family;
  double R_max;
  std::string name() const {
    return "m" + std::to_string(m) + "_" + family + "_R" + std::to_string(static_cast<int>(R_max));
  }
  ExperimentConfig config() const {
    std::string y = "n: 2\nm: " + std::to_string(m) + "\nh: 0.1\nR_max: " + fmt("%g", R_max) +
                    "\nseed: 1\npotential:\n  family: " + family + "\n";
    if (family == "power-q") y += "  q: 4\n";
    y += "  constants: {r0: 4}\nboundary:\n  tag: angular\n  amplitude: 1\nsolver:\n  tol: 1e-6\n  max_iter: 400000\n";
    return parse_config(y);
  }
};

std::vector<StandardCase> standard_set() {
  std::vector<StandardCase> out;
  for (int m : {1, 2})
    for (const char* f : {"quadratic", "power-q"})
      for (double R : {4.0, 8.0}) out.push_back({m, f, R});
  return out;
}

// ---------------------------------------------------------------------------

Verdict bootstrap_arithmetic() {
  Verdict v;
  const double a = bootstrap_fixed_point(2, 2.0, 1e-15).k;
  const double b = bootstrap_fixed_point(3, 2.0, 1e-15).k;
  double worst = std::max(std::abs(a - 0.5), std::abs(b - 5.0 / 3.0));
  for (int n : {2, 3})
    for (double q : {2.0, 3.0, 4.0, 6.0}) {
      const double c = 2.0 / (q * n + 2.0);
      for (int i = 1; i <= 50; ++i) {
        const double k = (n - 1.0) * i / 50.0;
        const double k0 = (n - 1.0) / 50.0;
        worst = std::max(worst, std::abs(bootstrap_map(k, n, q) - bootstrap_map(k0, n, q) - c * (k - k0)));
        worst = std::max(worst, std::abs(bootstrap_map(k, n, q) - (n - 1.0 - 2.0 / q * beta_of(k, n, q))));
      }
    }
  v.pass = worst <= 1e-12;
  v.detail = "k*(2,2) = " + fmt("%.17g", a) + ", k*(3,2) = " + fmt("%.17g", b) + ", max identity error " +
             fmt("%.2e", worst);
  return v;
}

Verdict gradient_oracle() {
  Verdict v;
  const auto g = Grid::make(2, 0.1, 2.0);
  const auto spec = PotentialSpec::product_perturbed({0.2, -0.1});
  std::mt19937_64 gen(2024);
  std::normal_distribution<double> N(0.0, 1.0);
  double worst = 0.0;
  for (int pair = 0; pair < 20; ++pair) {
    VectorField u(g, 2), d(g, 2);
    for (std::size_t k = 0; k < g->node_count(); ++k)
      for (int c = 0; c < 2; ++c) {
        u.at(k, c) = 0.7 * N(gen);
        if (g->kind(k) == NodeKind::Interior) d.at(k, c) = N(gen);
      }
    const VectorField G = discrete_energy_gradient(u, spec);
    double dot = 0.0;
    for (std::size_t i = 0; i < G.raw().size(); ++i) dot += G.raw()[i] * d.raw()[i];
    const double t = 1e-5;
    VectorField plus = u, minus = u;
    for (std::size_t i = 0; i < u.raw().size(); ++i) {
      plus.raw()[i] += t * d.raw()[i];
      minus.raw()[i] -= t * d.raw()[i];
    }
    const double fd = discrete_energy_change(minus, plus, spec) / (2.0 * t);
    worst = std::max(worst, std::abs(fd - dot) / std::abs(dot));
  }
  v.pass = worst < 1e-6;
  v.detail = "max relative error " + fmt("%.2e", worst) + " over 20 pairs";
  return v;
}

Verdict tensor_identities() {
  Verdict v;
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double trace = 0.0, gram = 0.0;
  for (int t = 0; t < 10; ++t) {
    const int n = 2 + t % 2;
    const int m = 1 + t % 3;
    const auto g = Grid::make(n, n == 2 ? 0.05 : 0.1, 1.5);
    const auto spec = PotentialSpec::power(std::vector<double>(m, 0.0), 2.0 + t % 3);
    VectorField u(g, m);
    std::vector<double> k(9);
    for (double& x : k) x = 2.0 * U(gen);
    for (std::size_t node = 0; node < g->node_count(); ++node) {
      const Point x = g->point(node);
      for (int c = 0; c < m; ++c)
        u.at(node, c) = std::sin(k[3 * c] * x[0] + k[3 * c + 1] * x[1] + k[3 * c + 2] * x[2] + c);
    }
    const auto T = stress_tensor(u, spec);
    trace = std::max(trace, trace_identity_error(T, u, spec));
    gram = std::min(gram, positivity_check(T, u, spec));
  }
  v.pass = trace <= 1e-12 && gram >= -1e-12;
  v.detail = "trace error " + fmt("%.2e", trace) + ", min Gram eigenvalue " + fmt("%.2e", gram);
  return v;
}

Verdict solution_certificates() {
  Verdict v;
  const auto spec = PotentialSpec::quadratic({0.0});
  std::vector<std::array<double, 4>> q;  // residual, modica, div, pohozaev
  for (double h : {0.1, 0.05, 0.025}) {
    const auto g = Grid::make(2, h, 1.5);
    VectorField u(g, 1);
    for (std::size_t k = 0; k < g->node_count(); ++k) u.at(k, 0) = std::exp(g->point(k)[0]);
    const auto T = stress_tensor(u, spec);
    const auto div = stress_divergence(T);
    double dsup = 0.0;
    for (std::size_t k : g->interior_nodes())
      for (int c = 0; c < 2; ++c) dsup = std::max(dsup, std::abs(div.at(k, c)));
    q.push_back({el_residual(u, spec), std::abs(modica_check(u, spec)), dsup, pohozaev_balance(u, spec, 1.0).balance_error});
  }
  // Measured order: least-squares slope of log error against log h over the
  // three resolutions (the endpoint slope, as h halves uniformly). Pairwise
  // orders are printed alongside.
  const char* names[4] = {"residual", "modica", "div T", "pohozaev balance"};
  double min_order = 1e300;
  for (int i = 0; i < 4; ++i) {
    const double o1 = std::log2(q[0][i] / q[1][i]), o2 = std::log2(q[1][i] / q[2][i]);
    const double fit = 0.5 * std::log2(q[0][i] / q[2][i]);
    min_order = std::min(min_order, fit);
    v.detail += std::string(i ? ", " : "") + names[i] + " " + fmt("%.2f", fit) + " (pairwise " + fmt("%.2f", o1) +
                ", " + fmt("%.2f", o2) + ")";
  }
  v.pass = min_order >= 1.5;
  v.detail = "fitted orders " + v.detail;
  return v;
}

Verdict minimality(const Scratch& s) {
  Verdict v;
  std::size_t compared = 0, expected = 0, failed = 0, unconverged = 0;
  double worst = 1e300;
  for (const auto& sc : standard_set()) {
    const std::string dir = s.dir("competitor_" + sc.name());
    const auto r = cli::run(sc.config(), "competitor", dir);
    if (r.exit_code != cli::kExitOk && r.exit_code != cli::kExitInvariant) {
      v.pass = false;
      v.detail += sc.name() + ": " + r.message + "; ";
      continue;
    }
    const json j = read_json(dir + "/competitor.json");
    if (!j["solve"]["converged"].get<bool>()) {
      ++unconverged;
      continue;
    }
    // Min-truncation exists for scalar fields only; with m = 2 three
    // constructions apply. Any other skip is a failure.
    expected += sc.m == 1 ? 4 : 3;
    for (const auto& k : j["skipped"])
      if (!(sc.m != 1 && k["kind"] == "min-truncation")) {
        v.pass = false;
        v.detail += sc.name() + ": skipped " + k.dump() + "; ";
      }
    for (const auto& c : j["competitors"]) {
      ++compared;
      const double margin = c["difference"].get<double>() + c["slack"].get<double>();
      worst = std::min(worst, margin);
      if (!c["minimality_ok"].get<bool>()) ++failed;
    }
  }
  v.pass = v.pass && failed == 0 && unconverged == 0 && compared == expected;
  v.detail += std::to_string(compared) + "/" + std::to_string(expected) + " comparisons (min-truncation m = 1 only), " + std::to_string(failed) + " below E(u) - delta_q, " +
              std::to_string(unconverged) + " unconverged, min E(v) - E(u) + delta_q = " + fmt("%.3e", worst);
  return v;
}

Verdict energy_growth() {
  Verdict v;
  for (const char* family : {"quadratic", "power-q"}) {
    std::vector<double> ratio;
    std::string line;
    for (double R : {4.0, 8.0, 16.0}) {
      const auto g = Grid::make(2, 0.1, R);
      const auto spec = std::string(family) == "quadratic" ? PotentialSpec::quadratic({0.0, 0.0})
                                                           : PotentialSpec::power({0.0, 0.0}, 4.0);
      const auto data = make_boundary_field(g, spec, {BoundaryTag::Angular, 1.0, 1, 4, 0});
      const auto sol = minimize(data, spec, 1e-6, 400000);
      if (!sol.report.converged) {
        v.pass = false;
        line += " unconverged at R=" + fmt("%g", R);
      }
      const double E = energy_profile(sol.u, spec, {R}).energies[0];
      const double cb = comparison_bound(sol.u, spec, R);
      if (!(E <= cb)) v.pass = false;
      ratio.push_back(E / R);
      line += " R=" + fmt("%g", R) + ": E/R=" + fmt("%.4f", E / R) + " bound/R=" + fmt("%.4f", cb / R);
    }
    for (std::size_t j = 0; j + 1 < ratio.size(); ++j)
      if (ratio[j + 1] > ratio[j] * 1.05) v.pass = false;
    v.detail += std::string(family) + ":" + line + "; ";
  }
  return v;
}

Verdict clearing_out() {
  Verdict v;
  std::mt19937_64 gen(50);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::size_t violations = 0, small_balls = 0;
  for (int t = 0; t < 50; ++t) {
    const int n = t < 25 ? 2 : 3;
    const double S = 2.0 + 4.0 * U(gen);
    const std::size_t K = n == 2 ? static_cast<std::size_t>(2 * M_PI * S / 0.01) : 6000;
    const auto pts = sphere_points(n, S, K);
    // Nonnegative random profile: squared low-order trigonometric sum plus a
    // few narrow bumps.
    std::vector<double> coef(24);
    for (double& c : coef) c = U(gen) - 0.5;
    std::vector<Point> bumps;
    for (int b = 0; b < 3; ++b) bumps.push_back(pts[static_cast<std::size_t>(U(gen) * K) % K]);
    const double width = 0.2 + 0.6 * U(gen);
    std::vector<SphereSample> samples;
    for (const Point& p : pts) {
      double s = 0.1;
      for (int k = 0; k < 8; ++k) s += coef[3 * k] * std::sin((k + 1) * p[0] / S + coef[3 * k + 1] * p[1] / S * 3 + coef[3 * k + 2] * p[2]);
      double e = s * s;
      for (const Point& b : bumps) e += std::exp(-std::pow(geodesic_distance(p, b, S) / width, 2));
      samples.push_back({p, e});
    }
    double emax = 0.0;
    for (const auto& x : samples) emax = std::max(emax, x.value);
    const double eps = (0.2 + 0.6 * U(gen)) * emax;
    const double C4 = holder_constant(samples, n, S, 1.0);
    const double mu = clearing_out_threshold(eps, C4, 1.0, n);
    const SphereNeighborIndex index(pts, S, 2.0);
    const double cell = sphere_area(n, S) / static_cast<double>(K);
    for (std::size_t i = 0; i < K; ++i) {
      double ball = 0.0;
      index.for_each_within(i, 2.0, [&](std::size_t j, double) { ball += samples[j].value * cell; });
      if (ball >= mu) continue;
      ++small_balls;
      double inner = 0.0;
      index.for_each_within(i, 1.0, [&](std::size_t j, double) { inner = std::max(inner, samples[j].value); });
      if (inner > eps) ++violations;
    }
  }
  v.pass = violations == 0 && small_balls > 0;
  v.detail = std::to_string(violations) + " violations among " + std::to_string(small_balls) + " sub-threshold 2-balls";
  return v;
}

Verdict bad_disc_covering(const Scratch& s) {
  Verdict v;
  constexpr double C5 = 5.0;
  std::map<std::string, std::vector<json>> families;
  for (const auto& sc : standard_set()) {
    const std::string dir = s.dir("bad_discs_" + sc.name());
    const auto r = cli::run(sc.config(), "bad-discs", dir);
    const json j = read_json(dir + "/bad_discs.json");
    if (r.exit_code != cli::kExitOk || !j.contains("count")) {
      v.pass = false;
      v.detail += sc.name() + ": " + r.message + "; ";
      continue;
    }
    if (!(j["off_disc_sup"].get<double>() <= j["eps"].get<double>())) v.pass = false;
    families["m=" + std::to_string(sc.m) + " " + sc.family].push_back(j);
  }
  for (const auto& [name, runs] : families) {
    // n = 2: the slice energies are bounded by a constant C3, so
    // N <= M_eps = C5 C3 / mu at every R.
    double C3 = 0.0, mu = 1e300;
    for (const auto& j : runs) {
      C3 = std::max(C3, j["slice_energy"].get<double>());
      mu = std::min(mu, j["mu"].get<double>());
    }
    const double M = C5 * C3 / mu;
    v.detail += name + ": N(R_max = 4, 8) =";
    for (const auto& j : runs) {
      const auto N = j["count"].get<std::size_t>();
      v.detail += " " + std::to_string(N) + " (off-disc " + fmt("%.2e", j["off_disc_sup"].get<double>()) + ")";
      if (static_cast<double>(N) > M) v.pass = false;
    }
    v.detail += ", M_eps = " + fmt("%.1f", M) + "; ";
  }
  return v;
}

Verdict monotonicity(const Scratch& s) {
  Verdict v;
  std::size_t strong = 0, runs = 0;
  for (const auto& sc : standard_set()) {
    const std::string dir = s.dir("monotonicity_" + sc.name());
    const auto r = cli::run(sc.config(), "monotonicity", dir);
    if (!fs::exists(dir + "/monotonicity.json")) {
      v.pass = false;
      v.detail += sc.name() + ": " + r.message + "; ";
      continue;
    }
    const json j = read_json(dir + "/monotonicity.json");
    ++runs;
    if (j["radii"].size() < 8 || !j["weak_ok"].get<bool>()) v.pass = false;
    if (j["strong_checked"].get<bool>()) {
      ++strong;
      if (!j["strong_ok"].get<bool>() || !j["classical_ok"].get<bool>()) v.pass = false;
    }
    if (!j["violations"].empty()) v.detail += sc.name() + " violations " + j["violations"].dump() + "; ";
  }
  v.detail += std::to_string(runs) + " certified solutions, " + std::to_string(strong) + " with the Modica bound";
  return v;
}

Verdict max_principle(const Scratch& s) {
  Verdict v;
  std::size_t violations = 0, unconverged = 0, runs = 0;
  double worst = 0.0;
  for (double q : {3.0, 4.0})
    for (int seed = 1; seed <= 10; ++seed) {
      const std::string y = "n: 2\nm: 2\nh: 0.1\nR_max: 4\nseed: " + std::to_string(seed) +
                            "\npotential:\n  family: power-q\n  q: " + fmt("%g", q) +
                            "\nboundary:\n  tag: random-seeded\n  amplitude: 0.25\n  modes: 6\nsolver:\n  tol: 1e-7\n";
      const std::string dir = s.dir("max_principle_" + std::to_string(seed) + "_" + fmt("%g", q));
      const auto r = cli::run(parse_config(y), "max-principle", dir);
      if (!fs::exists(dir + "/max_principle.json")) {
        v.pass = false;
        v.detail += r.message + "; ";
        continue;
      }
      const json j = read_json(dir + "/max_principle.json");
      ++runs;
      if (!j["solve"]["converged"].get<bool>()) ++unconverged;
      if (!j["sup_ok"].get<bool>()) ++violations;
      worst = std::max(worst, j["interior_sup"].get<double>() - j["r"].get<double>());
    }
  v.pass = v.pass && violations == 0 && unconverged == 0 && runs == 20;
  v.detail += std::to_string(runs) + " minimizers (q = 3, 4; r = r0/4 = 0.25), " + std::to_string(violations) +
              " violations, " + std::to_string(unconverged) + " unconverged, max(sup|u - a| - r) = " + fmt("%.3e", worst);
  return v;
}

Verdict determinism(const Scratch& s) {
  Verdict v;
  const auto cfg = parse_config(
      "n: 2\nm: 2\nh: 0.1\nR_max: 4\nseed: 9\npotential:\n  family: power-q\n  q: 4\n"
      "boundary:\n  tag: random-seeded\n  amplitude: 0.25\nsolver:\n  tol: 1e-7\n");
  std::size_t files = 0;
  for (const auto& sub : cli::subcommands()) {
    const auto a = cli::run(cfg, sub, s.dir("det_a_" + sub));
    const auto b = cli::run(cfg, sub, s.dir("det_b_" + sub));
    if (a.exit_code != b.exit_code || a.artifacts.size() != b.artifacts.size()) {
      v.pass = false;
      v.detail += sub + ": runs differ; ";
      continue;
    }
    for (std::size_t k = 0; k < a.artifacts.size(); ++k) {
      ++files;
      if (slurp(a.artifacts[k]) != slurp(b.artifacts[k])) {
        v.pass = false;
        v.detail += a.artifacts[k] + " differs; ";
      }
    }
  }
  v.detail += std::to_string(files) + " artifacts compared across " + std::to_string(cli::subcommands().size()) +
              " subcommands";
  return v;
}

}  // namespace

int main() {
  const Scratch scratch;
  struct Criterion {
    const char* name;
    double limit_seconds;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {"bootstrap arithmetic", 1.0, bootstrap_arithmetic},
      {"gradient oracle", 10.0, gradient_oracle},
      {"tensor identities", 10.0, tensor_identities},
      {"solution certificates", 60.0, solution_certificates},
      {"minimality vs competitors", 600.0, [&] { return minimality(scratch); }},
      {"energy growth", 1800.0, energy_growth},
      {"clearing-out soundness", 60.0, clearing_out},
      {"bad-disc covering", 300.0, [&] { return bad_disc_covering(scratch); }},
      {"monotonicity", 600.0, [&] { return monotonicity(scratch); }},
      {"maximum principle", 900.0, [&] { return max_principle(scratch); }},
      {"determinism", 1e300, [&] { return determinism(scratch); }},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.limit_seconds;
    const bool pass = v.pass && in_time;
    if (!pass) ++failures;
    std::printf("%s %2zu %s (%.2f s%s): %s\n", pass ? "PASS" : "FAIL", i + 1, c.name, secs,
                in_time ? "" : ", over time limit", v.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
