#include "aclab/config.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "aclab/error.hpp"

namespace aclab {

namespace {

using LineOf = std::function<int(const std::string&)>;

int line_of(const YAML::Node& node) { return node.Mark().line >= 0 ? node.Mark().line + 1 : 0; }

// Walks a YAML mapping, remembering the line of every key path and
// rejecting keys it does not know.
class Reader {
 public:
  std::map<std::string, int> lines;

  void expect_map(const YAML::Node& node, const std::string& path, const std::set<std::string>& allowed) {
    if (!node.IsMap()) throw ConfigError("'" + path + "' must be a mapping", line_of(node));
    for (const auto& kv : node) {
      const std::string key = kv.first.as<std::string>();
      const std::string full = path.empty() ? key : path + "." + key;
      lines[full] = line_of(kv.first);
      if (!allowed.count(key)) throw ConfigError("unknown key '" + full + "'", line_of(kv.first));
    }
  }

  template <class T>
  T get(const YAML::Node& node, const std::string& path, const char* what) {
    if (!node.IsScalar()) throw ConfigError("'" + path + "' must be " + what, line_of(node));
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError("'" + path + "' must be " + what + ", got '" + node.Scalar() + "'", line_of(node));
    }
  }

  double number(const YAML::Node& node, const std::string& path) {
    const double v = get<double>(node, path, "a number");
    if (!std::isfinite(v)) throw ConfigError("'" + path + "' must be finite", line_of(node));
    return v;
  }

  template <class T>
  std::vector<T> list(const YAML::Node& node, const std::string& path, const char* what) {
    if (!node.IsSequence()) throw ConfigError("'" + path + "' must be a list", line_of(node));
    std::vector<T> out;
    for (const auto& item : node) {
      if constexpr (std::is_same_v<T, double>)
        out.push_back(number(item, path));
      else
        out.push_back(get<T>(item, path, what));
    }
    return out;
  }

  int line(const std::string& path) const {
    // Fall back to the closest recorded parent.
    std::string p = path;
    while (!p.empty()) {
      const auto it = lines.find(p);
      if (it != lines.end()) return it->second;
      const auto dot = p.rfind('.');
      p = dot == std::string::npos ? std::string() : p.substr(0, dot);
    }
    return 0;
  }
};

void fail(const LineOf& line_of_key, const std::string& key, const std::string& message) {
  throw ConfigError(message, line_of_key ? line_of_key(key) : 0);
}

PotentialSpec build_potential(const PotentialBlock& p, int m, std::optional<PotentialConstants> constants) {
  std::vector<double> a = p.a.empty() ? std::vector<double>(static_cast<std::size_t>(m), 0.0) : p.a;
  const PotentialFamily family = potential_family_from_string(p.family);
  PotentialSpec spec = [&] {
    switch (family) {
      case PotentialFamily::Quadratic: return PotentialSpec::quadratic(a, constants);
      case PotentialFamily::PowerQ: return PotentialSpec::power(a, p.q, constants);
      case PotentialFamily::AnisotropicPower: return PotentialSpec::anisotropic_power(a, p.coeffs, p.powers, constants);
      case PotentialFamily::ProductPerturbed: return PotentialSpec::product_perturbed(a, constants);
      case PotentialFamily::DoubleWell: return PotentialSpec::double_well(a, constants);
    }
    throw InvalidArgument("unknown potential family");
  }();
  return p.scale != 1.0 ? spec.scaled(p.scale) : spec;
}

void validate_impl(const ExperimentConfig& c, const LineOf& L) {
  if (c.n != 2 && c.n != 3) fail(L, "n", "n must be 2 or 3");
  if (c.m < 1 || c.m > 16) fail(L, "m", "m must be between 1 and 16");
  if (!(c.h > 0.0)) fail(L, "h", "h must be positive");
  if (!(c.R_max > 0.0)) fail(L, "R_max", "R_max must be positive");
  if (c.R_max / c.h > (c.n == 3 ? 400.0 : 4096.0)) fail(L, "R_max", "R_max / h is too large for an n = " + std::to_string(c.n) + " grid");

  const auto& p = c.potential;
  if (!p.a.empty() && static_cast<int>(p.a.size()) != c.m) fail(L, "potential.a", "potential.a needs m entries");
  try {
    build_potential(p, c.m, p.constants);
  } catch (const InvalidArgument& e) {
    fail(L, "potential", e.what());
  }

  const auto& b = c.boundary;
  static const std::set<std::string> tags{"constant-a", "radial-profile", "angular", "random-seeded"};
  if (!tags.count(b.tag)) fail(L, "boundary.tag", "unknown boundary tag '" + b.tag + "'");
  if (!(b.amplitude >= 0.0)) fail(L, "boundary.amplitude", "boundary.amplitude must be nonnegative");
  if (b.winding < 0) fail(L, "boundary.winding", "boundary.winding must be nonnegative");
  if (b.modes < 0 || b.modes > 32) fail(L, "boundary.modes", "boundary.modes must be between 0 and 32");

  if (!(c.solver.tol > 0.0)) fail(L, "solver.tol", "solver.tol must be positive");

  const auto& an = c.analysis;
  for (std::size_t k = 0; k < an.radii.size(); ++k) {
    if (!(an.radii[k] > 0.0) || an.radii[k] > c.R_max * (1.0 + 1e-12))
      fail(L, "analysis.radii", "analysis.radii must lie in (0, R_max]");
    if (k > 0 && !(an.radii[k] > an.radii[k - 1])) fail(L, "analysis.radii", "analysis.radii must increase strictly");
  }
  if (!(an.tau >= 0.0)) fail(L, "analysis.tau", "analysis.tau must be nonnegative");
  if (!(an.eps > 0.0)) fail(L, "analysis.eps", "analysis.eps must be positive");
  if (!(an.alpha > 0.0 && an.alpha <= 1.0)) fail(L, "analysis.alpha", "analysis.alpha must lie in (0, 1]");
  if (!(an.slice_R >= 0.0) || 2.0 * an.slice_R + c.h > c.R_max * (1.0 + 1e-12))
    fail(L, "analysis.slice_R", "analysis.slice_R must satisfy 2 slice_R + h <= R_max");
  if (an.radius_samples < 1) fail(L, "analysis.radius_samples", "analysis.radius_samples must be positive");
  if (an.sphere_samples != 0 && an.sphere_samples < 8) fail(L, "analysis.sphere_samples", "analysis.sphere_samples must be 0 or at least 8");
  if (!(an.r >= 0.0)) fail(L, "analysis.r", "analysis.r must be nonnegative");
  if (!(an.S >= 0.0) || an.S > c.R_max * (1.0 + 1e-12)) fail(L, "analysis.S", "analysis.S must lie in [0, R_max]");
  if (!(an.width > 0.0)) fail(L, "analysis.width", "analysis.width must be positive");
  static const std::set<std::string> kinds{"annulus", "truncation", "min-truncation", "constant-r-shell"};
  for (const auto& k : an.competitors)
    if (!kinds.count(k)) fail(L, "analysis.competitors", "unknown competitor kind '" + k + "'");
  if (!(an.delta_q_base >= 0.0) || !(an.delta_q_coeff >= 0.0)) fail(L, "analysis", "quadrature slack must be nonnegative");
  if (!(an.c_m >= 0.0)) fail(L, "analysis.c_m", "analysis.c_m must be nonnegative");
  if (!(an.rise_tolerance >= 0.0)) fail(L, "analysis.rise_tolerance", "analysis.rise_tolerance must be nonnegative");
  if (!(an.bootstrap_tol > 0.0)) fail(L, "analysis.bootstrap_tol", "analysis.bootstrap_tol must be positive");
  if (an.verify_samples < 1) fail(L, "analysis.verify_samples", "analysis.verify_samples must be positive");
  if (!(an.box > 0.0)) fail(L, "analysis.box", "analysis.box must be positive");
  if (c.output.empty()) fail(L, "output", "output must not be empty");
}

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  // Keep a decimal point or exponent so the value reads back as a float.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.msg, e.mark.line >= 0 ? e.mark.line + 1 : 0);
  }
  if (!root.IsMap()) throw ConfigError("configuration must be a YAML mapping", 1);

  Reader rd;
  ExperimentConfig c;
  rd.expect_map(root, "", {"n", "m", "h", "R_max", "seed", "potential", "boundary", "solver", "analysis", "input_field", "output"});
  if (root["n"]) c.n = rd.get<int>(root["n"], "n", "an integer");
  if (root["m"]) c.m = rd.get<int>(root["m"], "m", "an integer");
  if (root["h"]) c.h = rd.number(root["h"], "h");
  if (root["R_max"]) c.R_max = rd.number(root["R_max"], "R_max");
  if (root["seed"]) c.seed = rd.get<std::uint64_t>(root["seed"], "seed", "a nonnegative integer");
  if (root["input_field"]) c.input_field = rd.get<std::string>(root["input_field"], "input_field", "a path");
  if (root["output"]) c.output = rd.get<std::string>(root["output"], "output", "a path");

  if (const auto p = root["potential"]) {
    rd.expect_map(p, "potential", {"family", "a", "q", "coeffs", "powers", "scale", "constants"});
    auto& pb = c.potential;
    if (p["family"]) pb.family = rd.get<std::string>(p["family"], "potential.family", "a family tag");
    if (p["a"]) pb.a = rd.list<double>(p["a"], "potential.a", "a number");
    if (p["q"]) pb.q = rd.number(p["q"], "potential.q");
    if (p["coeffs"]) pb.coeffs = rd.list<double>(p["coeffs"], "potential.coeffs", "a number");
    if (p["powers"]) pb.powers = rd.list<int>(p["powers"], "potential.powers", "an integer");
    if (p["scale"]) pb.scale = rd.number(p["scale"], "potential.scale");
    if (const auto k = p["constants"]) {
      rd.expect_map(k, "potential.constants", {"q", "c0", "r1", "r0"});
      // Unspecified constants take the family's defaults.
      PotentialConstants pc;
      try {
        PotentialBlock unscaled = pb;
        unscaled.scale = 1.0;
        pc = build_potential(unscaled, c.m, std::nullopt).constants();
      } catch (const InvalidArgument& e) {
        throw ConfigError(e.what(), rd.line("potential"));
      }
      if (k["q"]) pc.q = rd.number(k["q"], "potential.constants.q");
      if (k["c0"]) pc.c0 = rd.number(k["c0"], "potential.constants.c0");
      if (k["r1"]) pc.r1 = rd.number(k["r1"], "potential.constants.r1");
      if (k["r0"]) pc.r0 = rd.number(k["r0"], "potential.constants.r0");
      pb.constants = pc;
    }
  }
  if (c.potential.a.empty() && c.m >= 1 && c.m <= 16) c.potential.a.assign(static_cast<std::size_t>(c.m), 0.0);

  if (const auto b = root["boundary"]) {
    rd.expect_map(b, "boundary", {"tag", "amplitude", "winding", "modes"});
    auto& bb = c.boundary;
    if (b["tag"]) bb.tag = rd.get<std::string>(b["tag"], "boundary.tag", "a boundary tag");
    if (b["amplitude"]) bb.amplitude = rd.number(b["amplitude"], "boundary.amplitude");
    if (b["winding"]) bb.winding = rd.get<int>(b["winding"], "boundary.winding", "an integer");
    if (b["modes"]) bb.modes = rd.get<int>(b["modes"], "boundary.modes", "an integer");
  }

  if (const auto s = root["solver"]) {
    rd.expect_map(s, "solver", {"tol", "max_iter"});
    if (s["tol"]) c.solver.tol = rd.number(s["tol"], "solver.tol");
    if (s["max_iter"]) c.solver.max_iter = rd.get<std::uint64_t>(s["max_iter"], "solver.max_iter", "a nonnegative integer");
  }

  if (const auto a = root["analysis"]) {
    rd.expect_map(a, "analysis",
                  {"radii", "powers", "tau", "eps", "alpha", "slice_R", "radius_samples", "sphere_samples", "r", "S",
                   "width", "d", "competitors", "delta_q_base", "delta_q_coeff", "c_m", "rise_tolerance",
                   "bootstrap_tol", "verify_samples", "box"});
    auto& an = c.analysis;
    auto num = [&](const char* key, double& dst) {
      if (a[key]) dst = rd.number(a[key], std::string("analysis.") + key);
    };
    auto count = [&](const char* key, std::uint64_t& dst) {
      if (a[key]) dst = rd.get<std::uint64_t>(a[key], std::string("analysis.") + key, "a nonnegative integer");
    };
    if (a["radii"]) an.radii = rd.list<double>(a["radii"], "analysis.radii", "a number");
    if (a["powers"]) an.powers = rd.list<double>(a["powers"], "analysis.powers", "a number");
    if (a["competitors"]) an.competitors = rd.list<std::string>(a["competitors"], "analysis.competitors", "a competitor kind");
    num("tau", an.tau);
    num("eps", an.eps);
    num("alpha", an.alpha);
    num("slice_R", an.slice_R);
    count("radius_samples", an.radius_samples);
    count("sphere_samples", an.sphere_samples);
    num("r", an.r);
    num("S", an.S);
    num("width", an.width);
    num("d", an.d);
    num("delta_q_base", an.delta_q_base);
    num("delta_q_coeff", an.delta_q_coeff);
    num("c_m", an.c_m);
    num("rise_tolerance", an.rise_tolerance);
    num("bootstrap_tol", an.bootstrap_tol);
    count("verify_samples", an.verify_samples);
    num("box", an.box);
  }

  validate_impl(c, [&rd](const std::string& key) { return rd.line(key); });
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read configuration file " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

void validate(const ExperimentConfig& config) { validate_impl(config, nullptr); }

std::string to_yaml(const ExperimentConfig& c) {
  YAML::Emitter out;
  auto num = [&](const char* key, double v) { out << YAML::Key << key << YAML::Value << shortest(v); };
  auto nums = [&](const char* key, const std::vector<double>& v) {
    out << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (double x : v) out << shortest(x);
    out << YAML::EndSeq;
  };
  out << YAML::BeginMap;
  out << YAML::Key << "n" << YAML::Value << c.n;
  out << YAML::Key << "m" << YAML::Value << c.m;
  num("h", c.h);
  num("R_max", c.R_max);
  out << YAML::Key << "seed" << YAML::Value << c.seed;

  out << YAML::Key << "potential" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "family" << YAML::Value << c.potential.family;
  nums("a", c.potential.a);
  num("q", c.potential.q);
  nums("coeffs", c.potential.coeffs);
  out << YAML::Key << "powers" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (int p : c.potential.powers) out << p;
  out << YAML::EndSeq;
  num("scale", c.potential.scale);
  if (c.potential.constants) {
    out << YAML::Key << "constants" << YAML::Value << YAML::BeginMap;
    num("q", c.potential.constants->q);
    num("c0", c.potential.constants->c0);
    num("r1", c.potential.constants->r1);
    num("r0", c.potential.constants->r0);
    out << YAML::EndMap;
  }
  out << YAML::EndMap;

  out << YAML::Key << "boundary" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "tag" << YAML::Value << c.boundary.tag;
  num("amplitude", c.boundary.amplitude);
  out << YAML::Key << "winding" << YAML::Value << c.boundary.winding;
  out << YAML::Key << "modes" << YAML::Value << c.boundary.modes;
  out << YAML::EndMap;

  out << YAML::Key << "solver" << YAML::Value << YAML::BeginMap;
  num("tol", c.solver.tol);
  out << YAML::Key << "max_iter" << YAML::Value << c.solver.max_iter;
  out << YAML::EndMap;

  const auto& an = c.analysis;
  out << YAML::Key << "analysis" << YAML::Value << YAML::BeginMap;
  nums("radii", an.radii);
  nums("powers", an.powers);
  num("tau", an.tau);
  num("eps", an.eps);
  num("alpha", an.alpha);
  num("slice_R", an.slice_R);
  out << YAML::Key << "radius_samples" << YAML::Value << an.radius_samples;
  out << YAML::Key << "sphere_samples" << YAML::Value << an.sphere_samples;
  num("r", an.r);
  num("S", an.S);
  num("width", an.width);
  num("d", an.d);
  out << YAML::Key << "competitors" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (const auto& k : an.competitors) out << k;
  out << YAML::EndSeq;
  num("delta_q_base", an.delta_q_base);
  num("delta_q_coeff", an.delta_q_coeff);
  num("c_m", an.c_m);
  num("rise_tolerance", an.rise_tolerance);
  num("bootstrap_tol", an.bootstrap_tol);
  out << YAML::Key << "verify_samples" << YAML::Value << an.verify_samples;
  num("box", an.box);
  out << YAML::EndMap;

  out << YAML::Key << "input_field" << YAML::Value << YAML::DoubleQuoted << c.input_field;
  out << YAML::Key << "output" << YAML::Value << YAML::DoubleQuoted << c.output;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::string config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : to_yaml(config)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

PotentialSpec make_potential(const ExperimentConfig& config) {
  return build_potential(config.potential, config.m, config.potential.constants);
}

}  // namespace aclab
