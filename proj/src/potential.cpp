#include "aclab/potential.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "aclab/error.hpp"

namespace aclab {

namespace {

constexpr int kMaxM = 16;

double int_pow(double x, int p) {
  double r = 1.0;
  for (int k = 0; k < p; ++k) r *= x;
  return r;
}

// |d|^q with cheap paths for the exponents used in practice.
double norm_pow(double norm2, double q) {
  if (q == 2.0) return norm2;
  if (q == 4.0) return norm2 * norm2;
  return std::pow(norm2, 0.5 * q);
}

void check_finite(std::span<const double> u, int m) {
  if (static_cast<int>(u.size()) != m)
    throw InvalidArgument("potential: point has " + std::to_string(u.size()) + " components, expected " +
                          std::to_string(m));
  for (double v : u)
    if (!std::isfinite(v)) throw InvalidArgument("potential: non-finite input");
}

PotentialConstants pick(const std::optional<PotentialConstants>& given, PotentialConstants fallback) {
  return given ? *given : fallback;
}

}  // namespace

std::string_view to_string(PotentialFamily family) {
  switch (family) {
    case PotentialFamily::Quadratic: return "quadratic";
    case PotentialFamily::PowerQ: return "power-q";
    case PotentialFamily::AnisotropicPower: return "anisotropic-power";
    case PotentialFamily::ProductPerturbed: return "product-perturbed";
    case PotentialFamily::DoubleWell: return "double-well";
  }
  return "unknown";
}

PotentialFamily potential_family_from_string(std::string_view tag) {
  if (tag == "quadratic") return PotentialFamily::Quadratic;
  if (tag == "power-q") return PotentialFamily::PowerQ;
  if (tag == "anisotropic-power") return PotentialFamily::AnisotropicPower;
  if (tag == "product-perturbed") return PotentialFamily::ProductPerturbed;
  if (tag == "double-well") return PotentialFamily::DoubleWell;
  throw InvalidArgument("unknown potential family '" + std::string(tag) + "'");
}

PotentialSpec PotentialSpec::quadratic(std::vector<double> a, std::optional<PotentialConstants> constants) {
  PotentialSpec s;
  s.family_ = PotentialFamily::Quadratic;
  s.a_ = std::move(a);
  s.constants_ = pick(constants, {2.0, 0.5, 1.0, 1.0});
  s.exponent_ = 2.0;
  s.validate();
  return s;
}

PotentialSpec PotentialSpec::power(std::vector<double> a, double q, std::optional<PotentialConstants> constants) {
  PotentialSpec s;
  s.family_ = PotentialFamily::PowerQ;
  s.a_ = std::move(a);
  s.exponent_ = q;
  s.constants_ = pick(constants, {q, 1.0, 1.0, 1.0});
  s.validate();
  return s;
}

PotentialSpec PotentialSpec::anisotropic_power(std::vector<double> a, std::vector<double> coeffs,
                                               std::vector<int> powers,
                                               std::optional<PotentialConstants> constants) {
  PotentialSpec s;
  s.family_ = PotentialFamily::AnisotropicPower;
  s.a_ = std::move(a);
  s.coeffs_ = std::move(coeffs);
  s.powers_ = std::move(powers);
  int pmax = 2;
  double cmin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.powers_.size(); ++i) pmax = std::max(pmax, s.powers_[i]);
  for (double c : s.coeffs_) cmin = std::min(cmin, c);
  s.exponent_ = pmax;
  // On the unit ball sum c_i |d_i|^{p_i} >= cmin * min over nu of sum |nu_i|^{p_i} r^{pmax};
  // the family default only records pmax, the caller supplies c0 when it matters.
  s.constants_ = pick(constants, {static_cast<double>(pmax), s.coeffs_.empty() ? 1.0 : cmin, 0.5, 1.0});
  s.validate();
  return s;
}

PotentialSpec PotentialSpec::product_perturbed(std::vector<double> a, std::optional<PotentialConstants> constants) {
  PotentialSpec s;
  s.family_ = PotentialFamily::ProductPerturbed;
  s.a_ = std::move(a);
  s.exponent_ = 2.0;
  s.constants_ = pick(constants, {2.0, 1.0, 1.0, 1.0});
  s.validate();
  return s;
}

PotentialSpec PotentialSpec::double_well(std::vector<double> a, std::optional<PotentialConstants> constants) {
  PotentialSpec s;
  s.family_ = PotentialFamily::DoubleWell;
  s.a_ = std::move(a);
  s.exponent_ = 4.0;
  s.constants_ = pick(constants, {2.0, 1.0, 1.0, 1.0});
  s.validate();
  return s;
}

PotentialSpec PotentialSpec::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw InvalidArgument("potential scale must be positive");
  PotentialSpec s = *this;
  s.scale_ *= factor;
  s.constants_.c0 *= factor;
  return s;
}

void PotentialSpec::validate() const {
  const int m = static_cast<int>(a_.size());
  if (m < 1 || m > kMaxM) throw InvalidArgument("potential: m must be in [1, 16]");
  for (double v : a_)
    if (!std::isfinite(v)) throw InvalidArgument("potential: zero 'a' must be finite");
  if (family_ == PotentialFamily::PowerQ && !(exponent_ >= 2.0))
    throw InvalidArgument("power-q potential needs q >= 2");
  if (family_ == PotentialFamily::AnisotropicPower) {
    if (coeffs_.size() != a_.size() || powers_.size() != a_.size())
      throw InvalidArgument("anisotropic-power: coeffs and powers need m entries");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (!(coeffs_[i] > 0.0)) throw InvalidArgument("anisotropic-power: coefficients must be positive");
      if (powers_[i] < 2 || powers_[i] % 2 != 0)
        throw InvalidArgument("anisotropic-power: powers must be even and >= 2");
    }
  }
  const auto& c = constants_;
  if (!(c.q >= 2.0) || !(c.c0 > 0.0) || !(c.r1 > 0.0) || !(c.r0 > 0.0))
    throw InvalidArgument("potential constants need q >= 2 and positive c0, r1, r0");
}

double PotentialSpec::eval_unchecked(const double* d, const double* u) const {
  const int m = this->m();
  double n2 = 0.0;
  for (int c = 0; c < m; ++c) n2 += d[c] * d[c];
  double w = 0.0;
  switch (family_) {
    case PotentialFamily::Quadratic: w = 0.5 * n2; break;
    case PotentialFamily::PowerQ: w = norm_pow(n2, exponent_); break;
    case PotentialFamily::AnisotropicPower:
      for (int c = 0; c < m; ++c) w += coeffs_[c] * int_pow(d[c], powers_[c]);
      break;
    case PotentialFamily::ProductPerturbed: {
      const double s = std::sin(u[0]);
      w = n2 * (1.0 + 0.5 * s * s);
      break;
    }
    case PotentialFamily::DoubleWell: w = n2 * n2 - 2.0 * n2; break;
  }
  return scale_ * w;
}

double PotentialSpec::eval(std::span<const double> u) const {
  check_finite(u, m());
  double d[kMaxM];
  for (int c = 0; c < m(); ++c) d[c] = u[c] - a_[c];
  return eval_unchecked(d, u.data());
}

std::vector<double> PotentialSpec::grad(std::span<const double> u) const {
  check_finite(u, m());
  const int m = this->m();
  std::vector<double> g(m, 0.0);
  double d[kMaxM];
  double n2 = 0.0;
  for (int c = 0; c < m; ++c) {
    d[c] = u[c] - a_[c];
    n2 += d[c] * d[c];
  }
  switch (family_) {
    case PotentialFamily::Quadratic:
      for (int c = 0; c < m; ++c) g[c] = d[c];
      break;
    case PotentialFamily::PowerQ: {
      const double f = n2 > 0.0 ? exponent_ * norm_pow(n2, exponent_ - 2.0) : (exponent_ == 2.0 ? 2.0 : 0.0);
      for (int c = 0; c < m; ++c) g[c] = f * d[c];
      break;
    }
    case PotentialFamily::AnisotropicPower:
      for (int c = 0; c < m; ++c) g[c] = coeffs_[c] * powers_[c] * int_pow(d[c], powers_[c] - 1);
      break;
    case PotentialFamily::ProductPerturbed: {
      const double s = std::sin(u[0]);
      const double f = 1.0 + 0.5 * s * s;
      for (int c = 0; c < m; ++c) g[c] = 2.0 * d[c] * f;
      g[0] += 0.5 * n2 * std::sin(2.0 * u[0]);
      break;
    }
    case PotentialFamily::DoubleWell:
      for (int c = 0; c < m; ++c) g[c] = (4.0 * n2 - 4.0) * d[c];
      break;
  }
  for (double& v : g) v *= scale_;
  return g;
}

std::vector<double> PotentialSpec::hessian(std::span<const double> u) const {
  check_finite(u, m());
  const int m = this->m();
  std::vector<double> H(static_cast<std::size_t>(m) * m, 0.0);
  double d[kMaxM];
  double n2 = 0.0;
  for (int c = 0; c < m; ++c) {
    d[c] = u[c] - a_[c];
    n2 += d[c] * d[c];
  }
  auto at = [&](int i, int j) -> double& { return H[static_cast<std::size_t>(i) * m + j]; };
  switch (family_) {
    case PotentialFamily::Quadratic:
      for (int c = 0; c < m; ++c) at(c, c) = 1.0;
      break;
    case PotentialFamily::PowerQ: {
      const double q = exponent_;
      if (n2 == 0.0) {
        if (q == 2.0)
          for (int c = 0; c < m; ++c) at(c, c) = 2.0;
        break;
      }
      const double f = q * norm_pow(n2, q - 2.0);
      const double g = q * (q - 2.0) * norm_pow(n2, q - 4.0);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) at(i, j) = (i == j ? f : 0.0) + g * d[i] * d[j];
      break;
    }
    case PotentialFamily::AnisotropicPower:
      for (int c = 0; c < m; ++c)
        at(c, c) = coeffs_[c] * powers_[c] * (powers_[c] - 1) * int_pow(d[c], powers_[c] - 2);
      break;
    case PotentialFamily::ProductPerturbed: {
      const double s = std::sin(u[0]);
      const double f = 1.0 + 0.5 * s * s;
      const double s2 = std::sin(2.0 * u[0]);
      for (int i = 0; i < m; ++i) {
        at(i, i) += 2.0 * f;
        at(i, 0) += d[i] * s2;
        at(0, i) += d[i] * s2;
      }
      at(0, 0) += n2 * std::cos(2.0 * u[0]);
      break;
    }
    case PotentialFamily::DoubleWell:
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) at(i, j) = (i == j ? 4.0 * n2 - 4.0 : 0.0) + 8.0 * d[i] * d[j];
      break;
  }
  for (double& v : H) v *= scale_;
  return H;
}

void PotentialSpec::eval_batch(const double* const* comps, std::size_t begin, std::size_t end, double* out) const {
  const int m = this->m();
  double d[kMaxM];
  double u[kMaxM];
  for (std::size_t i = begin; i < end; ++i) {
    for (int c = 0; c < m; ++c) {
      u[c] = comps[c][i];
      d[c] = u[c] - a_[c];
    }
    out[i] = eval_unchecked(d, u);
  }
}

void PotentialSpec::grad_batch(const double* const* comps, std::size_t begin, std::size_t end,
                               double* const* out) const {
  const int m = this->m();
  // The two common families get tight loops; the rest go through grad().
  if (family_ == PotentialFamily::Quadratic) {
    for (int c = 0; c < m; ++c) {
      const double ac = a_[c];
      const double* src = comps[c];
      double* dst = out[c];
      for (std::size_t i = begin; i < end; ++i) dst[i] = scale_ * (src[i] - ac);
    }
    return;
  }
  if (family_ == PotentialFamily::PowerQ) {
    const double q = exponent_;
    for (std::size_t i = begin; i < end; ++i) {
      double d[kMaxM];
      double n2 = 0.0;
      for (int c = 0; c < m; ++c) {
        d[c] = comps[c][i] - a_[c];
        n2 += d[c] * d[c];
      }
      double f;
      if (q == 4.0)
        f = 4.0 * n2;
      else if (q == 2.0)
        f = 2.0;
      else
        f = n2 > 0.0 ? q * norm_pow(n2, q - 2.0) : 0.0;
      f *= scale_;
      for (int c = 0; c < m; ++c) out[c][i] = f * d[c];
    }
    return;
  }
  double u[kMaxM];
  for (std::size_t i = begin; i < end; ++i) {
    for (int c = 0; c < m; ++c) u[c] = comps[c][i];
    const auto g = grad(std::span<const double>(u, m));
    for (int c = 0; c < m; ++c) out[c][i] = g[c];
  }
}

namespace {

// x^p - y^p given y >= 0 and delta = x - y, accurate relative to delta.
double pow_change(double y, double delta, double p) {
  if (y <= 0.0) return std::pow(std::max(y + delta, 0.0), p);
  return std::pow(y, p) * std::expm1(p * std::log1p(delta / y));
}

}  // namespace

// The change W(v) - W(u) is formed from the node differences v - u, so a
// tiny step does not drown in the rounding of W itself; the line search
// depends on this near convergence.
double PotentialSpec::eval_difference(const double* const* u, const double* const* v, const double* w,
                                      std::size_t begin, std::size_t end) const {
  const int m = this->m();
  double sum = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    if (w != nullptr && w[i] == 0.0) continue;
    double du2 = 0.0, dn2 = 0.0;  // |u - a|^2 and |v - a|^2 - |u - a|^2
    double diff = 0.0;
    for (int c = 0; c < m; ++c) {
      const double du = u[c][i] - a_[c];
      const double step = v[c][i] - u[c][i];
      const double sq_change = step * (2.0 * du + step);
      du2 += du * du;
      dn2 += sq_change;
      if (family_ == PotentialFamily::AnisotropicPower)
        diff += coeffs_[c] * pow_change(du * du, sq_change, 0.5 * powers_[c]);
    }
    switch (family_) {
      case PotentialFamily::Quadratic: diff = 0.5 * dn2; break;
      case PotentialFamily::PowerQ: diff = pow_change(du2, dn2, 0.5 * exponent_); break;
      case PotentialFamily::AnisotropicPower: break;
      case PotentialFamily::ProductPerturbed: {
        const double u1 = u[0][i];
        const double v1 = v[0][i];
        const double sv = std::sin(v1);
        // sin^2 v - sin^2 u = sin(v - u) sin(v + u)
        diff = dn2 * (1.0 + 0.5 * sv * sv) + 0.5 * du2 * std::sin(v1 - u1) * std::sin(v1 + u1);
        break;
      }
      case PotentialFamily::DoubleWell: diff = dn2 * (2.0 * du2 + dn2 - 2.0); break;
    }
    diff *= scale_;
    sum += w != nullptr ? w[i] * diff : diff;
  }
  return sum;
}

std::vector<std::vector<double>> sample_directions(int m, std::size_t count, std::uint64_t seed) {
  std::vector<std::vector<double>> dirs;
  if (m == 1) return {{1.0}, {-1.0}};
  if (m == 2) {
    count = std::max<std::size_t>(count, 4);
    dirs.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
      const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
      dirs.push_back({std::cos(t), std::sin(t)});
    }
    return dirs;
  }
  for (int c = 0; c < m; ++c) {
    std::vector<double> e(m, 0.0);
    e[c] = 1.0;
    dirs.push_back(e);
    e[c] = -1.0;
    dirs.push_back(e);
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  while (dirs.size() < count) {
    std::vector<double> v(m);
    double n2 = 0.0;
    for (double& x : v) {
      x = normal(rng);
      n2 += x * x;
    }
    if (n2 < 1e-24) continue;
    const double inv = 1.0 / std::sqrt(n2);
    for (double& x : v) x *= inv;
    dirs.push_back(std::move(v));
  }
  return dirs;
}

namespace {

// Radii in (0, rmax]: a uniform grid plus a geometric tail towards 0.
std::vector<double> radial_grid(double rmax, std::size_t samples) {
  std::vector<double> r;
  for (int j = 40; j >= 1; --j) r.push_back(rmax * std::ldexp(1.0, -j));
  for (std::size_t k = 1; k <= samples; ++k)
    r.push_back(rmax * static_cast<double>(k) / static_cast<double>(samples));
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

std::vector<double> point_on_ray(std::span<const double> a, const std::vector<double>& nu, double r) {
  std::vector<double> p(a.size());
  for (std::size_t c = 0; c < a.size(); ++c) p[c] = a[c] + r * nu[c];
  return p;
}

}  // namespace

AssumptionReport verify_assumptions(const PotentialSpec& spec, std::size_t samples, std::uint64_t seed,
                                    double box_half_width) {
  if (samples < 1) throw InvalidArgument("verify_assumptions: samples must be >= 1");
  if (!(box_half_width > 0.0)) throw InvalidArgument("verify_assumptions: box half-width must be positive");
  const int m = spec.m();
  const auto& k = spec.constants();
  const auto a = spec.a();

  AssumptionReport rep;
  rep.seed = seed;
  rep.box_half_width = box_half_width;
  const std::size_t ndir = m == 1 ? 2 : std::max<std::size_t>(4 * samples, 64);
  const auto dirs = sample_directions(m, ndir, seed);
  rep.direction_samples = dirs.size();

  // Positivity: rays from a through the box, plus a tensor grid (m <= 2) or
  // seeded uniform points (m >= 3) over the box.
  rep.pos_min_value = std::numeric_limits<double>::infinity();
  auto consider_pos = [&](const std::vector<double>& p) {
    double n2 = 0.0;
    for (int c = 0; c < m; ++c) n2 += (p[c] - a[c]) * (p[c] - a[c]);
    if (n2 == 0.0) return;
    const double w = spec.eval(p);
    if (w < rep.pos_min_value) {
      rep.pos_min_value = w;
      rep.pos_worst_point = p;
    }
    if (!(w > 0.0)) rep.pos_ok = false;
  };
  const auto box_radii = radial_grid(box_half_width, samples);
  for (const auto& nu : dirs)
    for (double r : box_radii) consider_pos(point_on_ray(a, nu, r));
  std::size_t box_points = 0;
  if (m <= 2) {
    const std::size_t per_axis = std::max<std::size_t>(2 * samples + 1, 3);
    const std::size_t total = m == 1 ? per_axis : per_axis * per_axis;
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::vector<double> p(m);
      std::size_t rem = idx;
      for (int c = 0; c < m; ++c) {
        const std::size_t j = rem % per_axis;
        rem /= per_axis;
        p[c] = a[c] - box_half_width + 2.0 * box_half_width * static_cast<double>(j) / static_cast<double>(per_axis - 1);
      }
      consider_pos(p);
      ++box_points;
    }
  } else {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> uni(-box_half_width, box_half_width);
    const std::size_t total = std::max<std::size_t>(samples * 64, 512);
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::vector<double> p(m);
      for (int c = 0; c < m; ++c) p[c] = a[c] + uni(rng);
      consider_pos(p);
      ++box_points;
    }
  }
  rep.box_samples = box_points;

  // Lower bound W(a + r nu) >= c0 r^q on (0, r1).
  const auto lower_radii = radial_grid(k.r1, samples);
  rep.radial_samples = lower_radii.size();
  rep.lower_bound_worst_margin = std::numeric_limits<double>::infinity();
  for (const auto& nu : dirs) {
    for (double r : lower_radii) {
      if (r >= k.r1) continue;
      const double w = spec.eval(point_on_ray(a, nu, r));
      const double margin = w / (k.c0 * std::pow(r, k.q)) - 1.0;
      if (margin < rep.lower_bound_worst_margin) {
        rep.lower_bound_worst_margin = margin;
        rep.lower_bound_worst_r = r;
        rep.lower_bound_worst_nu = nu;
      }
    }
  }
  rep.lower_bound_ok = rep.lower_bound_worst_margin >= -1e-9;

  // Monotone radial sections on (0, r0].
  const auto mono_radii = radial_grid(k.r0, samples);
  rep.monot_worst_step = std::numeric_limits<double>::infinity();
  for (const auto& nu : dirs) {
    double prev = spec.eval(point_on_ray(a, nu, 0.0));
    for (double r : mono_radii) {
      const double w = spec.eval(point_on_ray(a, nu, r));
      const double step = w - prev;
      if (step < rep.monot_worst_step) {
        rep.monot_worst_step = step;
        rep.monot_worst_nu = nu;
      }
      if (step < 0.0) rep.monot_ok = false;
      if (!(step > 0.0)) rep.monot_strict_ok = false;
      prev = w;
    }
  }

  // Punctured ball |u - a| < 2 r0.
  for (const auto& nu : dirs)
    for (double r : radial_grid(2.0 * k.r0, samples)) {
      if (r >= 2.0 * k.r0) continue;
      if (!(spec.eval(point_on_ray(a, nu, r)) > 0.0)) rep.ball_pos_ok = false;
    }

  // Hessian at a: exact spectrum. A sampled Rayleigh quotient can land a hair
  // above zero on a degenerate direction and pass for definite.
  const auto H = spec.hessian(a);
  Eigen::MatrixXd Hm(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) Hm(i, j) = H[static_cast<std::size_t>(i) * m + j];
  const Eigen::VectorXd eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Hm, Eigen::EigenvaluesOnly).eigenvalues();
  rep.hessian_min_eig = eig.minCoeff();
  rep.hessian_pd_ok = rep.hessian_min_eig > 1e-12 * std::max(1.0, std::abs(eig.maxCoeff()));
  return rep;
}

double sublevel_radius(const PotentialSpec& spec, double eps, double box_half_width, std::size_t direction_samples,
                       std::size_t radial_samples, std::uint64_t seed) {
  if (!(eps >= 0.0)) throw InvalidArgument("sublevel_radius: eps must be nonnegative");
  if (!(box_half_width > 0.0)) throw InvalidArgument("sublevel_radius: box half-width must be positive");
  const int m = spec.m();
  const auto a = spec.a();
  double best = 0.0;
  for (const auto& nu : sample_directions(m, direction_samples, seed)) {
    // The ray leaves the box a + [-b, b]^m at b / max|nu_c|.
    double numax = 0.0;
    for (double v : nu) numax = std::max(numax, std::abs(v));
    const double rmax = box_half_width / numax;
    for (std::size_t k = radial_samples; k >= 1; --k) {
      const double r = rmax * static_cast<double>(k) / static_cast<double>(radial_samples);
      if (r <= best) break;
      if (spec.eval(point_on_ray(a, nu, r)) <= eps) {
        best = r;
        break;
      }
    }
  }
  return best;
}

}  // namespace aclab
