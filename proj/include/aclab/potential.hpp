#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace aclab {

enum class PotentialFamily {
  Quadratic,         // W = 1/2 |u-a|^2
  PowerQ,            // W = |u-a|^q, q >= 2
  AnisotropicPower,  // W = sum_i c_i (u_i - a_i)^{p_i}, p_i even
  ProductPerturbed,  // W = |u-a|^2 (1 + 1/2 sin^2(u_1))
  DoubleWell,        // W = |u-a|^4 - 2|u-a|^2; negative near a, used to exercise the checks
};

std::string_view to_string(PotentialFamily family);
PotentialFamily potential_family_from_string(std::string_view tag);

// Metadata that the growth and Liouville statements are phrased in. These
// are claims about the potential; verify_assumptions() checks them.
struct PotentialConstants {
  double q = 2.0;   // degeneracy exponent in W(a + r nu) >= c0 r^q
  double c0 = 0.5;  // lower-bound constant
  double r1 = 1.0;  // radius on which the lower bound holds
  double r0 = 1.0;  // radius on which r -> W(a + r nu) is monotone

  bool operator==(const PotentialConstants&) const = default;
};

// A single-zero potential W: R^m -> R. Immutable after construction; every
// member is safe to call concurrently.
class PotentialSpec {
 public:
  // Omitted constants default to the family's own (q, c0) with r1 = r0 = 1.
  static PotentialSpec quadratic(std::vector<double> a, std::optional<PotentialConstants> constants = {});
  static PotentialSpec power(std::vector<double> a, double q, std::optional<PotentialConstants> constants = {});
  static PotentialSpec anisotropic_power(std::vector<double> a, std::vector<double> coeffs,
                                         std::vector<int> powers, std::optional<PotentialConstants> constants = {});
  static PotentialSpec product_perturbed(std::vector<double> a, std::optional<PotentialConstants> constants = {});
  static PotentialSpec double_well(std::vector<double> a, std::optional<PotentialConstants> constants = {});

  // Same potential multiplied by `factor` > 0 (c0 scales along).
  PotentialSpec scaled(double factor) const;

  PotentialFamily family() const noexcept { return family_; }
  int m() const noexcept { return static_cast<int>(a_.size()); }
  std::span<const double> a() const noexcept { return a_; }
  const PotentialConstants& constants() const noexcept { return constants_; }
  double exponent() const noexcept { return exponent_; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  std::span<const int> powers() const noexcept { return powers_; }
  double scale() const noexcept { return scale_; }

  // Pointwise W(u), grad W(u) and the m x m Hessian (row-major).
  // Non-finite input or size mismatch throws InvalidArgument.
  double eval(std::span<const double> u) const;
  std::vector<double> grad(std::span<const double> u) const;
  std::vector<double> hessian(std::span<const double> u) const;

  // Batch forms over structure-of-arrays storage: comps[c][i] for c < m.
  // No validation; callers hold finite fields.
  void eval_batch(const double* const* comps, std::size_t begin, std::size_t end, double* out) const;
  void grad_batch(const double* const* comps, std::size_t begin, std::size_t end, double* const* out) const;
  // Sum over [begin, end) of w[i] * (W(v_i) - W(u_i)); w may be null (all ones).
  double eval_difference(const double* const* u, const double* const* v, const double* w,
                         std::size_t begin, std::size_t end) const;

 private:
  PotentialSpec() = default;
  void validate() const;
  double eval_unchecked(const double* d, const double* u) const;

  PotentialFamily family_ = PotentialFamily::Quadratic;
  std::vector<double> a_;
  PotentialConstants constants_;
  double exponent_ = 2.0;
  std::vector<double> coeffs_;
  std::vector<int> powers_;
  double scale_ = 1.0;
};

inline double eval(const PotentialSpec& spec, std::span<const double> u) { return spec.eval(u); }
inline std::vector<double> grad(const PotentialSpec& spec, std::span<const double> u) { return spec.grad(u); }
inline std::vector<double> hessian(const PotentialSpec& spec, std::span<const double> u) { return spec.hessian(u); }

struct AssumptionReport {
  // W > 0 away from a, checked on the range box a + [-box, box]^m.
  bool pos_ok = true;
  double pos_min_value = 0.0;
  std::vector<double> pos_worst_point;

  // W(a + r nu) >= c0 r^q on (0, r1); margin is W / (c0 r^q) - 1.
  bool lower_bound_ok = true;
  double lower_bound_worst_r = 0.0;
  std::vector<double> lower_bound_worst_nu;
  double lower_bound_worst_margin = 0.0;

  // r -> W(a + r nu) on (0, r0]: nondecreasing / strictly increasing.
  bool monot_ok = true;
  bool monot_strict_ok = true;
  double monot_worst_step = 0.0;  // most negative W(r_{k+1}) - W(r_k)
  std::vector<double> monot_worst_nu;

  // min over sampled nu of nu . W_uu(a) nu.
  bool hessian_pd_ok = true;
  double hessian_min_eig = 0.0;

  // W > 0 on the punctured ball |u - a| < 2 r0 (hypothesis of the
  // variational maximum principle; overlaps pos_ok).
  bool ball_pos_ok = true;

  std::size_t direction_samples = 0;
  std::size_t radial_samples = 0;
  std::size_t box_samples = 0;
  double box_half_width = 0.0;
  std::uint64_t seed = 0;
};

// Sampled check of the standing assumptions. Deterministic in `seed`.
// `samples` controls the radial and per-axis densities (>= 1).
AssumptionReport verify_assumptions(const PotentialSpec& spec, std::size_t samples, std::uint64_t seed,
                                    double box_half_width = 2.0);

// Deterministic unit directions on S^{m-1}: {+1,-1} for m = 1, equiangular
// for m = 2, coordinate axes plus seeded Gaussian directions for m >= 3.
std::vector<std::vector<double>> sample_directions(int m, std::size_t count, std::uint64_t seed);

// m_eps = sup{ |v - a| : v in the range box, W(v) <= eps }, by ray scans.
double sublevel_radius(const PotentialSpec& spec, double eps, double box_half_width,
                       std::size_t direction_samples = 256, std::size_t radial_samples = 4000,
                       std::uint64_t seed = 0);

}  // namespace aclab
