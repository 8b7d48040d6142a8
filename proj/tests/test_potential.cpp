#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "aclab/error.hpp"
#include "aclab/potential.hpp"

using namespace aclab;

namespace {

std::vector<PotentialSpec> all_families() {
  return {PotentialSpec::quadratic({0.3, -0.2}),
          PotentialSpec::power({0.1, 0.2}, 4.0),
          PotentialSpec::power({0.0, 0.0}, 3.0),
          PotentialSpec::anisotropic_power({0.0, 0.5}, {1.0, 2.0}, {2, 4}),
          PotentialSpec::product_perturbed({0.2, 0.1}),
          PotentialSpec::double_well({0.0, 0.0})};
}

}  // namespace

TEST(Potential, ClosedFormValues) {
  EXPECT_DOUBLE_EQ(PotentialSpec::quadratic({0.0}).eval(std::vector<double>{2.0}), 2.0);
  const auto aniso = PotentialSpec::anisotropic_power({0.0, 0.0}, {1.0, 1.0}, {2, 4});
  EXPECT_DOUBLE_EQ(aniso.eval(std::vector<double>{1.0, 1.0}), 2.0);
  const auto g = aniso.grad(std::vector<double>{1.0, 1.0});
  EXPECT_DOUBLE_EQ(g[0], 2.0);
  EXPECT_DOUBLE_EQ(g[1], 4.0);
  const auto quad = PotentialSpec::quadratic({0.0});
  EXPECT_DOUBLE_EQ(quad.grad(std::vector<double>{3.0})[0], 3.0);
  EXPECT_DOUBLE_EQ(quad.hessian(std::vector<double>{3.0})[0], 1.0);
  EXPECT_DOUBLE_EQ(PotentialSpec::power({1.0, 1.0}, 4.0).eval(std::vector<double>{2.0, 1.0}), 1.0);
  // |(1,1)|^2 (1 + sin^2(1)/2)
  EXPECT_NEAR(PotentialSpec::product_perturbed({0.0, 0.0}).eval(std::vector<double>{1.0, 1.0}),
              2.0 * (1.0 + 0.5 * std::sin(1.0) * std::sin(1.0)), 1e-15);
}

TEST(Potential, VanishesWithZeroGradientAtA) {
  for (const auto& s : all_families()) {
    const std::vector<double> a(s.a().begin(), s.a().end());
    EXPECT_EQ(s.eval(a), 0.0) << to_string(s.family());
    for (double g : s.grad(a)) EXPECT_EQ(g, 0.0) << to_string(s.family());
  }
}

TEST(Potential, GradientMatchesFiniteDifferences) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> U(-1.5, 1.5);
  for (const auto& s : all_families()) {
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> u{U(gen), U(gen)};
      const auto g = s.grad(u);
      for (int c = 0; c < 2; ++c) {
        const double t = 1e-5;
        auto up = u, dn = u;
        up[c] += t;
        dn[c] -= t;
        const double fd = (s.eval(up) - s.eval(dn)) / (2 * t);
        EXPECT_LE(std::abs(fd - g[c]), 1e-6 * std::max(1.0, std::abs(g[c]))) << to_string(s.family());
      }
    }
  }
}

TEST(Potential, HessianMatchesFiniteDifferences) {
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> U(-1.5, 1.5);
  for (const auto& s : all_families()) {
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> u{U(gen), U(gen)};
      const auto H = s.hessian(u);
      for (int c = 0; c < 2; ++c) {
        const double t = 1e-5;
        auto up = u, dn = u;
        up[c] += t;
        dn[c] -= t;
        const auto gu = s.grad(up), gd = s.grad(dn);
        for (int r = 0; r < 2; ++r) {
          const double fd = (gu[r] - gd[r]) / (2 * t);
          EXPECT_LE(std::abs(fd - H[r * 2 + c]), 1e-5 * std::max(1.0, std::abs(fd))) << to_string(s.family());
        }
      }
    }
  }
}

TEST(Potential, HessianIsSymmetric) {
  const auto s = PotentialSpec::power({0.0, 0.0, 0.0}, 4.0);
  const auto H = s.hessian(std::vector<double>{0.3, -0.7, 1.1});
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(H[i * 3 + j], H[j * 3 + i]);
}

TEST(Potential, RejectsNonFiniteInput) {
  const auto s = PotentialSpec::quadratic({0.0});
  EXPECT_THROW(s.eval(std::vector<double>{std::nan("")}), InvalidArgument);
  EXPECT_THROW(s.grad(std::vector<double>{std::numeric_limits<double>::infinity()}), InvalidArgument);
  EXPECT_THROW(s.eval(std::vector<double>{1.0, 2.0}), InvalidArgument);
}

TEST(Potential, RejectsInvalidParameters) {
  EXPECT_THROW(PotentialSpec::power({0.0}, 1.5), InvalidArgument);
  EXPECT_THROW(PotentialSpec::anisotropic_power({0.0, 0.0}, {1.0, 1.0}, {2, 3}), InvalidArgument);
  EXPECT_THROW(PotentialSpec::anisotropic_power({0.0, 0.0}, {1.0, -1.0}, {2, 2}), InvalidArgument);
  EXPECT_THROW(PotentialSpec::quadratic({0.0}, PotentialConstants{2.0, -1.0, 1.0, 1.0}), InvalidArgument);
  EXPECT_THROW(PotentialSpec::quadratic({0.0}).scaled(0.0), InvalidArgument);
}

TEST(Potential, BatchMatchesPointwise) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (const auto& s : all_families()) {
    const std::size_t N = 37;
    std::vector<double> c0(N), c1(N), v0(N), v1(N), w(N);
    for (std::size_t i = 0; i < N; ++i) {
      c0[i] = U(gen);
      c1[i] = U(gen);
      v0[i] = c0[i] + 1e-3 * U(gen);
      v1[i] = c1[i] + 1e-3 * U(gen);
      w[i] = i % 3 == 0 ? 0.0 : 1.0;
    }
    const double* comps[2] = {c0.data(), c1.data()};
    const double* vcomps[2] = {v0.data(), v1.data()};
    std::vector<double> out(N), g0(N), g1(N);
    double* gout[2] = {g0.data(), g1.data()};
    s.eval_batch(comps, 0, N, out.data());
    s.grad_batch(comps, 0, N, gout);
    double naive = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const std::vector<double> u{c0[i], c1[i]}, v{v0[i], v1[i]};
      EXPECT_NEAR(out[i], s.eval(u), 1e-14 * std::max(1.0, out[i]));
      const auto g = s.grad(u);
      EXPECT_NEAR(g0[i], g[0], 1e-13 * std::max(1.0, std::abs(g[0])));
      EXPECT_NEAR(g1[i], g[1], 1e-13 * std::max(1.0, std::abs(g[1])));
      naive += w[i] * (s.eval(v) - s.eval(u));
    }
    EXPECT_NEAR(s.eval_difference(comps, vcomps, w.data(), 0, N), naive, 1e-12) << to_string(s.family());
  }
}

TEST(Potential, EvalDifferenceKeepsRelativePrecision) {
  // A step d = 2^-40 around u = 1: the naive difference is dominated by
  // rounding of W(u) ~ 1, the direct formula is not.
  const auto s = PotentialSpec::power({0.0}, 4.0);
  const double d = std::ldexp(1.0, -40);
  std::vector<double> u{1.0}, v{1.0 + d};
  const double* pu[1] = {u.data()};
  const double* pv[1] = {v.data()};
  // (1 + d)^4 - 1 = 4d + 6d^2 + 4d^3 + d^4
  const double exact = 4.0 * d + 6.0 * d * d + 4.0 * d * d * d;
  const double diff = s.eval_difference(pu, pv, nullptr, 0, 1);
  EXPECT_NEAR(diff, exact, 4.0 * std::numeric_limits<double>::epsilon() * exact);
  EXPECT_GT(std::abs((s.eval(v) - s.eval(u)) - exact), 1e3 * std::abs(diff - exact));
}

TEST(Potential, ScaledMultipliesValuesAndC0) {
  const auto s = PotentialSpec::power({0.0, 0.0}, 4.0);
  const auto t = s.scaled(2.5);
  const std::vector<double> u{0.3, 0.4};
  EXPECT_DOUBLE_EQ(t.eval(u), 2.5 * s.eval(u));
  EXPECT_DOUBLE_EQ(t.constants().c0, 2.5 * s.constants().c0);
}

TEST(Potential, FamilyTagsRoundTrip) {
  for (auto f : {PotentialFamily::Quadratic, PotentialFamily::PowerQ, PotentialFamily::AnisotropicPower,
                 PotentialFamily::ProductPerturbed, PotentialFamily::DoubleWell})
    EXPECT_EQ(potential_family_from_string(to_string(f)), f);
  EXPECT_THROW(potential_family_from_string("cubic"), InvalidArgument);
}

TEST(Assumptions, QuadraticPassesEverything) {
  const auto r = verify_assumptions(PotentialSpec::quadratic({0.0, 0.0}), 64, 1);
  EXPECT_TRUE(r.pos_ok);
  EXPECT_TRUE(r.lower_bound_ok);
  EXPECT_TRUE(r.monot_ok);
  EXPECT_TRUE(r.monot_strict_ok);
  EXPECT_TRUE(r.hessian_pd_ok);
  EXPECT_NEAR(r.hessian_min_eig, 1.0, 1e-12);
  EXPECT_GE(r.lower_bound_worst_margin, -1e-12);
}

TEST(Assumptions, PowerFamilyPassesWithOwnConstants) {
  for (double q : {2.0, 3.0, 4.0, 6.0}) {
    const auto r = verify_assumptions(PotentialSpec::power({0.0, 0.0}, q), 64, 2);
    EXPECT_TRUE(r.pos_ok) << q;
    EXPECT_TRUE(r.lower_bound_ok) << q;
    EXPECT_GE(r.lower_bound_worst_margin, -1e-12) << q;
    EXPECT_TRUE(r.monot_ok) << q;
  }
  // Degenerate at a: the Hessian check fails for q > 2.
  EXPECT_FALSE(verify_assumptions(PotentialSpec::power({0.0, 0.0}, 4.0), 64, 2).hessian_pd_ok);
}

// Independent scan of min over nu, r of W(r nu) / (c0 r^q) for u1^2 + u2^4.
double anisotropic_margin(double q, double c0, double r1) {
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 720; ++i) {
    const double t = 2.0 * M_PI * i / 720.0;
    for (int j = 1; j < 400; ++j) {
      const double r = r1 * j / 400.0;
      const double x = r * std::cos(t), y = r * std::sin(t);
      worst = std::min(worst, (x * x + y * y * y * y) / (c0 * std::pow(r, q)) - 1.0);
    }
  }
  return worst;
}

TEST(Assumptions, AnisotropicLowerBoundNeedsQuartic) {
  const PotentialConstants q4{4.0, 1.0, 0.5, 1.0};
  const PotentialConstants q2{2.0, 1.0, 0.5, 1.0};
  ASSERT_GE(anisotropic_margin(4.0, 1.0, 0.5), -1e-15);
  ASSERT_LT(anisotropic_margin(2.0, 1.0, 0.5), 0.0);
  const auto ok = verify_assumptions(PotentialSpec::anisotropic_power({0.0, 0.0}, {1.0, 1.0}, {2, 4}, q4), 200, 5);
  const auto bad = verify_assumptions(PotentialSpec::anisotropic_power({0.0, 0.0}, {1.0, 1.0}, {2, 4}, q2), 200, 5);
  EXPECT_TRUE(ok.lower_bound_ok);
  EXPECT_FALSE(bad.lower_bound_ok);
  // The worst direction is the quartic axis.
  ASSERT_EQ(bad.lower_bound_worst_nu.size(), 2u);
  EXPECT_NEAR(std::abs(bad.lower_bound_worst_nu[1]), 1.0, 1e-2);
  // W_uu(a) = diag(2, 0) is only semidefinite.
  EXPECT_FALSE(ok.hessian_pd_ok);
  EXPECT_NEAR(ok.hessian_min_eig, 0.0, 1e-15);
}

TEST(Assumptions, DoubleWellFailsPositivity) {
  const auto r = verify_assumptions(PotentialSpec::double_well({0.0, 0.0}), 64, 3);
  EXPECT_FALSE(r.pos_ok);
  EXPECT_LT(r.pos_min_value, 0.0);
  EXPECT_FALSE(r.ball_pos_ok);
}

TEST(Assumptions, DeterministicInSeed) {
  const auto s = PotentialSpec::power({0.0, 0.0, 0.0}, 4.0);
  const auto a = verify_assumptions(s, 50, 9), b = verify_assumptions(s, 50, 9);
  EXPECT_EQ(a.lower_bound_worst_margin, b.lower_bound_worst_margin);
  EXPECT_EQ(a.lower_bound_worst_nu, b.lower_bound_worst_nu);
  EXPECT_EQ(a.pos_min_value, b.pos_min_value);
  EXPECT_EQ(a.monot_worst_step, b.monot_worst_step);
}

TEST(Assumptions, SublevelRadius) {
  // 1/2 r^2 <= eps  <=>  r <= sqrt(2 eps)
  EXPECT_NEAR(sublevel_radius(PotentialSpec::quadratic({0.0, 0.0}), 0.01, 2.0), std::sqrt(0.02), 1e-3);
  // r^4 <= eps
  EXPECT_NEAR(sublevel_radius(PotentialSpec::power({0.0, 0.0}, 4.0), 0.0016, 2.0), 0.2, 1e-3);
}

TEST(Assumptions, SampleDirectionsAreUnit) {
  for (int m : {1, 2, 3, 5}) {
    const auto dirs = sample_directions(m, 40, 7);
    ASSERT_FALSE(dirs.empty());
    for (const auto& d : dirs) {
      double s = 0.0;
      for (double v : d) s += v * v;
      EXPECT_NEAR(s, 1.0, 1e-14);
    }
  }
}
