#include <gtest/gtest.h>

#include <random>

#include "kahler.hpp"

using namespace kahler;

namespace {

// Composite Simpson on [a, b]; an oracle independent of the Gauss rules.
template <class F>
double simpson(F f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

ScalarField quadratic2() {
  // |z1|^2 + 2|z2|^2 + Re(z1 conj z2): Levi matrix [[1, 1/2], [1/2, 2]].
  return ScalarField(
      [](const ComplexPoint& z) {
        return std::norm(z[0]) + 2.0 * std::norm(z[1]) + std::real(z[0] * std::conj(z[1]));
      },
      Domain::ball(ComplexPoint{0.0, 0.0}, 2.0));
}

}  // namespace

TEST(Levi, QuadraticFormIsRecoveredExactly) {
  const LeviMatrix L = levi_form(quadratic2(), ComplexPoint{Complex(0.1, 0.2), Complex(-0.3, 0.05)}, 1e-2);
  EXPECT_NEAR(L.entries(0, 0).real(), 1.0, 1e-9);
  EXPECT_NEAR(L.entries(1, 1).real(), 2.0, 1e-9);
  EXPECT_NEAR(std::abs(L.entries(0, 1) - Complex(0.5, 0.0)), 0.0, 1e-9);
  EXPECT_LT(L.entries.asymmetry(), 1e-15);
  EXPECT_NEAR(L.min_eigenvalue(), 1.5 - std::sqrt(0.5), 1e-9);
}

TEST(Levi, ImaginaryOffDiagonalHasTheRightSign) {
  // Re(i z1 conj z2) has d^2/dz1 dzbar2 = i/2.
  const ScalarField f([](const ComplexPoint& z) { return std::real(Complex(0, 1) * z[0] * std::conj(z[1])); },
                      Domain::ball(ComplexPoint{0.0, 0.0}, 2.0));
  const LeviMatrix L = levi_form(f, ComplexPoint{0.2, 0.3}, 1e-2);
  EXPECT_NEAR(std::abs(L.entries(0, 1) - Complex(0.0, 0.5)), 0.0, 1e-9);
}

TEST(Levi, PluriharmonicFunctionsHaveZeroForm) {
  const ScalarField f(
      [](const ComplexPoint& z) { return std::real(z[0] * z[0] * z[1]) + std::log(std::abs(1.0 + z[1])); },
      Domain::ball(ComplexPoint{0.0, 0.0}, 0.5));
  const auto pts = low_discrepancy_sample(Domain::ball(ComplexPoint{0.0, 0.0}, 0.4), 100);
  const auto c = check_pluriharmonic(f, pts, 1e-3, 1e-5);
  EXPECT_TRUE(c.pass) << c.deviation;
}

TEST(Levi, MinimumOverGridFindsTheWeakestPoint) {
  // |z|^4 has Levi value 4|z|^2: smallest at the node nearest 0.
  const ScalarField f([](const ComplexPoint& z) { return std::norm(z[0]) * std::norm(z[0]); },
                      Domain::disk(0.0, 2.0));
  const Grid g = sample_grid(Domain::disk(Complex(0.5, 0.0), 0.3), 0.1);
  const PshReport r = min_levi_eigenvalue(f, g, 1e-3);
  EXPECT_NEAR(std::abs(r.argmin[0]), 0.3, 1e-12);  // 0.2 lies on the boundary
  EXPECT_NEAR(r.min_eigenvalue, 4.0 * 0.09, 1e-5);
  EXPECT_EQ(r.nodes, g.size());
}

TEST(Levi, RefinementRatioDetectsAConicalKink) {
  const ScalarField cone([](const ComplexPoint& z) { return 2.0 * std::abs(z[0]); }, Domain::disk(0.0, 1.0));
  const ScalarField smooth([](const ComplexPoint& z) { return std::norm(z[0]); }, Domain::disk(0.0, 1.0));
  const Domain d = Domain::disk(0.0, 0.4);
  const auto coarse = sample_grid(d, 0.02).nodes, fine = sample_grid(d, 0.01).nodes;
  EXPECT_NEAR(laplacian_refinement_ratio(cone, coarse, fine, 0.02).ratio, 2.0, 1e-9);
  EXPECT_NEAR(laplacian_refinement_ratio(smooth, coarse, fine, 0.02).ratio, 1.0, 1e-6);
}

TEST(Kernel, NormalizationMatchesIndependentQuadrature) {
  const double integral = simpson(bump_profile, -1.0, 1.0, 200000);
  EXPECT_NEAR(1.0 / integral, kBumpNormalization, 1e-10);
  EXPECT_NEAR(default_kernel().normalization(), kBumpNormalization, 1e-13);
}

TEST(Kernel, RegMaxAtOriginMatchesDoubleIntegral) {
  // M_1(0, 0) = E|a - b| / 2 for a, b with density theta. Integrate over a < b
  // (the integrand is symmetric) so the kink sits on the boundary.
  const double c = kBumpNormalization;
  auto theta = [c](double t) { return c * bump_profile(t); };
  auto inner = [&](double b) {
    return simpson([&](double a) { return (b - a) * theta(a); }, -1.0, b, 400);
  };
  const double e = 2.0 * simpson([&](double b) { return theta(b) * inner(b); }, -1.0, 1.0, 400);
  EXPECT_NEAR(0.5 * e, kRegMaxAtOrigin, 1e-9);
  // The kernel's nested Gauss rules are good to a few 1e-12.
  EXPECT_NEAR(reg_max_scalar(0.0, 0.0, 1.0), kRegMaxAtOrigin, 1e-11);
}

TEST(Kernel, SmoothstepIsAMonotoneStep) {
  const RegMaxKernel& k = default_kernel();
  EXPECT_EQ(k.smoothstep(-0.1), 0.0);
  EXPECT_EQ(k.smoothstep(1.1), 1.0);
  EXPECT_DOUBLE_EQ(k.smoothstep(0.5), 0.5);
  double prev = 0.0;
  for (int i = 1; i < 200; ++i) {
    const double x = i / 200.0, s = k.smoothstep(x);
    EXPECT_GE(s, prev);
    EXPECT_NEAR(s + k.smoothstep(1.0 - x), 1.0, 4.5e-16);
    prev = s;
  }
}

TEST(Mollify, BallRuleIsSymmetricAndNormalized) {
  for (std::size_t n : {1u, 2u}) {
    const BallRule r(n, 8);
    double w = 0.0;
    ComplexPoint first(n);
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      w += r.weights[i];
      for (std::size_t j = 0; j < n; ++j) first[j] += r.weights[i] * r.nodes[i][j];
      EXPECT_LT(r.nodes[i].norm(), 1.0);
    }
    EXPECT_NEAR(w, 1.0, 1e-13);
    EXPECT_LT(first.norm(), 1e-15);
  }
}

TEST(Mollify, SecondMomentMatchesRadialIntegral) {
  // In R^2, E|y|^2 = int r^3 e(r) dr / int r e(r) dr with e the bump profile.
  const double num = simpson([](double r) { return r * r * r * bump_profile(r); }, 0.0, 1.0, 20000);
  const double den = simpson([](double r) { return r * bump_profile(r); }, 0.0, 1.0, 20000);
  const double m2 = num / den;
  EXPECT_NEAR(BallRule(1, 16).moment(2.0), m2, 1e-4);
  EXPECT_NEAR(BallRule(1, 32).moment(2.0), m2, 2e-5);
}

TEST(Mollify, QuadraticsShiftByTheSecondMoment) {
  const ScalarField f([](const ComplexPoint& z) { return std::norm(z[0]) + std::real(z[0] * z[0]); },
                      Domain::disk(0.0, 2.0));
  const double eps = 0.1;
  const BallRule r(1, 8);
  const ScalarField g = mollify(f, eps, 8);
  const ComplexPoint x{Complex(0.3, -0.4)};
  EXPECT_NEAR(g(x), f(x) + eps * eps * r.moment(2.0), 1e-14);
  EXPECT_TRUE(g.is_smooth_at(x));
  EXPECT_THROW(g(ComplexPoint{1.95}), Error);  // valid only on the eps-shrunk domain
}

TEST(Mollify, ConvergesToAContinuousField) {
  const ScalarField f([](const ComplexPoint& z) { return 2.0 * std::abs(z[0]); }, Domain::disk(0.0, 2.0));
  const auto pts = low_discrepancy_sample(Domain::disk(0.0, 1.0), 200);
  double prev = 1e9;
  for (double eps : {0.2, 0.1, 0.05}) {
    const double d = sup_distance(mollify(f, eps, 8), f, pts);
    EXPECT_LE(d, 2.0 * eps);  // |f_eps - f| <= Lip(f) eps
    EXPECT_LT(d, prev);
    prev = d;
  }
}

TEST(Mollify, BoundRecordsTauAndQuadratureGap) {
  const ScalarField f([](const ComplexPoint& z) { return 2.0 * std::abs(z[0]); }, Domain::disk(0.0, 2.0));
  const auto pts = low_discrepancy_sample(Domain::disk(0.0, 1.0), 64);
  const Mollification m = mollify_with_bound(f, 0.1, 8, pts);
  EXPECT_GT(m.tau, 0.0);
  EXPECT_LE(m.tau, 0.2);
  EXPECT_LT(m.quadrature_gap, 1e-3);
}

TEST(Mollify, PreservesPlurisubharmonicity) {
  // max(|z1|^2, |z2|^2) + small |z|^2 is psh but not smooth on |z1| = |z2|.
  const ScalarField f(
      [](const ComplexPoint& z) {
        return std::max(std::norm(z[0]), std::norm(z[1])) + 0.1 * (std::norm(z[0]) + std::norm(z[1]));
      },
      Domain::ball(ComplexPoint{0.0, 0.0}, 1.5));
  const ScalarField g = mollify(f, 0.1, 8);
  const auto pts = low_discrepancy_sample(Domain::ball(ComplexPoint{0.0, 0.0}, 0.8), 60);
  EXPECT_GT(min_levi_eigenvalue(g, pts, 0.02).min_eigenvalue, 0.0);
}
