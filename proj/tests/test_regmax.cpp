#include <gtest/gtest.h>

#include <random>

#include "kahler.hpp"

using namespace kahler;

namespace {

constexpr int kSamples = 10000;  // the acceptance binary runs 10^5

// M_eta is evaluated by nested Gauss rules accurate to about 2e-12 eta, so
// order relations are checked with that much slack.
constexpr double kQuadratureSlack = 1e-11;

struct Draw {
  std::mt19937_64 rng{20050131};
  std::uniform_real_distribution<double> t{-1.0, 1.0};
  std::uniform_real_distribution<double> w{0.01, 0.5};
};

}  // namespace

TEST(RegMax, BoundsMaxAndMaxPlusEta) {
  Draw d;
  for (int i = 0; i < kSamples; ++i) {
    const double a = d.t(d.rng), b = d.t(d.rng), eta = d.w(d.rng);
    const double m = reg_max_scalar(a, b, eta);
    ASSERT_GE(m, std::max(a, b));
    ASSERT_LE(m, std::max(a, b) + eta);
  }
}

TEST(RegMax, Symmetric) {
  Draw d;
  for (int i = 0; i < kSamples; ++i) {
    const double a = d.t(d.rng), b = d.t(d.rng), eta = d.w(d.rng);
    ASSERT_EQ(reg_max_scalar(a, b, eta), reg_max_scalar(b, a, eta));
  }
}

TEST(RegMax, MonotoneInEachArgument) {
  Draw d;
  std::uniform_real_distribution<double> step(0.0, 0.3);
  for (int i = 0; i < kSamples; ++i) {
    const double a = d.t(d.rng), b = d.t(d.rng), eta = d.w(d.rng), s = step(d.rng);
    ASSERT_GE(reg_max_scalar(a + s, b, eta), reg_max_scalar(a, b, eta) - kQuadratureSlack * eta);
  }
}

TEST(RegMax, TranslationEquivariant) {
  Draw d;
  for (int i = 0; i < kSamples; ++i) {
    const double a = d.t(d.rng), b = d.t(d.rng), eta = d.w(d.rng), c = d.t(d.rng);
    ASSERT_NEAR(reg_max_scalar(a + c, b + c, eta), reg_max_scalar(a, b, eta) + c, 1e-13);
  }
}

TEST(RegMax, ExactMaxWhenArgumentsAreFarApart) {
  Draw d;
  for (int i = 0; i < kSamples; ++i) {
    const double a = d.t(d.rng), eta = d.w(d.rng), gap = 2.0 * eta + d.w(d.rng);
    ASSERT_EQ(reg_max_scalar(a, a - gap, eta), a);
    ASSERT_EQ(reg_max_scalar(a - gap, a, eta), a);
  }
  // The shortcut boundary itself.
  EXPECT_EQ(reg_max_scalar(1.0, 0.0, 0.5), 1.0);
}

TEST(RegMax, JointlyConvex) {
  Draw d;
  std::uniform_real_distribution<double> lam(0.0, 1.0);
  for (int i = 0; i < kSamples; ++i) {
    const double eta = d.w(d.rng), l = lam(d.rng);
    const double a1 = d.t(d.rng), b1 = d.t(d.rng), a2 = d.t(d.rng), b2 = d.t(d.rng);
    const double mid = reg_max_scalar(l * a1 + (1 - l) * a2, l * b1 + (1 - l) * b2, eta);
    ASSERT_LE(mid, l * reg_max_scalar(a1, b1, eta) + (1 - l) * reg_max_scalar(a2, b2, eta) + kQuadratureSlack * eta);
  }
}

TEST(RegMax, ContinuousAcrossTheShortcutBoundary) {
  const double eta = 0.1;
  for (double side : {-1.0, 1.0}) {
    const double inside = reg_max_scalar(0.0, side * (2.0 * eta - 1e-9), eta);
    const double outside = reg_max_scalar(0.0, side * 2.0 * eta, eta);
    EXPECT_NEAR(inside, outside, 1e-8);
  }
}

TEST(RegMax, RejectsNonPositiveWidth) {
  EXPECT_THROW(reg_max_scalar(0.0, 1.0, 0.0), Error);
  EXPECT_THROW(reg_max_scalar(0.0, 1.0, -1.0), Error);
  EXPECT_THROW(reg_max_scalar(0.0, 1.0, std::nan("")), Error);
}

TEST(RegMax, ScalesWithEta) {
  // M_eta(t1, t2) = eta M_1(t1 / eta, t2 / eta).
  EXPECT_NEAR(reg_max_scalar(0.0, 0.0, 0.25), 0.25 * reg_max_scalar(0.0, 0.0, 1.0), 1e-15);
  EXPECT_NEAR(reg_max_scalar(0.1, -0.05, 0.2), 0.2 * reg_max_scalar(0.5, -0.25, 1.0), 1e-14);
}

TEST(RegMax, FieldsPreservePlurisubharmonicity) {
  // Two strictly psh fields whose maximum has a crease along |z1| = |z2|.
  const Domain dom = Domain::ball(ComplexPoint{0.0, 0.0}, 1.5);
  const ScalarField u([](const ComplexPoint& z) { return 2.0 * std::norm(z[0]) + 0.5 * std::norm(z[1]); }, dom, dom);
  const ScalarField v([](const ComplexPoint& z) { return 0.5 * std::norm(z[0]) + 2.0 * std::norm(z[1]); }, dom, dom);
  const ScalarField m = reg_max_fields(u, v, 0.05);
  const Grid g = sample_slice(Domain::ball(ComplexPoint{0.0, 0.0}, 1.0), ComplexPoint{0.0, 0.3},
                              ComplexPoint{1.0, 0.0}, 0.02, 0.7);
  const PshReport r = min_levi_eigenvalue(m, g, 0.01);
  EXPECT_GE(r.min_eigenvalue, -1e-6);
  EXPECT_GT(r.min_eigenvalue, 0.4);  // never below the smaller margin, 1/2
}

TEST(RegMax, FieldSmoothSetCoversSeparatedRegions) {
  const Domain dom = Domain::disk(0.0, 2.0);
  const ScalarField u([](const ComplexPoint& z) { return z[0].real(); }, dom, dom);
  const ScalarField v = ScalarField::constant(0.0, dom);
  const ScalarField m = reg_max_fields(u, v, 0.1);
  EXPECT_TRUE(m.is_smooth_at(ComplexPoint{1.0}));
  EXPECT_TRUE(m.is_smooth_at(ComplexPoint{0.0}));  // both inputs are smooth
  EXPECT_DOUBLE_EQ(m(ComplexPoint{1.0}), 1.0);
  EXPECT_DOUBLE_EQ(m(ComplexPoint{-1.0}), 0.0);
}

TEST(RegMax, DisjointFieldsAreRejected) {
  const ScalarField a = ScalarField::constant(0.0, Domain::disk(0.0, 1.0));
  const ScalarField b = ScalarField::constant(0.0, Domain::disk(5.0, 1.0));
  try {
    reg_max_fields(a, b, 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DisjointDomains);
  }
}
