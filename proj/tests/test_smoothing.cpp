#include <gtest/gtest.h>

#include "kahler.hpp"

using namespace kahler;

namespace {

// The raw pushforward of |z|^2 under z -> z^2: the cone 2|w|, strictly psh
// as a current but not smooth at 0.
ScalarField cone() {
  return ScalarField([](const ComplexPoint& w) { return 2.0 * std::abs(w[0]); }, Domain::disk(0.0, 2.0),
                     Domain::minus(Domain::disk(0.0, 2.0), Domain::disk(0.0, 1e-300)), "2|w|");
}

NestedOpens opens() {
  return NestedOpens{Domain::disk(0.0, 0.3), Domain::disk(0.0, 0.5), Domain::disk(0.0, 0.6), std::nullopt};
}

SmoothingParams params() {
  SmoothingParams p;
  p.eps = 0.07;
  p.delta = 0.003;
  p.eta = 0.0005;
  p.quad_order = 8;
  p.h = 0.01;
  p.shell_samples = 200;
  return p;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidArgument;
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Params, EtaAboveHalfDeltaIsInfeasible) {
  SmoothingParams p = params();
  p.eta = 0.5;
  p.delta = 0.2;
  EXPECT_EQ(kind_of([&] { validate_static(p); }), ErrorKind::ParameterInfeasible);
  EXPECT_NE(message_of([&] { validate_static(p); }).find("eta ≤ delta/2"), std::string::npos);
  p.eta = 0.1;  // the boundary case is allowed
  EXPECT_NO_THROW(validate_static(p));
}

TEST(Params, EachMeasuredInequalityIsEnforced) {
  SmoothingParams p = params();
  p.delta = 0.002;
  p.eta = 0.0005;
  p.tau_bound = 0.001;
  p.shift_hessian_bound = 10.0;
  const SmoothingParams ok = validate_params(1.0, p);
  EXPECT_NEAR(ok.tau_slack, 0.001, 1e-15);
  EXPECT_NEAR(ok.absorption_slack, 0.5 - 0.04, 1e-15);
  EXPECT_NEAR(ok.eta_slack, 0.0005, 1e-15);

  EXPECT_EQ(kind_of([&] { validate_params(0.0, p); }), ErrorKind::MarginNonPositive);
  SmoothingParams tau = p;
  tau.tau_bound = 0.002;  // must be strictly below delta
  EXPECT_NE(message_of([&] { validate_params(1.0, tau); }).find("tau_bound < delta"), std::string::npos);
  SmoothingParams k = p;
  k.shift_hessian_bound = 125.0;  // 2 delta K = m / 2 exactly
  EXPECT_NE(message_of([&] { validate_params(1.0, k); }).find("2·delta·K_sigma < m/2"), std::string::npos);
  SmoothingParams unmeasured = params();
  EXPECT_EQ(kind_of([&] { validate_params(1.0, unmeasured); }), ErrorKind::ParameterInfeasible);
}

TEST(Params, NonPositiveValuesAreRejected) {
  for (double SmoothingParams::*f : {&SmoothingParams::eps, &SmoothingParams::eta, &SmoothingParams::delta,
                                     &SmoothingParams::h}) {
    SmoothingParams p = params();
    p.*f = 0.0;
    EXPECT_EQ(kind_of([&] { validate_static(p); }), ErrorKind::ParameterInfeasible);
  }
}

TEST(ShiftProfile, StepsFromOneToMinusOne) {
  const ShiftProfile s(Domain::disk(0.0, 0.3), Domain::disk(0.0, 0.45));
  EXPECT_EQ(s(ComplexPoint{0.1}), 1.0);
  EXPECT_EQ(s(ComplexPoint{0.3}), 1.0);
  EXPECT_EQ(s(ComplexPoint{0.45}), -1.0);
  EXPECT_EQ(s(ComplexPoint{1.0}), -1.0);
  double prev = 1.0;
  for (int i = 1; i < 50; ++i) {
    const double v = s(ComplexPoint{0.3 + 0.15 * i / 50.0});
    EXPECT_LT(v, 1.0);
    EXPECT_GT(v, -1.0);
    EXPECT_LE(v, prev);
    prev = v;
  }
  EXPECT_THROW(ShiftProfile(Domain::disk(0.0, 0.3), Domain::annulus(0.0, 0.1, 0.5)), Error);
}

TEST(LocalSmoothing, EqualsInputOffVAndDominatesIt) {
  const ScalarField phi = cone();
  const LocalSmoothing ls = smooth_locally(phi, opens(), params());
  for (const auto& x : low_discrepancy_sample(Domain::annulus(0.0, 0.5, 1.9), 2000))
    ASSERT_EQ(ls.psi(x), phi(x));
  for (const auto& x : low_discrepancy_sample(Domain::disk(0.0, 0.5), 500)) ASSERT_GE(ls.psi(x), phi(x));
  EXPECT_TRUE(ls.psi.is_smooth_at(ComplexPoint{0.0}));
  EXPECT_TRUE(ls.psi.is_smooth_at(ComplexPoint{1.0}));
  EXPECT_FALSE(ls.psi.is_smooth_at(ComplexPoint{0.4}));  // the shell is not declared smooth
  EXPECT_GT(ls.params.tau_slack, 0.0);
  EXPECT_GT(ls.params.absorption_slack, 0.0);
}

TEST(LocalSmoothing, IsStrictlyPshAcrossTheBranchPoint) {
  const ScalarField psi = local_smooth(cone(), opens(), params());
  const Grid g = sample_grid(Domain::disk(0.0, 0.6), 0.03);
  EXPECT_GT(min_levi_eigenvalue(psi, g, 0.01).min_eigenvalue, 0.0);
}

TEST(LocalSmoothing, DoublingEtaStillPasses) {
  SmoothingParams p = params();
  p.eta *= 2.0;
  EXPECT_NO_THROW(smooth_locally(cone(), opens(), p));
}

TEST(LocalSmoothing, InfeasibleSettingsAreRejected) {
  SmoothingParams big = params();
  big.eps = 1.6;
  EXPECT_EQ(kind_of([&] { smooth_locally(cone(), opens(), big); }), ErrorKind::ParameterInfeasible);

  SmoothingParams tiny = params();
  tiny.delta = 1e-5;
  tiny.eta = 4e-6;
  EXPECT_NE(message_of([&] { smooth_locally(cone(), opens(), tiny); }).find("tau_bound < delta"), std::string::npos);

  NestedOpens flipped = opens();
  std::swap(flipped.U, flipped.V);
  EXPECT_EQ(kind_of([&] { smooth_locally(cone(), flipped, params()); }), ErrorKind::InvalidArgument);

  NestedOpens wide = opens();
  wide.W = Domain::disk(0.0, 2.5);
  EXPECT_EQ(kind_of([&] { smooth_locally(cone(), wide, params()); }), ErrorKind::OutOfDomain);
}

TEST(Glue, SingleTripleIsBitIdenticalToLocalSmooth) {
  const ScalarField phi = cone();
  const KahlerCocycle c(Atlas::single("w", Domain::disk(0.0, 2.0)), {phi});
  const NestedOpens o = opens();
  const ChartSet X1{"X1", {Domain::minus(Domain::disk(0.0, 2.0), Domain::disk(0.0, 0.2))}};
  const ChartSet X2{"X2", {Domain::disk(0.0, 0.7)}};
  const GlueResult g = global_glue(c, X1, X2, {RefinementTriple{0, o.U, o.V, o.W, "disk", {}}}, params());
  const NestedOpens with_omega{o.U, o.V, o.W, Domain::intersection(o.W, X1.in_chart[0])};
  const ScalarField direct = local_smooth(phi, with_omega, params());
  for (const auto& x : low_discrepancy_sample(Domain::disk(0.0, 1.9), 3000))
    ASSERT_EQ(g.cocycle.potential(0)(x), direct(x));
  ASSERT_EQ(g.correction.steps.size(), 1u);
}

TEST(Glue, CorrectionVanishesOffItsSupport) {
  const KahlerCocycle c(Atlas::single("w", Domain::disk(0.0, 2.0)), {cone()});
  const NestedOpens o = opens();
  const ChartSet X1{"X1", {Domain::minus(Domain::disk(0.0, 2.0), Domain::disk(0.0, 0.2))}};
  const ChartSet X2{"X2", {Domain::disk(0.0, 0.7)}};
  const GlueResult g = global_glue(c, X1, X2, {RefinementTriple{0, o.U, o.V, o.W, "disk", {}}}, params());
  const CorrectionStep& st = g.correction.steps[0];
  double worst = 0.0;
  for (const auto& x : low_discrepancy_sample(Domain::minus(Domain::disk(0.0, 2.0), st.support), 2000))
    worst = std::max(worst, std::abs(st.chi[0](x)));
  EXPECT_EQ(worst, 0.0);
  EXPECT_GT(g.correction.chi[0](ComplexPoint{0.0}), 0.0);
}

TEST(Glue, UncoveredGapIsACoverageError) {
  const KahlerCocycle c(Atlas::single("w", Domain::disk(0.0, 2.0)), {cone()});
  const NestedOpens o = opens();
  const ChartSet X1{"X1", {Domain::minus(Domain::disk(0.0, 2.0), Domain::disk(0.0, 0.4))}};  // gap reaches 0.4 > U
  const ChartSet X2{"X2", {Domain::disk(0.0, 0.7)}};
  EXPECT_EQ(kind_of([&] { global_glue(c, X1, X2, {RefinementTriple{0, o.U, o.V, o.W, "disk", {}}}, params()); }),
            ErrorKind::Coverage);
}

TEST(Agreement, ExactZeroDetectsTinyDefects) {
  const ScalarField phi = cone();
  const Domain outside = Domain::annulus(0.0, 0.6, 1.5);
  const Check same = verify_agreement(phi, phi, outside, 1000);
  EXPECT_TRUE(same.pass);
  EXPECT_EQ(same.value, 0.0);

  const ScalarField bumped(
      [phi](const ComplexPoint& x) { return phi(x) + (std::abs(x[0] - 1.0) < 0.2 ? 1e-9 : 0.0); },
      phi.valid_on());
  const Check off = verify_agreement(bumped, phi, outside, 1000);
  EXPECT_FALSE(off.pass);
  EXPECT_NEAR(off.value, 1e-9, 1e-15);

  const Check na = verify_agreement(phi, phi, Domain::disk(0.0, 1.0), 100, Domain::disk(0.0, 0.5));
  EXPECT_FALSE(na.applicable);
  EXPECT_TRUE(na.pass);
}
