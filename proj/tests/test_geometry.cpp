#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <random>
#include <sstream>

#include "kahler.hpp"

using namespace kahler;

TEST(ComplexPoint, RejectsBadDimensionAndNonFinite) {
  EXPECT_THROW(ComplexPoint(0), Error);
  EXPECT_THROW(ComplexPoint(kMaxDim + 1), Error);
  EXPECT_THROW((ComplexPoint{Complex(std::nan(""), 0.0)}), Error);
  ComplexPoint p{Complex(1, 2), Complex(3, -4)};
  EXPECT_EQ(p.real_dim(), 4u);
  EXPECT_DOUBLE_EQ(p.real_coord(3), -4.0);
  EXPECT_DOUBLE_EQ(p.norm(), std::sqrt(30.0));
}

TEST(Domain, DiskMarginIsSignedDistance) {
  const Domain d = Domain::disk(Complex(1, 0), 2.0);
  EXPECT_DOUBLE_EQ(d.margin(ComplexPoint{Complex(1, 0)}), 2.0);
  EXPECT_DOUBLE_EQ(d.margin(ComplexPoint{Complex(4, 0)}), -1.0);
  EXPECT_FALSE(d.contains(ComplexPoint{Complex(3, 0)}));  // boundary is outside an open set
}

TEST(Domain, AnnulusAndSetOperations) {
  const Domain a = Domain::annulus(0.0, 1.0, 2.0);
  EXPECT_FALSE(a.contains(ComplexPoint{0.5}));
  EXPECT_TRUE(a.contains(ComplexPoint{1.5}));
  const Domain u = Domain::unite(Domain::disk(0.0, 1.0), Domain::disk(3.0, 1.0));
  EXPECT_TRUE(u.contains(ComplexPoint{3.5}));
  EXPECT_FALSE(u.contains(ComplexPoint{2.0}));
  const Domain m = Domain::minus(Domain::disk(0.0, 2.0), Domain::disk(0.0, 1.0));
  EXPECT_FALSE(m.contains(ComplexPoint{Complex(0.0, 0.99)}));
  EXPECT_FALSE(m.contains(ComplexPoint{1.0}));  // minus removes the closure
  EXPECT_TRUE(m.contains(ComplexPoint{1.01}));
  EXPECT_THROW(Domain::intersection(Domain::disk(0.0, 1.0), Domain::ball(ComplexPoint{0.0, 0.0}, 1.0)), Error);
}

TEST(Domain, ShrinkAndGrowMoveTheBoundary) {
  const Domain p = Domain::polydisk(ComplexPoint{0.0, 0.0}, {1.0, 2.0});
  const Domain s = p.shrunk(0.25);
  EXPECT_TRUE(s.contains(ComplexPoint{0.7, 1.7}));
  EXPECT_FALSE(s.contains(ComplexPoint{0.8, 0.0}));
  EXPECT_TRUE(p.grown(0.5).contains(ComplexPoint{1.4, 0.0}));
}

TEST(Domain, MarginIsOneLipschitzOnSamples) {
  const Domain d = Domain::intersection(Domain::ball(ComplexPoint{0.0, 0.0}, 1.0),
                                        Domain::coordinate_disk(2, 1, Complex(0.3, 0), 0.8));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  for (int i = 0; i < 2000; ++i) {
    ComplexPoint a{Complex(u(rng), u(rng)), Complex(u(rng), u(rng))};
    ComplexPoint b{Complex(u(rng), u(rng)), Complex(u(rng), u(rng))};
    EXPECT_LE(std::abs(d.margin(a) - d.margin(b)), distance(a, b) + 1e-12);
  }
}

TEST(Grid, NodesLieInsideAndIncludeTheCenter) {
  const Domain d = Domain::disk(Complex(0.5, 0.5), 0.3);
  const Grid g = sample_grid(d, 0.05);
  ASSERT_FALSE(g.nodes.empty());
  bool has_center = false;
  for (const auto& p : g.nodes) {
    EXPECT_TRUE(d.contains(p));
    has_center = has_center || p == d.center();
  }
  EXPECT_TRUE(has_center);
  // Lattice count approximates area / h^2.
  EXPECT_NEAR(static_cast<double>(g.size()), kPi * 0.09 / 0.0025, 8.0);
}

TEST(Grid, ErrorsAreTyped) {
  try {
    sample_grid(Domain::disk(0.0, 1.0), -1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
  }
  try {
    sample_grid(Domain::ball(ComplexPoint{0.0, 0.0, 0.0, 0.0}, 1.0), 1e-3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::GridTooLarge);
  }
  try {
    sample_grid(Domain::whole(1), 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
  }
}

TEST(Grid, SliceNodesLieOnTheLine) {
  const Domain d = Domain::polydisk(ComplexPoint{0.0, 0.0}, {1.0, 1.0});
  const ComplexPoint o{0.2, 0.1}, dir{1.0, 0.0};
  const Grid g = sample_slice(d, o, dir, 0.1, 0.5);
  for (const auto& p : g.nodes) {
    EXPECT_EQ(p[1], Complex(0.1, 0.0));
    EXPECT_LE(std::abs(p[0] - Complex(0.2, 0.0)), 0.5 + 1e-12);
  }
}

TEST(Grid, NestingMarginSign) {
  EXPECT_GT(nesting_margin(Domain::disk(0.0, 0.5), Domain::disk(0.0, 1.0), 0.05), 0.0);
  EXPECT_LT(nesting_margin(Domain::disk(0.0, 1.0), Domain::disk(0.0, 0.5), 0.05), 0.0);
}

TEST(Grid, HaltonSampleIsDeterministicAndInside) {
  const Domain d = Domain::annulus(0.0, 0.3, 1.0);
  const auto a = low_discrepancy_sample(d, 500), b = low_discrepancy_sample(d, 500);
  ASSERT_EQ(a.size(), 500u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i], b[i]);
    EXPECT_TRUE(d.contains(a[i]));
  }
  Halton h(1);
  EXPECT_DOUBLE_EQ(h.next()[0], 0.5);
  EXPECT_DOUBLE_EQ(h.next()[0], 0.25);
  EXPECT_DOUBLE_EQ(h.next()[0], 0.75);
}

TEST(Grid, CsvSchema) {
  std::ostringstream os;
  write_csv(os, {ComplexPoint{Complex(1, 2)}, ComplexPoint{Complex(0.5, 0)}},
            [](const ComplexPoint& p) { return p[0].real(); });
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "re_1,im_1,value");
  int rows = 0;
  while (std::getline(is, line)) rows += !line.empty();
  EXPECT_EQ(rows, 2);
}

TEST(Quadrature, GaussLegendreIsExactToDegree2nMinus1) {
  for (int n : {2, 5, 8, 12}) {
    const QuadratureRule q = gauss_legendre(n, 0.0, 2.0);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < q.nodes.size(); ++i) s += q.weights[i] * std::pow(q.nodes[i], k);
      EXPECT_NEAR(s, std::pow(2.0, k + 1) / (k + 1), 1e-12 * std::pow(2.0, k + 1)) << "n=" << n << " k=" << k;
    }
  }
}

TEST(LinearAlgebra, EigenvaluesMatchEigen) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (std::size_t n = 1; n <= kMaxDim; ++n) {
    for (int trial = 0; trial < 50; ++trial) {
      HermitianMatrix A(n);
      Eigen::MatrixXcd E(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
          const Complex z = i == j ? Complex(g(rng), 0.0) : Complex(g(rng), g(rng));
          A(i, j) = z;
          A(j, i) = std::conj(z);
          E(i, j) = z;
          E(j, i) = std::conj(z);
        }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(E);
      const auto ev = hermitian_eigenvalues(A);
      ASSERT_EQ(ev.size(), n);
      for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(ev[i], es.eigenvalues()(i), 1e-10);
    }
  }
}

TEST(LinearAlgebra, RelativeBoundAgainstIdentityIsSpectralRadius) {
  HermitianMatrix I(2), P(2);
  I(0, 0) = I(1, 1) = 1.0;
  P(0, 0) = 3.0;
  P(1, 1) = -5.0;
  P(0, 1) = Complex(0.0, 1.0);
  P(1, 0) = Complex(0.0, -1.0);
  const auto ev = hermitian_eigenvalues(P);
  EXPECT_NEAR(relative_bound(I, P), std::max(std::abs(ev[0]), std::abs(ev[1])), 1e-12);
  HermitianMatrix B = I;
  B(1, 1) = -1.0;
  EXPECT_TRUE(std::isinf(relative_bound(B, P)));
}

TEST(Calculus, LaplacianIsExactOnQuadratics) {
  const ScalarField f([](const ComplexPoint& z) { return std::norm(z[0]) + 3.0 * z[0].real(); },
                      Domain::disk(0.0, 2.0));
  EXPECT_NEAR(discrete_laplacian(f, ComplexPoint{Complex(0.3, -0.2)}, 0.01), 4.0, 1e-8);
}

TEST(Calculus, MassOfQuadraticAndCone) {
  // |w|^2: Laplacian 4, mass 4 pi R^2. 2|w|: boundary flux 2 pi R * 2.
  const ScalarField q([](const ComplexPoint& z) { return std::norm(z[0]); }, Domain::disk(0.0, 2.0));
  const ScalarField c([](const ComplexPoint& z) { return 2.0 * std::abs(z[0]); }, Domain::disk(0.0, 2.0));
  EXPECT_NEAR(mass_integral(q, Domain::disk(0.0, 1.0), 0.02), 4.0 * kPi, 1e-6);
  EXPECT_NEAR(mass_integral(c, Domain::disk(0.0, 1.0), 0.02), 4.0 * kPi, 0.01 * 4.0 * kPi);
  EXPECT_THROW(mass_integral(q, Domain::annulus(0.0, 0.1, 1.0), 0.02), Error);
}

TEST(Field, EvaluationOutsideTheDomainThrows) {
  const ScalarField f = ScalarField::constant(1.0, Domain::disk(0.0, 1.0));
  try {
    f(ComplexPoint{2.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OutOfDomain);
  }
}

TEST(Field, RestrictionToALine) {
  const ScalarField f([](const ComplexPoint& z) { return std::norm(z[0]) + std::norm(z[1]); },
                      Domain::ball(ComplexPoint{0.0, 0.0}, 3.0));
  const ScalarField l = restrict_to_line(f, ComplexPoint{0.0, 1.0}, ComplexPoint{1.0, 1.0}, 1.0);
  const Complex t(0.3, 0.4);
  EXPECT_NEAR(l(ComplexPoint{t}), std::norm(t) + std::norm(1.0 + t), 1e-15);
}

TEST(Atlas, ProjectiveTransitionsAreInvolutions) {
  const CoverSpec c = CoverSpec::projective_vieta(3.0, 3.0);
  const Atlas& a = c.downstairs();
  const ComplexPoint x{Complex(0.4, 0.1), Complex(-0.7, 0.2)};
  auto y = a.map(0, 1, x);
  ASSERT_TRUE(y);
  auto z = a.map(1, 0, *y);
  ASSERT_TRUE(z);
  EXPECT_LT(distance(*z, x), 1e-14);
  EXPECT_FALSE(a.map(0, 1, ComplexPoint{0.5, 0.0}));
}

TEST(Cocycle, FubiniStudyOverlapIsPluriharmonic) {
  // log(1+|x|^2) in chart 0 and log(1+|y|^2) with y = 1/x differ by log|x|^2.
  const Atlas a(1, {Chart{"x", Domain::disk(0.0, 3.0)}, Chart{"y", Domain::disk(0.0, 3.0)}},
                [](std::size_t f, std::size_t t, const ComplexPoint& x) -> std::optional<ComplexPoint> {
                  if (f == t) return x;
                  if (x[0] == Complex(0.0, 0.0)) return std::nullopt;
                  return ComplexPoint{1.0 / x[0]};
                });
  auto fs = [](const ComplexPoint& z) { return std::log1p(std::norm(z[0])); };
  const KahlerCocycle c(a, {ScalarField(fs, Domain::disk(0.0, 3.0)), ScalarField(fs, Domain::disk(0.0, 3.0))});
  const Domain o = overlap_domain(a, 0, 1).shrunk(0.05);
  auto pts = low_discrepancy_sample(o, 200);
  ASSERT_FALSE(pts.empty());
  const auto chk = check_cocycle(c, {low_discrepancy_sample(Domain::disk(0.0, 2.5), 100), {}}, {{{}, pts}}, 1e-3);
  EXPECT_GT(chk.min_margin, 0.0);
  EXPECT_LT(chk.max_overlap_deviation, 1e-4);
  EXPECT_TRUE(chk.pass(1e-4));
}
