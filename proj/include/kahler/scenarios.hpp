// The shipped scenarios and the check list run against each of them.
//
//   S1  w = z^2 on C, phi = |z|^2; pushforward 2|w| kinks at the origin.
//   S2  Vieta map C^2 -> Sym^2(C) = C^2, phi = |z1|^2 + |z2|^2; pushforward
//       |s|^2 + |s^2 - 4p| kinks along the discriminant.
//   S3  Vieta map P1 x P1 -> P2 with the Fubini-Study product; two charts.
//   S4  identity cover of P1 (pure gluing): Fubini-Study plus two conical
//       kinks, one handled in each chart.
#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kahler/smoothing.hpp"

namespace kahler {

/// Parameter overrides; unset fields keep the scenario defaults.
struct ScenarioConfig {
  std::optional<double> h, eps, eta, delta, n_radius, nprime_radius;
  std::optional<int> quad_order;
};

/// Nodes of a 2D slice at spacing h; positivity is checked with the full
/// Levi form at every node.
struct NodePlan {
  std::string name;
  std::size_t chart = 0;
  std::function<std::vector<ComplexPoint>(double h)> nodes;
};

/// A complex line t -> origin + t dir of one chart, with a parameter disk.
struct LinePlan {
  std::size_t chart = 0;
  ComplexPoint origin, dir;
  double radius = 1.0;
};

struct Scenario {
  std::string id;
  std::string summary;
  CoverSpec cover;
  KahlerCocycle upstairs;
  ChartSet N, Nprime;
  double n_radius = 0.0, nprime_radius = 0.0;
  std::vector<RefinementTriple> refinement;
  SmoothingParams params;
  PushforwardOptions pipeline;

  std::vector<NodePlan> positivity{};  // checked at params.h and params.h / 2

  // C^2 proxy: sup |discrete Laplacian| on the line over the parameter disk
  // c2_line.radius, at c2_h and c2_h / 2.
  LinePlan c2_line{};
  double c2_h = 0.02;

  // Mass of the restriction to a line over a parameter disk, before and after.
  std::optional<LinePlan> mass_line{};
  double mass_h = 0.02;
  std::optional<double> mass_oracle{};

  std::optional<Curve> curve{};
  int curve_quad_order = 8;
  std::optional<double> curve_oracle{};
  double curve_tol = 0.02;

  std::size_t overlap_samples = 60;
  double overlap_h = 1e-2;
  std::size_t support_samples = 2000;
};

namespace detail {

inline Domain scaled_region(std::size_t n, const std::string& label, const Box& box, double lipschitz,
                            std::function<double(const ComplexPoint&)> g, double level) {
  return Domain::region(n, label + "<" + fmt(level), ComplexPoint(n), box,
                        [g, level, lipschitz](const ComplexPoint& x) { return (level - g(x)) / lipschitz; });
}

// Axis-parallel rectangle |x - Re c| < hx, |y - Im c| < hy in C.
inline Domain rectangle(Complex c, double hx, double hy) {
  Box b = Box::unbounded(1);
  b.lo = {c.real() - hx, c.imag() - hy};
  b.hi = {c.real() + hx, c.imag() + hy};
  return Domain::region(1, "rect", ComplexPoint{c}, b, [c, hx, hy](const ComplexPoint& x) {
    const Complex d = x[0] - c;
    return std::min(hx - std::abs(d.real()), hy - std::abs(d.imag()));
  });
}

inline Box polydisk_box(std::size_t n, double r) {
  Box b = Box::unbounded(n);
  for (std::size_t k = 0; k < 2 * n; ++k) {
    b.lo[k] = -r;
    b.hi[k] = r;
  }
  return b;
}

inline void apply(SmoothingParams& p, const ScenarioConfig& c) {
  if (c.h) p.h = *c.h;
  if (c.eps) p.eps = *c.eps;
  if (c.eta) p.eta = *c.eta;
  if (c.delta) p.delta = *c.delta;
  if (c.quad_order) p.quad_order = *c.quad_order;
}

inline void require_radii(double n, double np) {
  if (!(n > 0.0) || !std::isfinite(n)) throw Error(ErrorKind::ParameterInfeasible, "N radius must be positive");
  if (!(np > 0.0) || !std::isfinite(np)) throw Error(ErrorKind::ParameterInfeasible, "N′ radius must be positive");
  if (!(np < n))
    throw Error(ErrorKind::ParameterInfeasible,
                "N′ ⋐ N violated (nprime_radius=" + fmt(np) + " ≥ n_radius=" + fmt(n) + ")");
}

// Radii of a triple between N' and N: V'' just outside N', V' just inside N.
struct TripleRadii {
  double inner, middle, outer;
};

inline TripleRadii triple_radii(double n, double np) {
  const double g = n - np;
  return {np + 0.05 * g, n - 0.05 * g, n};
}

inline std::vector<ComplexPoint> disk_nodes_on_line(const LinePlan& l, double h) {
  std::vector<ComplexPoint> out;
  for (const auto& t : sample_grid(Domain::disk(0.0, l.radius), h).nodes) {
    ComplexPoint q = l.origin;
    for (std::size_t j = 0; j < q.dim(); ++j) q[j] += t[0] * l.dir[j];
    out.push_back(q);
  }
  return out;
}

inline double fubini_study(const ComplexPoint& z) {
  double s = 0.0;
  for (std::size_t j = 0; j < z.dim(); ++j) s += std::log1p(std::norm(z[j]));
  return s;
}

}  // namespace detail

// ---------------------------------------------------------------- S1

inline Scenario build_s1(const ScenarioConfig& cfg) {
  const double nr = cfg.n_radius.value_or(0.6), npr = cfg.nprime_radius.value_or(0.4);
  detail::require_radii(nr, npr);
  if (nr >= 1.5) throw Error(ErrorKind::ParameterInfeasible, "S1 needs n_radius < 1.5");
  SmoothingParams p;
  p.eps = 0.07;
  p.delta = 0.002;
  p.eta = 0.0005;
  p.quad_order = 8;
  p.h = 0.01;
  detail::apply(p, cfg);
  validate_static(p);

  const Domain base = Domain::disk(0.0, 2.0);
  const CoverSpec cover = CoverSpec::power_map(2, base, Domain::disk(0.0, 2.0));
  ScalarField phi([](const ComplexPoint& z) { return std::norm(z[0]); }, Domain::disk(0.0, 2.0),
                  Domain::disk(0.0, 2.0), "|z|^2");
  const auto r = detail::triple_radii(nr, npr);
  Scenario s{"S1",
             "power map w = z^2 on C, phi = |z|^2, pushforward 2|w|",
             cover,
             KahlerCocycle(cover.upstairs(), {phi}),
             ChartSet{"N", {Domain::disk(0.0, nr)}},
             ChartSet{"N'", {Domain::disk(0.0, npr)}},
             nr,
             npr,
             {RefinementTriple{0, Domain::disk(0.0, r.inner), Domain::disk(0.0, r.middle), Domain::disk(0.0, r.outer),
                               "disk", {}}},
             p,
             {}};
  s.pipeline.mass_disk = Domain::disk(0.0, 1.0);
  s.pipeline.mass_h = 0.02;
  s.pipeline.positivity_samples = 1500;
  const double vr = std::max(1.0, nr + 0.2);
  s.positivity = {NodePlan{"disk(" + detail::fmt(vr) + ")", 0,
                           [vr](double h) { return sample_grid(Domain::disk(0.0, vr), h).nodes; }}};
  s.c2_line = LinePlan{0, ComplexPoint{0.0}, ComplexPoint{1.0}, npr};
  s.c2_h = 0.02;
  s.mass_line = LinePlan{0, ComplexPoint{0.0}, ComplexPoint{1.0}, std::max(1.0, nr + 0.2)};
  s.mass_h = 0.02;
  s.mass_oracle = 2.0 * kPi * s.mass_line->radius * 2.0;  // flux 2 pi R u'(R), u = 2|w|
  return s;
}

// ---------------------------------------------------------------- S2

inline Scenario build_s2(const ScenarioConfig& cfg) {
  const double nr = cfg.n_radius.value_or(2.0), npr = cfg.nprime_radius.value_or(0.3);
  detail::require_radii(nr, npr);
  if (nr > 2.0) throw Error(ErrorKind::ParameterInfeasible, "S2 needs n_radius ≤ 2");
  SmoothingParams p;
  p.eps = 0.05;
  p.delta = 0.02;
  p.eta = 0.01;
  p.quad_order = 10;
  p.h = 0.02;
  p.shell_samples = 400;
  detail::apply(p, cfg);
  validate_static(p);

  constexpr double kBase = 2.0, kExtent = 4.5, kUp = 8.0, kLip = 10.0;
  const Domain base = Domain::polydisk(ComplexPoint{0.0, 0.0}, {kBase, kBase});
  const Domain ext = Domain::polydisk(ComplexPoint{0.0, 0.0}, {kExtent, kExtent});
  const CoverSpec cover =
      CoverSpec::vieta(ext, Domain::polydisk(ComplexPoint{0.0, 0.0}, {kUp, kUp})).with_base({base});
  const Domain up = Domain::polydisk(ComplexPoint{0.0, 0.0}, {kUp, kUp});
  ScalarField phi([](const ComplexPoint& z) { return std::norm(z[0]) + std::norm(z[1]); }, up, up,
                  "|z1|^2+|z2|^2");
  const Box box = detail::polydisk_box(2, kExtent);
  auto disc = [](const ComplexPoint& b) { return std::abs(b[0] * b[0] - 4.0 * b[1]); };
  auto dreg = [&](double level) { return detail::scaled_region(2, "|s^2-4p|", box, kLip, disc, level); };
  auto scut = [](double b) { return Domain::coordinate_disk(2, 0, 0.0, b); };
  const auto r = detail::triple_radii(nr, npr);
  RefinementTriple t{0,
                     Domain::intersection(dreg(r.inner), scut(kBase + 0.05)),
                     Domain::intersection(dreg(r.middle), scut(2.95)),
                     Domain::intersection(dreg(r.outer), scut(3.0)),
                     "tube",
                     {}};
  for (double sr : {2.1, 2.5, 2.9})
    for (int k = 0; k < 4; ++k) {
      const Complex sv = std::polar(sr, 0.5 * kPi * k + 0.3);
      t.probes.push_back(ComplexPoint{sv, 0.25 * sv * sv});
    }
  Scenario s{"S2",
             "Vieta map C^2 -> Sym^2(C), phi = |z1|^2 + |z2|^2, pushforward |s|^2 + |s^2 - 4p|",
             cover,
             KahlerCocycle(cover.upstairs(), {phi}),
             ChartSet{"N", {dreg(nr)}},
             ChartSet{"N'", {dreg(npr)}},
             nr,
             npr,
             {t},
             p,
             {}};
  s.pipeline.positivity_samples = 600;
  s.pipeline.agreement_samples = 10000;
  // Full Levi forms on pieces of complex lines crossing the branch locus and
  // the shell where the regularized max switches over.
  auto on_line = [](Domain piece, std::size_t free, Complex fixed) {
    return [piece, free, fixed](double h) {
      std::vector<ComplexPoint> out;
      for (const auto& t : sample_grid(piece, h).nodes)
        out.push_back(free == 1 ? ComplexPoint{fixed, t[0]} : ComplexPoint{t[0], fixed});
      return out;
    };
  };
  const double reach = std::min(0.5, 0.25 * r.outer + 0.05);
  s.positivity = {NodePlan{"strip s=0", 0, on_line(detail::rectangle(0.0, reach, 0.06), 1, 0.0)},
                  NodePlan{"disk p=0.09", 0, on_line(Domain::disk(0.6, 0.15), 0, 0.09)}};
  s.c2_line = LinePlan{0, ComplexPoint{0.0, 0.0}, ComplexPoint{0.0, 1.0}, 0.25 * npr};
  s.c2_h = 0.004;
  s.mass_line = LinePlan{0, ComplexPoint{0.0, 0.0}, ComplexPoint{0.0, 1.0}, 1.0};
  s.mass_h = 0.02;
  s.mass_oracle = 8.0 * kPi;  // on s = 0 the pushforward is 4|p|
  return s;
}

// ---------------------------------------------------------------- S3

namespace detail {

// 1/(1 + |s|^2 + |p|^2) read in chart 0 coordinates, whichever chart x is in.
inline double rho0(std::size_t chart, const ComplexPoint& x) {
  const double q = 1.0 + std::norm(x[0]) + std::norm(x[1]);
  return chart == 0 ? 1.0 / q : std::norm(x[1]) / q;
}

// |Z2|^2/|Z|^2, the same function read in either chart; small near the
// line Z2 = 0.
inline double rho2(std::size_t chart, const ComplexPoint& x) {
  const double q = 1.0 + std::norm(x[0]) + std::norm(x[1]);
  return chart == 0 ? std::norm(x[1]) / q : 1.0 / q;
}

inline double normalized_disc(const ComplexPoint& x) {
  return std::abs(x[0] * x[0] - 4.0 * x[1]) / (1.0 + std::norm(x[0]) + std::norm(x[1]));
}

}  // namespace detail

inline Scenario build_s3(const ScenarioConfig& cfg) {
  const double nr = cfg.n_radius.value_or(1.5), npr = cfg.nprime_radius.value_or(0.25);
  detail::require_radii(nr, npr);
  if (nr > 1.5) throw Error(ErrorKind::ParameterInfeasible, "S3 needs n_radius ≤ 1.5");
  SmoothingParams p;
  p.eps = 0.03;
  p.delta = 0.004;
  p.eta = 0.002;
  p.quad_order = 6;  // the second step mollifies through the first: cost grows with the square of the rule
  p.h = 0.04;
  p.shell_samples = 120;
  detail::apply(p, cfg);
  validate_static(p);

  // The manifold is the union of two chart bases, rho0 > 0.3 in chart 0
  // and rho2 > 0.15 in chart 1: all of P2 except a neighbourhood of
  // [0:1:0]. Both bases are bounded in their own coordinates, and every
  // cut-off below changes over a band of Fubini-Study width >= 0.16.
  constexpr double kExtent = 5.0, kUp = 20.0, kLipNu = 5.0, kLipRho = 0.65;
  const CoverSpec raw_cover = CoverSpec::projective_vieta(kExtent, kUp);
  const Box box = detail::polydisk_box(2, kExtent);
  auto level_set = [&](std::size_t chart, const char* name, double (*rho)(std::size_t, const ComplexPoint&),
                       double q, bool above, double reach) {
    const std::string label = std::string(name) + (above ? ">" : "<") + detail::fmt(q);
    return Domain::region(2, label, ComplexPoint(2), reach > 0.0 ? detail::polydisk_box(2, reach) : box,
                          [chart, rho, q, above](const ComplexPoint& x) {
                            return (above ? rho(chart, x) - q : q - rho(chart, x)) / kLipRho;
                          });
  };
  // Sublevel sets rho0 > q (chart 0) and rho2 > q (chart 1) are balls of
  // radius sqrt(1/q - 1) in their chart.
  auto rho0_above = [&](double q) { return level_set(0, "rho0", detail::rho0, q, true, std::sqrt(1.0 / q - 1.0)); };
  auto rho2_above = [&](double q) { return level_set(1, "rho2", detail::rho2, q, true, std::sqrt(1.0 / q - 1.0)); };
  auto rho0_below = [&](double q) { return level_set(1, "rho0", detail::rho0, q, false, 0.0); };
  const CoverSpec cover = raw_cover.with_base({rho0_above(0.3), rho2_above(0.15)});
  const Domain up = Domain::polydisk(ComplexPoint{0.0, 0.0}, {kUp, kUp});
  ScalarField fs0(detail::fubini_study, up, up, "FS");
  ScalarField fs1(detail::fubini_study, up, up, "FS'");
  auto nu = [&](double level) {
    return detail::scaled_region(2, "nu", box, kLipNu, detail::normalized_disc, level);
  };
  auto both = [](const Domain& a, const Domain& b, const Domain& c) {
    return Domain::intersection(Domain::intersection(a, b), c);
  };
  const auto r = detail::triple_radii(nr, npr);
  // V'' of the first triple contains the chart 0 base; the second covers
  // the rest of the chart 1 base.
  RefinementTriple t0{0, Domain::intersection(nu(r.inner), rho0_above(0.27)),
                      Domain::intersection(nu(r.middle), rho0_above(0.12)),
                      Domain::intersection(nu(r.outer), rho0_above(0.11)), "conic (s,p)", {}};
  RefinementTriple t1{1, both(nu(r.inner), rho2_above(0.14), rho0_below(0.35)),
                      both(nu(r.middle), rho2_above(0.05), rho0_below(0.6)),
                      both(nu(r.outer), rho2_above(0.045), rho0_below(0.65)), "conic (s',p')", {}};
  const ChartSet N{"N", {nu(nr), nu(nr)}}, Np{"N'", {nu(npr), nu(npr)}};
  Scenario s{"S3",
             "Vieta map P1 x P1 -> P2 with the Fubini-Study product, N = {normalized discriminant < r}",
             cover,
             KahlerCocycle(raw_cover.upstairs(), {fs0, fs1}),
             N,
             Np,
             nr,
             npr,
             {t0, t1},
             p,
             {}};
  s.pipeline.positivity_samples = 40;
  s.pipeline.agreement_samples = 10000;

  // The line s = c meets the conic at p = c^2/4 and at [0:0:1]; one patch
  // is centered on each crossing.
  const double c = 0.5, p0 = 0.25 * c * c;
  Curve line{"s = 0.5", {}};
  line.patches.push_back(CurvePatch{0, [c, p0](Complex t) { return ComplexPoint{c, p0 + t}; }, 0.0, 1.0, {}});
  line.patches.push_back(CurvePatch{1,
                                    [c, p0](Complex u) {
                                      const Complex d = 1.0 + p0 * u;
                                      return ComplexPoint{c * u / d, u / d};
                                    },
                                    0.0, 1.0, {}});
  s.curve = line;
  s.curve_quad_order = 8;
  s.curve_oracle = 8.0 * kPi;
  s.positivity = {NodePlan{"slice s=0.5 near the conic", 0, [c, p0](double h) {
                             std::vector<ComplexPoint> out;
                             for (const auto& q : sample_grid(Domain::disk(p0, 0.1), h).nodes)
                               out.push_back(ComplexPoint{c, q[0]});
                             return out;
                           }},
                  NodePlan{"slice s'=0 near [0:0:1]", 1, [](double h) {
                             std::vector<ComplexPoint> out;
                             for (const auto& q : sample_grid(Domain::disk(0.0, 0.1), h).nodes)
                               out.push_back(ComplexPoint{0.0, q[0]});
                             return out;
                           }}};
  s.c2_line = LinePlan{0, ComplexPoint{c, p0}, ComplexPoint{0.0, 1.0}, 0.02};
  s.c2_h = 0.004;
  s.overlap_samples = 20;
  return s;
}

// ---------------------------------------------------------------- S4

namespace detail {

// Chordal distance on P1 between z (chart 0 coordinate) and a.
inline double chordal(Complex z, Complex a) {
  return std::abs(z - a) / std::sqrt((1.0 + std::norm(z)) * (1.0 + std::norm(a)));
}

// Same distance with z given by its chart 1 coordinate zeta = 1/z.
inline double chordal_from_zeta(Complex zeta, Complex a) {
  return std::abs(1.0 - a * zeta) / std::sqrt((1.0 + std::norm(zeta)) * (1.0 + std::norm(a)));
}

}  // namespace detail

inline Scenario build_s4(const ScenarioConfig& cfg) {
  const double nr = cfg.n_radius.value_or(0.45), npr = cfg.nprime_radius.value_or(0.1);
  detail::require_radii(nr, npr);
  if (nr > 0.45) throw Error(ErrorKind::ParameterInfeasible, "S4 needs n_radius ≤ 0.45");
  SmoothingParams p;
  p.eps = 0.02;
  p.delta = 0.003;
  p.eta = 0.001;
  p.quad_order = 8;
  p.h = 0.01;
  detail::apply(p, cfg);
  validate_static(p);

  constexpr double kPatch = 2.0, kBeta = 0.5;
  const Complex z0 = 0.05, zeta1 = 0.05, z1 = 1.0 / zeta1;
  const Domain patch = Domain::disk(0.0, kPatch);
  auto inv = [](std::size_t from, std::size_t to, const ComplexPoint& x) -> std::optional<ComplexPoint> {
    if (from == to) return x;
    if (x[0] == Complex(0.0, 0.0)) return std::nullopt;
    return ComplexPoint{1.0 / x[0]};
  };
  const Atlas atlas(1, {Chart{"z", patch}, Chart{"zeta", patch}}, inv);
  const Domain valid = Domain::disk(0.0, kPatch + 0.5);
  ScalarField f0(
      [=](const ComplexPoint& x) {
        return std::log1p(std::norm(x[0])) + kBeta * (detail::chordal(x[0], z0) + detail::chordal(x[0], z1));
      },
      valid, std::nullopt, "FS+kinks");
  ScalarField f1(
      [=](const ComplexPoint& x) {
        return std::log1p(std::norm(x[0])) +
               kBeta * (detail::chordal_from_zeta(x[0], z0) + detail::chordal_from_zeta(x[0], z1));
      },
      valid, std::nullopt, "FS+kinks'");
  const CoverSpec cover = CoverSpec::identity(atlas);
  const auto r = detail::triple_radii(nr, npr);
  const ChartSet N{"N", {Domain::disk(z0, nr), Domain::disk(zeta1, nr)}};
  const ChartSet Np{"N'", {Domain::disk(z0, npr), Domain::disk(zeta1, npr)}};
  Scenario s{"S4",
             "identity cover of P1: Fubini-Study plus conical kinks at z = 0.05 and zeta = 0.05",
             cover,
             KahlerCocycle(atlas, {f0, f1}),
             N,
             Np,
             nr,
             npr,
             {RefinementTriple{0, Domain::disk(z0, r.inner), Domain::disk(z0, r.middle), Domain::disk(z0, r.outer),
                               "kink z", {}},
              RefinementTriple{1, Domain::disk(zeta1, r.inner), Domain::disk(zeta1, r.middle),
                               Domain::disk(zeta1, r.outer), "kink zeta", {}}},
             p,
             {}};
  s.pipeline.positivity_samples = 1500;
  s.positivity = {NodePlan{"chart z", 0, [](double h) { return sample_grid(Domain::disk(0.0, 1.2), h).nodes; }},
                  NodePlan{"chart zeta", 1, [](double h) { return sample_grid(Domain::disk(0.0, 1.2), h).nodes; }}};
  s.c2_line = LinePlan{0, ComplexPoint{z0}, ComplexPoint{1.0}, npr};
  s.c2_h = 0.02;
  Curve sphere{"P1", {}};
  sphere.patches.push_back(CurvePatch{0, [](Complex t) { return ComplexPoint{t}; }, 0.0, 1.0, {}});
  sphere.patches.push_back(CurvePatch{1, [](Complex t) { return ComplexPoint{t}; }, 0.0, 1.0, {}});
  s.curve = sphere;
  s.curve_quad_order = 8;
  s.curve_oracle = 4.0 * kPi;  // the kink terms are global functions and carry no mass
  s.overlap_samples = 200;
  return s;
}

// ---------------------------------------------------------------- registry

inline const std::vector<std::string>& scenario_ids() {
  static const std::vector<std::string> ids{"S1", "S2", "S3", "S4"};
  return ids;
}

inline Scenario build_scenario(const std::string& id, const ScenarioConfig& cfg = {}) {
  if (id == "S1") return build_s1(cfg);
  if (id == "S2") return build_s2(cfg);
  if (id == "S3") return build_s3(cfg);
  if (id == "S4") return build_s4(cfg);
  throw Error(ErrorKind::UnknownScenario, "unknown scenario '" + id + "' (known: S1 S2 S3 S4)");
}

inline nlohmann::json scenario_defaults(const Scenario& s) {
  return {{"id", s.id},
          {"summary", s.summary},
          {"cover", s.cover.describe()},
          {"charts", s.cover.downstairs().size()},
          {"n_radius", s.n_radius},
          {"nprime_radius", s.nprime_radius},
          {"h", s.params.h},
          {"eps", s.params.eps},
          {"eta", s.params.eta},
          {"delta", s.params.delta},
          {"quad_order", s.params.quad_order},
          {"triples", s.refinement.size()}};
}

// ---------------------------------------------------------------- checks

namespace detail {

inline std::string chart_suffix(const Scenario& s, std::size_t i) {
  return s.cover.downstairs().size() > 1 ? "[" + s.cover.downstairs().chart(i).name + "]" : "";
}

inline ScalarField on_line(const ScalarField& f, const LinePlan& l, double pad) {
  return restrict_to_line(f, l.origin, l.dir, l.radius + pad);
}

inline nlohmann::json environment(const Scenario& s) {
  return {{"h", s.params.h},
          {"h_fine", 0.5 * s.params.h},
          {"c2_h", s.c2_h},
          {"mass_h", s.mass_h},
          {"overlap_h", s.overlap_h},
          {"sample_seed", kSampleSeed},
          {"root_cluster_tolerance", kRootClusterTolerance},
          {"bump_normalization", kBumpNormalization},
          {"reg_max_at_origin", kRegMaxAtOrigin},
          {"mollify_order", s.params.quad_order},
          {"curve_quad_order", s.curve ? s.curve_quad_order : 0}};
}

}  // namespace detail

/// Runs the pipeline and the check list. Pipeline errors are embedded in
/// the report (pass = false) instead of being thrown.
/// Runs the scenario and every check. When `fields` is given it receives
/// the raw and smoothed cocycles (left empty if the pipeline failed).
inline VerificationReport run_scenario(const Scenario& s, std::optional<SmoothedPushforward>* fields = nullptr) {
  VerificationReport rep;
  rep.scenario = s.id;
  rep.params = {{"n_radius", s.n_radius}, {"nprime_radius", s.nprime_radius}, {"smoothing", s.params.to_json()}};
  rep.env = detail::environment(s);
  try {
    const std::size_t nc = s.upstairs.size();

    // The input must be a Kahler cocycle before any smoothing.
    for (std::size_t i = 0; i < nc; ++i) {
      const ScalarField& f = s.upstairs.potential(i);
      auto pts = low_discrepancy_sample(f.valid_on().shrunk(0.05), 400);
      rep.add(Check::make("upstairs_margin" + detail::chart_suffix(s, i),
                          min_levi_eigenvalue(f, pts, 1e-3).min_eigenvalue, ">", 0.0));
    }

    SmoothedPushforward out =
        smooth_pushforward(s.cover, s.upstairs, s.N, s.Nprime, s.refinement, s.params, s.pipeline);
    for (auto& c : out.report.checks) rep.add(c);
    rep.params["steps"] = out.report.params["steps"];
    if (fields) *fields = out;

    // Positivity on the scenario's planes, at h and h/2.
    for (const auto& plan : s.positivity)
      for (double h : {s.params.h, 0.5 * s.params.h}) {
        const PshReport pr = min_levi_eigenvalue(out.smoothed.potential(plan.chart), plan.nodes(h), h);
        rep.add(Check::make("positivity_grid[" + plan.name + "]@h=" + detail::fmt(h), pr.min_eigenvalue, ">", 0.0,
                            std::to_string(pr.nodes) + " nodes"));
      }

    // C^2 proxy on N': smoothed field bounded under refinement, raw field not.
    {
      const LinePlan& l = s.c2_line;
      const ScalarField sm = detail::on_line(out.smoothed.potential(l.chart), l, 2.0 * s.c2_h);
      const ScalarField rw = detail::on_line(out.raw.potential(l.chart), l, 2.0 * s.c2_h);
      const Domain d = Domain::disk(0.0, l.radius);
      const auto coarse = sample_grid(d, s.c2_h).nodes, fine = sample_grid(d, 0.5 * s.c2_h).nodes;
      const RefinementRatio a = laplacian_refinement_ratio(sm, coarse, fine, s.c2_h);
      const RefinementRatio b = laplacian_refinement_ratio(rw, coarse, fine, s.c2_h);
      rep.add(Check::make("c2_ratio_smoothed", a.ratio, "<=", 1.5,
                          "sup " + detail::fmt(a.sup_coarse) + " -> " + detail::fmt(a.sup_fine)));
      rep.add(Check::make("c2_ratio_raw_kink", b.ratio, ">=", 1.9,
                          "sup " + detail::fmt(b.sup_coarse) + " -> " + detail::fmt(b.sup_fine)));
    }

    if (s.mass_line) {
      const LinePlan& l = *s.mass_line;
      const Domain d = Domain::disk(0.0, l.radius);
      const double before = mass_integral(detail::on_line(out.raw.potential(l.chart), l, 2.0 * s.mass_h), d, s.mass_h);
      const double after =
          mass_integral(detail::on_line(out.smoothed.potential(l.chart), l, 2.0 * s.mass_h), d, s.mass_h);
      rep.add(Check::make("mass_before_after", std::abs(after - before) / std::abs(before), "<=", 0.01,
                          "before=" + detail::fmt(before) + " after=" + detail::fmt(after)));
      if (s.mass_oracle)
        rep.add(Check::make("mass_oracle", std::abs(after - *s.mass_oracle) / *s.mass_oracle, "<=", 0.01,
                            "after=" + detail::fmt(after) + " oracle=" + detail::fmt(*s.mass_oracle)));
    }

    if (s.curve) {
      const double before = curve_mass(out.raw, *s.curve, s.curve_quad_order);
      const double after = curve_mass(out.smoothed, *s.curve, s.curve_quad_order);
      rep.add(Check::make("curve_mass_before_after", std::abs(after - before) / std::abs(before), "<=", s.curve_tol,
                          "before=" + detail::fmt(before) + " after=" + detail::fmt(after)));
      if (s.curve_oracle)
        rep.add(Check::make("curve_mass_oracle", std::abs(after - *s.curve_oracle) / *s.curve_oracle, "<=",
                            s.curve_tol, "after=" + detail::fmt(after) + " oracle=" + detail::fmt(*s.curve_oracle)));
    }

    // Adding one global chi leaves the overlap differences unchanged.
    if (nc > 1) {
      double worst = 0.0, dev_raw = 0.0;
      for (std::size_t i = 0; i < nc; ++i)
        for (std::size_t j = 0; j < nc; ++j) {
          if (i == j) continue;
          const Domain o = overlap_domain(out.raw.atlas(), i, j).shrunk(2.0 * s.overlap_h);
          auto pts = low_discrepancy_sample(o, s.overlap_samples, 4000 * s.overlap_samples);
          if (pts.empty()) continue;
          const auto a = check_pluriharmonic(out.raw.overlap_difference(i, j), pts, s.overlap_h, 0.0);
          const auto b = check_pluriharmonic(out.smoothed.overlap_difference(i, j), pts, s.overlap_h, 0.0);
          worst = std::max(worst, std::abs(a.deviation - b.deviation));
          dev_raw = std::max(dev_raw, a.deviation);
        }
      rep.add(Check::make("overlap_deviation_change", worst, "<=", 1e-8, "input deviation " + detail::fmt(dev_raw)));
    }

    // Every chi_n vanishes exactly off its declared support, in its chart.
    {
      double worst = 0.0;
      for (const auto& st : out.correction.steps) {
        const Domain off = Domain::minus(s.cover.base(st.chart), st.support);
        for (const auto& x : low_discrepancy_sample(off, s.support_samples, 400 * s.support_samples))
          worst = std::max(worst, std::abs(st.chi[st.chart](x)));
      }
      rep.add(Check::make("chi_support", worst, "==", 0.0));
    }

    // Domination: the regularized max never drops below its first argument.
    {
      double worst = 0.0;
      for (std::size_t i = 0; i < nc; ++i) {
        const Domain zone = Domain::intersection(s.cover.base(i), s.N.in_chart[i]);
        for (const auto& x : low_discrepancy_sample(zone, 400, 400 * 400))
          worst = std::max(worst, out.raw.potential(i)(x) - out.smoothed.potential(i)(x));
      }
      rep.add(Check::make("domination", worst, "<=", 1e-12));
    }
  } catch (const Error& e) {
    rep.error = std::string(to_string(e.kind())) + ": " + e.what();
  }
  return rep;
}

}  // namespace kahler
