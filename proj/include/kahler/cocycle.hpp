// Kahler cocycles: chart potentials whose differences are pluriharmonic,
// their checks, and the dd^c mass of holomorphic curves.
#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kahler/atlas.hpp"
#include "kahler/levi.hpp"
#include "kahler/quadrature.hpp"

namespace kahler {

/// The part of chart i that chart j also sees, in chart i coordinates.
inline Domain overlap_domain(const Atlas& atlas, std::size_t i, std::size_t j) {
  const Domain& pi = atlas.chart(i).patch;
  if (i == j) return pi;
  const Domain pj = atlas.chart(j).patch;
  return Domain::region(atlas.dim(), atlas.chart(i).name + "∩" + atlas.chart(j).name, pi.center(), pi.bbox(),
                        [atlas, i, j, pi, pj](const ComplexPoint& x) {
                          const double a = pi.margin(x);
                          auto y = atlas.map(i, j, x);
                          if (!y) return std::min(a, -1.0);
                          return std::min(a, pj.margin(*y));
                        });
}

/// Pulls a domain of chart `from` into chart `to` coordinates.
inline Domain transport_domain(const Atlas& atlas, const Domain& d, std::size_t from, std::size_t to,
                               const Box& to_box) {
  if (from == to) return d;
  return Domain::region(atlas.dim(), "transported(" + d.describe() + ")", atlas.chart(to).patch.center(), to_box,
                        [atlas, d, from, to](const ComplexPoint& x) {
                          auto y = atlas.map(to, from, x);
                          if (!y) return -1.0;
                          return d.margin(*y);
                        });
}

/// f given in chart `from`, read in chart `to` coordinates.
inline ScalarField transport_field(const Atlas& atlas, const ScalarField& f, std::size_t from, std::size_t to,
                                   const Box& to_box) {
  if (from == to) return f;
  Domain valid = transport_domain(atlas, f.valid_on(), from, to, to_box);
  std::optional<Domain> smooth;
  if (f.smooth_on()) smooth = transport_domain(atlas, *f.smooth_on(), from, to, to_box);
  return ScalarField(
      [atlas, f, from, to](const ComplexPoint& x) {
        auto y = atlas.map(to, from, x);
        if (!y) throw Error(ErrorKind::OutOfDomain, "no chart transition at " + x.str());
        return f(*y);
      },
      std::move(valid), std::move(smooth), f.label() + "@" + atlas.chart(to).name);
}

/// (U_i, phi_i): each phi_i strictly psh, phi_i - phi_j pluriharmonic on U_i ∩ U_j.
class KahlerCocycle {
 public:
  KahlerCocycle(Atlas atlas, std::vector<ScalarField> potentials)
      : atlas_(std::move(atlas)), potentials_(std::move(potentials)) {
    if (potentials_.size() != atlas_.size())
      throw Error(ErrorKind::InvalidArgument, "one potential per chart is required");
    for (const auto& p : potentials_)
      if (p.dim() != atlas_.dim()) throw Error(ErrorKind::InvalidArgument, "potential dimension mismatch");
  }

  const Atlas& atlas() const noexcept { return atlas_; }
  std::size_t size() const noexcept { return potentials_.size(); }
  const ScalarField& potential(std::size_t i) const { return potentials_.at(i); }
  const std::vector<ScalarField>& potentials() const noexcept { return potentials_; }

  KahlerCocycle with_potentials(std::vector<ScalarField> p) const { return KahlerCocycle(atlas_, std::move(p)); }

  /// phi_i - phi_j, on chart i.
  ScalarField overlap_difference(std::size_t i, std::size_t j) const {
    const Box& box = potentials_.at(i).valid_on().bbox();
    return potentials_.at(i) - transport_field(atlas_, potentials_.at(j), j, i, box);
  }

  /// Charts whose patches meet, detected on low-discrepancy samples of each patch.
  std::vector<std::pair<std::size_t, std::size_t>> overlap_graph(std::size_t samples = 2000) const {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < size(); ++i) {
      for (std::size_t j = i + 1; j < size(); ++j) {
        const Domain o = overlap_domain(atlas_, i, j);
        if (!low_discrepancy_sample(o, 1, samples).empty()) edges.emplace_back(i, j);
      }
    }
    return edges;
  }

 private:
  Atlas atlas_;
  std::vector<ScalarField> potentials_;
};

/// Minimum grid Levi margin of every chart potential and the maximum
/// pluriharmonic deviation of every overlap difference.
struct CocycleCheck {
  std::vector<PshReport> chart_margins;
  double min_margin = std::numeric_limits<double>::infinity();
  double max_overlap_deviation = 0.0;
  bool pass(double overlap_tol) const { return min_margin > 0.0 && max_overlap_deviation <= overlap_tol; }
};

/// chart_nodes[i]: verification nodes in chart i; overlap_nodes[i][j]:
/// nodes of U_i ∩ U_j in chart i (empty to skip).
inline CocycleCheck check_cocycle(const KahlerCocycle& c, const std::vector<std::vector<ComplexPoint>>& chart_nodes,
                                  const std::vector<std::vector<std::vector<ComplexPoint>>>& overlap_nodes, double h) {
  CocycleCheck r;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i < chart_nodes.size() && !chart_nodes[i].empty()) {
      r.chart_margins.push_back(min_levi_eigenvalue(c.potential(i), chart_nodes[i], h));
      r.min_margin = std::min(r.min_margin, r.chart_margins.back().min_eigenvalue);
    }
    if (i >= overlap_nodes.size()) continue;
    for (std::size_t j = 0; j < c.size() && j < overlap_nodes[i].size(); ++j) {
      if (i == j || overlap_nodes[i][j].empty()) continue;
      auto pc = check_pluriharmonic(c.overlap_difference(i, j), overlap_nodes[i][j], h, 0.0);
      r.max_overlap_deviation = std::max(r.max_overlap_deviation, pc.deviation);
    }
  }
  return r;
}

/// One piece of a holomorphic curve: a parameter disk (or rectangle) mapped
/// holomorphically into the coordinates of one chart.
struct CurvePatch {
  std::size_t chart = 0;
  std::function<ComplexPoint(Complex)> map;
  Complex center{0.0, 0.0};
  double radius = 1.0;                     // disk patch
  std::optional<std::array<double, 4>> rect;  // (re_lo, re_hi, im_lo, im_hi) instead of a disk
};

struct Curve {
  std::string label;
  std::vector<CurvePatch> patches;
};

struct CurveMassOptions {
  double fd_h = 1e-3;     // largest finite-difference spacing in the parameter plane
  int radial_panels = 16;  // geometric panels toward each disk center, ratio 1/2
  int angular_nodes = 96;
  int rect_panels = 8;
};

namespace detail {

// phi o gamma near t, in whichever chart sees gamma(t): the designated chart
// when it contains the point, otherwise the first chart that does.
inline double pulled_back(const KahlerCocycle& c, const CurvePatch& patch, Complex t) {
  const ComplexPoint x = patch.map(t);
  if (c.atlas().chart(patch.chart).patch.contains(x)) return c.potential(patch.chart)(x);
  auto loc = c.atlas().locate(patch.chart, x);
  if (!loc) throw Error(ErrorKind::Coverage, "curve point " + x.str() + " lies in no chart");
  return c.potential(loc->first)(loc->second);
}

// Five-point Laplacian of phi o gamma in the parameter plane. All stencil
// points are read in the chart that sees the center.
inline double pulled_back_laplacian(const KahlerCocycle& c, const CurvePatch& patch, Complex t, double h) {
  const ComplexPoint x = patch.map(t);
  std::size_t chart = patch.chart;
  std::function<double(Complex)> f;
  if (c.atlas().chart(chart).patch.contains(x)) {
    f = [&](Complex s) { return c.potential(chart)(patch.map(s)); };
  } else {
    auto loc = c.atlas().locate(patch.chart, x);
    if (!loc) throw Error(ErrorKind::Coverage, "curve point " + x.str() + " lies in no chart");
    const std::size_t to = loc->first;
    f = [&, to](Complex s) {
      auto y = c.atlas().map(patch.chart, to, patch.map(s));
      if (!y) throw Error(ErrorKind::Coverage, "curve stencil leaves chart overlap");
      return c.potential(to)(*y);
    };
  }
  const double f0 = f(t);
  return (f(t + h) + f(t - h) + f(t + Complex(0, h)) + f(t - Complex(0, h)) - 4.0 * f0) / (h * h);
}

}  // namespace detail

/// Integral of dd^c phi over a holomorphic curve, i.e. the sum over patches
/// of the parameter-plane integral of the Laplacian of phi o gamma.
///
/// Disk patches use polar coordinates about the patch center: composite
/// Gauss-Legendre panels in r, graded geometrically toward the center, and
/// the periodic trapezoid rule in angle. The finite-difference spacing
/// shrinks with r (clamp(r/10, 1e-5, fd_h)), so a conical point placed at a
/// patch center is integrated correctly. Rectangle patches use a tensor
/// grid of GL panels.
inline double curve_mass(const KahlerCocycle& c, const Curve& curve, int quad_order,
                         const CurveMassOptions& opt = {}) {
  const QuadratureRule q = gauss_legendre(quad_order);
  double total = 0.0;
  for (const auto& patch : curve.patches) {
    if (patch.chart >= c.size()) throw Error(ErrorKind::InvalidArgument, "curve patch chart out of range");
    double sum = 0.0;
    if (patch.rect) {
      const auto [a0, a1, b0, b1] = *patch.rect;
      if (!(a1 > a0) || !(b1 > b0)) continue;  // zero-area rectangle
      const int m = opt.rect_panels;
      const double da = (a1 - a0) / m, db = (b1 - b0) / m;
      for (int pa = 0; pa < m; ++pa)
        for (int pb = 0; pb < m; ++pb)
          for (std::size_t i = 0; i < q.nodes.size(); ++i)
            for (std::size_t j = 0; j < q.nodes.size(); ++j) {
              const Complex t(a0 + da * (pa + 0.5 * (1 + q.nodes[i])), b0 + db * (pb + 0.5 * (1 + q.nodes[j])));
              sum += 0.25 * da * db * q.weights[i] * q.weights[j] *
                     detail::pulled_back_laplacian(c, patch, t, opt.fd_h);
            }
    } else {
      if (!(patch.radius > 0.0)) continue;
      std::vector<double> edges{0.0};
      for (int k = opt.radial_panels - 1; k >= 0; --k) edges.push_back(patch.radius * std::ldexp(1.0, -k));
      const int nt = opt.angular_nodes;
      const double dt = 2.0 * kPi / nt;
      for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
        const double r0 = edges[e], r1 = edges[e + 1];
        for (std::size_t i = 0; i < q.nodes.size(); ++i) {
          const double r = r0 + 0.5 * (r1 - r0) * (1.0 + q.nodes[i]);
          const double w = 0.5 * (r1 - r0) * q.weights[i] * r * dt;
          const double h = std::clamp(0.1 * r, 1e-5, opt.fd_h);
          for (int j = 0; j < nt; ++j) {
            const Complex t = patch.center + std::polar(r, (j + 0.5) * dt);
            sum += w * detail::pulled_back_laplacian(c, patch, t, h);
          }
        }
      }
    }
    total += sum;
  }
  return total;
}

}  // namespace kahler
