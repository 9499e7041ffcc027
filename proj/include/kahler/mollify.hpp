// Convolution with the radial bump by tensor Gauss-Legendre quadrature.
#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "kahler/field.hpp"
#include "kahler/kernel.hpp"

namespace kahler {

inline constexpr int kDefaultMollifyOrder = 8;

/// Nodes y of the unit ball in R^{2n} with weights proportional to
/// (tensor GL weight) * exp(-1/(1-|y|^2)), normalized to unit sum. The node set is symmetric under y -> -y, so odd
/// moments vanish and harmonic polynomials of degree <= 2 are reproduced.
struct BallRule {
  std::size_t n = 1;
  std::vector<ComplexPoint> nodes;
  std::vector<double> weights;

  BallRule(std::size_t dim, int order) : n(dim) {
    if (dim == 0 || dim > kMaxDim) throw Error(ErrorKind::UnsupportedDimension, "mollifier dimension out of range");
    if (order < 2) throw Error(ErrorKind::InvalidArgument, "mollifier quadrature order must be >= 2");
    const QuadratureRule q = gauss_legendre(order);
    const std::size_t rd = 2 * dim;
    std::vector<std::size_t> idx(rd, 0);
    double total = 0.0;
    while (true) {
      double r2 = 0.0, w = 1.0;
      ComplexPoint y(dim);
      for (std::size_t k = 0; k < rd; ++k) {
        const double t = q.nodes[idx[k]];
        r2 += t * t;
        w *= q.weights[idx[k]];
        y.set_real_coord(k, t);
      }
      if (r2 < 1.0) {
        w *= bump_profile(std::sqrt(r2));
        nodes.push_back(y);
        weights.push_back(w);
        total += w;
      }
      std::size_t k = 0;
      while (k < rd && ++idx[k] == q.nodes.size()) {
        idx[k] = 0;
        ++k;
      }
      if (k == rd) break;
    }
    for (auto& w : weights) w /= total;
  }

  /// Sum of w_i |y_i|^p, the kernel moment of order p (in units of eps^p).
  double moment(double p) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * std::pow(nodes[i].norm(), p);
    return s;
  }
};

/// f_eps(x) = sum_i w_i f(x + eps y_i). Valid on f.valid_on shrunk by eps;
/// declared smooth on all of it.
inline ScalarField mollify(const ScalarField& f, double eps, int quad_order = kDefaultMollifyOrder) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
  auto rule = std::make_shared<const BallRule>(f.dim(), quad_order);
  Domain valid = f.valid_on().shrunk(eps);
  const Box& b = valid.bbox();
  if (b.empty()) throw Error(ErrorKind::InvalidArgument, "eps too large for the domain of " + f.label());
  if (b.bounded() && !valid.contains(valid.center()) && low_discrepancy_sample(valid, 1, 20000).empty())
    throw Error(ErrorKind::InvalidArgument, "eps too large for the domain of " + f.label());
  return ScalarField(
      [f, eps, rule](const ComplexPoint& x) {
        double s = 0.0;
        const std::size_t n = x.dim();
        for (std::size_t i = 0; i < rule->nodes.size(); ++i) {
          ComplexPoint q = x;
          const ComplexPoint& y = rule->nodes[i];
          for (std::size_t j = 0; j < n; ++j) q[j] += eps * y[j];
          s += rule->weights[i] * f(q);
        }
        return s;
      },
      valid, valid, "moll(" + f.label() + ")");
}

/// sup |a - b| over sample points.
inline double sup_distance(const ScalarField& a, const ScalarField& b, const std::vector<ComplexPoint>& samples) {
  double s = 0.0;
  for (const auto& p : samples) s = std::max(s, std::abs(a(p) - b(p)));
  return s;
}

struct Mollification {
  ScalarField field;
  double tau = 0.0;            // sup |f_eps - f| on the samples
  double quadrature_gap = 0.0;  // sup |order q - order q+4| on a subsample
};

/// mollify() plus the recorded sup-distance bound and a quadrature monitor
/// comparing the rule with one four orders higher.
inline Mollification mollify_with_bound(const ScalarField& f, double eps, int quad_order,
                                        const std::vector<ComplexPoint>& samples,
                                        std::size_t monitor_points = 16) {
  Mollification m{mollify(f, eps, quad_order)};
  m.tau = sup_distance(m.field, f, samples);
  if (monitor_points > 0 && !samples.empty()) {
    ScalarField hi = mollify(f, eps, quad_order + 4);
    const std::size_t stride = std::max<std::size_t>(1, samples.size() / monitor_points);
    for (std::size_t i = 0; i < samples.size(); i += stride)
      m.quadrature_gap = std::max(m.quadrature_gap, std::abs(m.field(samples[i]) - hi(samples[i])));
  }
  return m;
}

}  // namespace kahler
