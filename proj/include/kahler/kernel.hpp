// The bump kernel, the smoothstep built from it, and the regularized maximum.
#pragma once

#include <cmath>
#include <limits>

#include "kahler/field.hpp"
#include "kahler/grid.hpp"
#include "kahler/quadrature.hpp"

namespace kahler {

/// 1 / integral of exp(-1/(1-t^2)) over (-1, 1).
inline constexpr double kBumpNormalization = 2.25228362104358;

/// M_1(0, 0), the regularized max of two zeros at unit width.
inline constexpr double kRegMaxAtOrigin = 0.228735979903536;

inline double bump_profile(double t) noexcept {
  const double s = 1.0 - t * t;
  if (s <= 0.0) return 0.0;
  return std::exp(-1.0 / s);
}

/// Even, smooth bump theta on (-1, 1) with unit integral; all derivatives
/// vanish at the endpoints.
class RegMaxKernel {
 public:
  explicit RegMaxKernel(int outer_order = 64, int inner_order = 48)
      : outer_(gauss_legendre(outer_order)), inner_(gauss_legendre(inner_order)) {
    const QuadratureRule q = gauss_legendre(160);
    double s = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) s += q.weights[i] * bump_profile(q.nodes[i]);
    normalization_ = 1.0 / s;
    outer_theta_.resize(outer_.nodes.size());
    for (std::size_t i = 0; i < outer_.nodes.size(); ++i) outer_theta_[i] = theta(outer_.nodes[i]);
  }

  double normalization() const noexcept { return normalization_; }
  double theta(double t) const noexcept { return normalization_ * bump_profile(t); }

  /// F0(k) = int_{-1}^k theta, F1(k) = int_{-1}^k a theta(a) da.
  void partial_moments(double k, double& f0, double& f1) const noexcept {
    f0 = f1 = 0.0;
    if (k <= -1.0) return;
    if (k >= 1.0) {
      f0 = 1.0;
      return;
    }
    const double c = 0.5 * (k - 1.0), r = 0.5 * (k + 1.0);
    for (std::size_t i = 0; i < inner_.nodes.size(); ++i) {
      const double a = c + r * inner_.nodes[i];
      const double w = r * inner_.weights[i] * theta(a);
      f0 += w;
      f1 += w * a;
    }
  }

  /// Smoothstep S(x) = int_{-1}^{2x-1} theta: 0 for x <= 0, 1 for x >= 1,
  /// C^infinity, S(x) + S(1-x) = 1 up to one rounding.
  double smoothstep(double x) const noexcept {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    if (x == 0.5) return 0.5;
    if (x > 0.5) return 1.0 - smoothstep(1.0 - x);
    double f0, f1;
    partial_moments(2.0 * x - 1.0, f0, f1);
    return f0;
  }

  /// A(y) = E|y + a - b| for a, b independent with density theta; A(y) = |y|
  /// for |y| >= 2. The inner integral is split at its kink a = b - y.
  double abs_mean(double y) const noexcept {
    y = std::abs(y);
    if (y >= 2.0) return y;
    double s = 0.0;
    for (std::size_t i = 0; i < outer_.nodes.size(); ++i) {
      const double b = outer_.nodes[i];
      double f0, f1;
      partial_moments(b - y, f0, f1);
      // int |y + a - b| theta(a) da = (b - y)(2 F0 - 1) - 2 F1.
      s += outer_.weights[i] * outer_theta_[i] * ((b - y) * (2.0 * f0 - 1.0) - 2.0 * f1);
    }
    return std::max(s, y);
  }

 private:
  QuadratureRule outer_, inner_;
  std::vector<double> outer_theta_;
  double normalization_ = kBumpNormalization;
};

inline const RegMaxKernel& default_kernel() {
  static const RegMaxKernel k;
  return k;
}

/// M_eta(t1, t2) = E max(t1 + eta a, t2 + eta b) = (t1 + t2)/2 + eta A(|t1 - t2| / eta) / 2.
/// Returns max(t1, t2) itself whenever |t1 - t2| >= 2 eta.
inline double reg_max_scalar(double t1, double t2, double eta, const RegMaxKernel& k = default_kernel()) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw Error(ErrorKind::InvalidArgument, "eta must be positive and finite");
  const double d = t1 - t2;
  if (std::abs(d) >= 2.0 * eta) return std::max(t1, t2);
  return 0.5 * (t1 + t2) + 0.5 * eta * k.abs_mean(d / eta);
}

namespace detail {

inline double smooth_margin(const ScalarField& f, const ComplexPoint& p) {
  return f.smooth_on() ? f.smooth_on()->margin(p) : -std::numeric_limits<double>::infinity();
}

inline void require_overlap(const Domain& a, const Domain& b) {
  Domain both = Domain::intersection(a, b);
  if (both.bbox().empty()) throw Error(ErrorKind::DisjointDomains, "field domains do not overlap");
  if (both.contains(a.center()) || both.contains(b.center()) || both.contains(both.center())) return;
  if (both.bbox().bounded() && !low_discrepancy_sample(both, 1, 50000).empty()) return;
  throw Error(ErrorKind::DisjointDomains, "field domains do not overlap");
}

}  // namespace detail

/// Pointwise M_eta(u, v) on the common domain. smooth_on covers the points
/// where both inputs are smooth, or where one input exceeds the other by at
/// least 2 eta and is itself smooth there.
inline ScalarField reg_max_fields(const ScalarField& u, const ScalarField& v, double eta,
                                  const RegMaxKernel& k = default_kernel()) {
  if (!(eta > 0.0)) throw Error(ErrorKind::InvalidArgument, "eta must be positive");
  if (u.dim() != v.dim()) throw Error(ErrorKind::InvalidArgument, "reg_max_fields: dimension mismatch");
  detail::require_overlap(u.valid_on(), v.valid_on());
  const Domain valid = Domain::intersection(u.valid_on(), v.valid_on());
  const Domain smooth = Domain::region(
      u.dim(), "reg-max smooth set", valid.center(), valid.bbox(), [u, v, eta, valid](const ComplexPoint& p) {
        if (!valid.contains(p)) return valid.margin(p);
        const double su = detail::smooth_margin(u, p), sv = detail::smooth_margin(v, p);
        const double a = u(p), b = v(p);
        return std::max({std::min(su, sv), std::min(a - b - 2.0 * eta, su), std::min(b - a - 2.0 * eta, sv)});
      });
  return ScalarField([u, v, eta, k](const ComplexPoint& p) { return reg_max_scalar(u(p), v(p), eta, k); },
                     valid, smooth, "regmax(" + u.label() + "," + v.label() + ")");
}

}  // namespace kahler
