// Branched covers: power maps, the Vieta map on ordered tuples and its
// projective version P1 x P1 -> P2. Fibers with multiplicities, pushforward
// of functions, and discriminants.
#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "kahler/atlas.hpp"
#include "kahler/field.hpp"

namespace kahler {

enum class CoverKind { Power, Vieta, ProjectiveVieta, Identity };

inline const char* to_string(CoverKind k) {
  switch (k) {
    case CoverKind::Power: return "power";
    case CoverKind::Vieta: return "vieta";
    case CoverKind::ProjectiveVieta: return "projective-vieta";
    case CoverKind::Identity: return "identity";
  }
  return "unknown";
}

struct FiberPoint {
  ComplexPoint x;
  int multiplicity = 1;
};

struct Fiber {
  std::vector<FiberPoint> points;

  int total_multiplicity() const noexcept {
    int s = 0;
    for (const auto& p : points) s += p.multiplicity;
    return s;
  }
};

/// Relative radius under which polynomial roots are merged into one point
/// of higher multiplicity: tol = kRootClusterTolerance * (1 + max |root|).
inline constexpr double kRootClusterTolerance = 1e-7;

namespace detail {

// Horner evaluation of the monic polynomial t^n + c[0] t^{n-1} + ... + c[n-1]
// and its derivative.
inline void horner(const std::vector<Complex>& c, Complex t, Complex& p, Complex& dp) {
  p = 1.0;
  dp = 0.0;
  for (const auto& ck : c) {
    dp = dp * t + p;
    p = p * t + ck;
  }
}

inline void newton_polish(const std::vector<Complex>& c, std::vector<Complex>& roots, int steps = 2) {
  for (auto& r : roots) {
    for (int s = 0; s < steps; ++s) {
      Complex p, dp;
      horner(c, r, p, dp);
      if (std::abs(dp) <= 1e-12 * (1.0 + std::abs(r))) break;  // (near-)multiple root
      const Complex next = r - p / dp;
      if (!std::isfinite(next.real()) || !std::isfinite(next.imag())) break;
      r = next;
    }
  }
}

// k-th derivative of the monic polynomial with lower coefficients c, at t.
inline Complex derivative_at(const std::vector<Complex>& c, Complex t, int k) {
  const int n = static_cast<int>(c.size());
  Complex acc = 0.0;
  for (int i = 0; i <= n - k; ++i) {
    // term a_i t^{n-i}, a_0 = 1
    const Complex a = (i == 0) ? Complex(1.0, 0.0) : c[static_cast<std::size_t>(i - 1)];
    double f = 1.0;
    for (int j = 0; j < k; ++j) f *= (n - i - j);
    acc = acc * t + a * f;
  }
  return acc;
}

struct RootCluster {
  Complex value;
  int count = 0;
};

inline std::vector<RootCluster> cluster_roots(const std::vector<Complex>& roots) {
  double scale = 0.0;
  for (const auto& r : roots) scale = std::max(scale, std::abs(r));
  const double tol = kRootClusterTolerance * (1.0 + scale);
  std::vector<RootCluster> cl;
  std::vector<Complex> sums;
  for (const auto& r : roots) {
    bool joined = false;
    for (std::size_t i = 0; i < cl.size(); ++i) {
      if (std::abs(r - cl[i].value) <= tol) {
        sums[i] += r;
        ++cl[i].count;
        cl[i].value = sums[i] / static_cast<double>(cl[i].count);
        joined = true;
        break;
      }
    }
    if (!joined) {
      cl.push_back({r, 1});
      sums.push_back(r);
    }
  }
  return cl;
}

// A root of multiplicity m is a simple root of the (m-1)-th derivative;
// two Newton steps there restore the accuracy the eigen-solver loses.
inline void polish_multiple(const std::vector<Complex>& c, std::vector<RootCluster>& cl) {
  for (auto& r : cl) {
    if (r.count < 2) continue;
    for (int s = 0; s < 2; ++s) {
      const Complex d = derivative_at(c, r.value, r.count);
      if (std::abs(d) == 0.0) break;
      const Complex next = r.value - derivative_at(c, r.value, r.count - 1) / d;
      if (!std::isfinite(next.real()) || !std::isfinite(next.imag())) break;
      r.value = next;
    }
  }
}

inline double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace detail

/// Roots of t^n - e1 t^{n-1} + e2 t^{n-2} - ... + (-1)^n en, polished by two
/// Newton steps. Closed form for n <= 2, companion eigenvalues otherwise.
inline std::vector<Complex> vieta_roots(const ComplexPoint& e) {
  const std::size_t n = e.dim();
  std::vector<Complex> c(n);
  for (std::size_t k = 0; k < n; ++k) c[k] = (k % 2 == 0 ? -1.0 : 1.0) * e[k];
  std::vector<Complex> roots;
  if (n == 1) {
    roots = {e[0]};
  } else if (n == 2) {
    const Complex s = e[0], p = e[1];
    const Complex sq = std::sqrt(s * s - 4.0 * p);
    const Complex q = 0.5 * (std::real(std::conj(s) * sq) >= 0.0 ? s + sq : s - sq);
    if (q == Complex(0.0, 0.0)) {
      roots = {0.5 * s, 0.5 * s};
    } else {
      roots = {q, p / q};
    }
  } else {
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) comp(0, static_cast<Eigen::Index>(k)) = -c[k];
    for (std::size_t k = 1; k < n; ++k) comp(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k - 1)) = 1.0;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::RootSolver, "companion eigenproblem did not converge");
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) roots.push_back(es.eigenvalues()(i));
  }
  detail::newton_polish(c, roots);
  for (const auto& r : roots)
    if (!std::isfinite(r.real()) || !std::isfinite(r.imag()))
      throw Error(ErrorKind::RootSolver, "non-finite root for " + e.str());
  return roots;
}

/// Elementary symmetric functions (e1, ..., en) of the coordinates.
inline ComplexPoint elementary_symmetric(const ComplexPoint& z) {
  const std::size_t n = z.dim();
  std::vector<Complex> e(n + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = i + 1; k >= 1; --k) e[k] += e[k - 1] * z[i];
  ComplexPoint out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = e[k + 1];
  return out;
}

/// A branched covering with explicit charts. Downstairs chart i is covered
/// by upstairs chart i; the downstairs patches are where fibers are solved.
/// The base (the manifold actually being smoothed) defaults to those patches
/// and may be set smaller, so pushed-forward potentials extend past it.
class CoverSpec {
 public:
  static CoverSpec power_map(int d, const Domain& down_patch, const Domain& up_patch) {
    if (d < 1) throw Error(ErrorKind::InvalidArgument, "power map degree must be >= 1");
    if (down_patch.dim() != 1 || up_patch.dim() != 1)
      throw Error(ErrorKind::UnsupportedDimension, "the power map lives on C");
    return CoverSpec(CoverKind::Power, d, d, Atlas::single("w", down_patch), Atlas::single("z", up_patch));
  }

  static CoverSpec vieta(const Domain& down_patch, const Domain& up_patch) {
    const int n = static_cast<int>(down_patch.dim());
    if (up_patch.dim() != down_patch.dim()) throw Error(ErrorKind::InvalidArgument, "Vieta map is equidimensional");
    return CoverSpec(CoverKind::Vieta, static_cast<int>(detail::factorial(n)), n, Atlas::single("e", down_patch),
                     Atlas::single("z", up_patch));
  }

  /// P1 x P1 -> P2 in the charts (s, p) <- (z1, z2) and (s', p') = (s/p, 1/p)
  /// <- (1/z1, 1/z2). The point [0:1:0] (the pair {0, infinity}) lies in
  /// neither chart.
  static CoverSpec projective_vieta(double down_radius, double up_radius) {
    const Domain dp = Domain::polydisk(ComplexPoint{0.0, 0.0}, {down_radius, down_radius});
    const Domain up = Domain::polydisk(ComplexPoint{0.0, 0.0}, {up_radius, up_radius});
    auto inv_sp = [](std::size_t from, std::size_t to, const ComplexPoint& x) -> std::optional<ComplexPoint> {
      if (from == to) return x;
      if (x[1] == Complex(0.0, 0.0)) return std::nullopt;
      return ComplexPoint{x[0] / x[1], 1.0 / x[1]};
    };
    auto inv_zz = [](std::size_t from, std::size_t to, const ComplexPoint& x) -> std::optional<ComplexPoint> {
      if (from == to) return x;
      if (x[0] == Complex(0.0, 0.0) || x[1] == Complex(0.0, 0.0)) return std::nullopt;
      return ComplexPoint{1.0 / x[0], 1.0 / x[1]};
    };
    Atlas down(2, {Chart{"sp", dp}, Chart{"sp'", dp}}, inv_sp);
    Atlas upst(2, {Chart{"zz", up}, Chart{"zeta zeta", up}}, inv_zz);
    return CoverSpec(CoverKind::ProjectiveVieta, 2, 2, std::move(down), std::move(upst));
  }

  /// The identity of a charted manifold (pure gluing, no branch locus).
  static CoverSpec identity(const Atlas& atlas) {
    return CoverSpec(CoverKind::Identity, 1, static_cast<int>(atlas.dim()), atlas, atlas);
  }

  CoverSpec with_base(std::vector<Domain> base) const {
    if (base.size() != downstairs_.size()) throw Error(ErrorKind::InvalidArgument, "one base domain per chart");
    for (const auto& b : base)
      if (b.dim() != dim()) throw Error(ErrorKind::InvalidArgument, "base dimension mismatch");
    CoverSpec c = *this;
    c.base_ = std::move(base);
    return c;
  }

  const Domain& base(std::size_t chart) const { return base_.at(chart); }
  Atlas base_atlas() const { return downstairs_.with_patches(base_); }

  CoverKind kind() const noexcept { return kind_; }
  int degree() const noexcept { return degree_; }
  std::size_t dim() const noexcept { return downstairs_.dim(); }
  const Atlas& upstairs() const noexcept { return up_; }
  const Atlas& downstairs() const noexcept { return downstairs_; }

  std::string describe() const {
    std::string s = to_string(kind_);
    if (kind_ == CoverKind::Power) s += " d=" + std::to_string(power_);
    if (kind_ == CoverKind::Vieta) s += " n=" + std::to_string(dim());
    return s;
  }

  /// pi(x) for x in upstairs chart `chart`, in downstairs chart `chart`.
  ComplexPoint apply(std::size_t chart, const ComplexPoint& x) const {
    check_chart(chart);
    switch (kind_) {
      case CoverKind::Power: {
        Complex w = 1.0;
        for (int i = 0; i < power_; ++i) w *= x[0];
        return ComplexPoint{w};
      }
      case CoverKind::Vieta:
      case CoverKind::ProjectiveVieta: return elementary_symmetric(x);
      case CoverKind::Identity: return x;
    }
    return x;
  }

  Fiber fiber(std::size_t chart, const ComplexPoint& b) const {
    check_chart(chart);
    if (b.dim() != dim() || !downstairs_.chart(chart).patch.contains(b))
      throw Error(ErrorKind::OutOfDomain, "base point " + b.str() + " outside chart " + downstairs_.chart(chart).name);
    Fiber f;
    switch (kind_) {
      case CoverKind::Identity: f.points.push_back({b, 1}); break;
      case CoverKind::Power: f = power_fiber(b[0]); break;
      case CoverKind::Vieta:
      case CoverKind::ProjectiveVieta: f = vieta_fiber(b); break;
    }
    return f;
  }

  /// |discriminant| of the fiber polynomial: |w| for the power map,
  /// |s^2 - 4p| for the Vieta map with n = 2 (the discriminant of the
  /// polynomial in general), and |s^2 - 4p| / (1 + |s|^2 + |p|^2) for the
  /// projective case, which is the same in both charts. Zero exactly on the
  /// branch locus.
  double discriminant(std::size_t chart, const ComplexPoint& b) const {
    check_chart(chart);
    switch (kind_) {
      case CoverKind::Identity: return 1.0;
      case CoverKind::Power: return std::abs(b[0]);
      case CoverKind::ProjectiveVieta:
        return std::abs(b[0] * b[0] - 4.0 * b[1]) / (1.0 + std::norm(b[0]) + std::norm(b[1]));
      case CoverKind::Vieta: break;
    }
    const std::size_t n = b.dim();
    if (n == 1) return 1.0;
    if (n == 2) return std::abs(b[0] * b[0] - 4.0 * b[1]);
    if (n == 3) {
      // t^3 + a t^2 + c1 t + c0 with a = -e1, c1 = e2, c0 = -e3.
      const Complex a = -b[0], c1 = b[1], c0 = -b[2];
      return std::abs(18.0 * a * c1 * c0 - 4.0 * a * a * a * c0 + a * a * c1 * c1 - 4.0 * c1 * c1 * c1 -
                      27.0 * c0 * c0);
    }
    auto r = vieta_roots(b);
    Complex d = 1.0;
    for (std::size_t i = 0; i < r.size(); ++i)
      for (std::size_t j = i + 1; j < r.size(); ++j) d *= (r[i] - r[j]) * (r[i] - r[j]);
    return std::abs(d);
  }

 private:
  CoverSpec(CoverKind k, int degree, int power, Atlas down, Atlas up)
      : kind_(k), degree_(degree), power_(power), downstairs_(std::move(down)), up_(std::move(up)) {
    for (const auto& c : downstairs_.charts()) base_.push_back(c.patch);
  }

  void check_chart(std::size_t chart) const {
    if (chart >= downstairs_.size()) throw Error(ErrorKind::InvalidArgument, "chart index out of range");
  }

  Fiber power_fiber(Complex w) const {
    Fiber f;
    if (w == Complex(0.0, 0.0)) {
      f.points.push_back({ComplexPoint{Complex(0.0, 0.0)}, power_});
      return f;
    }
    std::vector<Complex> c(static_cast<std::size_t>(power_), 0.0);
    c.back() = -w;
    std::vector<Complex> roots;
    const double r = std::pow(std::abs(w), 1.0 / power_), a = std::arg(w) / power_;
    for (int k = 0; k < power_; ++k) roots.push_back(std::polar(r, a + 2.0 * kPi * k / power_));
    detail::newton_polish(c, roots);
    for (const auto& cl : detail::cluster_roots(roots)) f.points.push_back({ComplexPoint{cl.value}, cl.count});
    return f;
  }

  // All orderings of the root multiset; each ordered tuple carries
  // multiplicity prod m_i!, so multiplicities sum to n!.
  static Fiber vieta_fiber(const ComplexPoint& b) {
    if (b.dim() == 2) return vieta_fiber2(b[0], b[1]);
    auto clusters = detail::cluster_roots(vieta_roots(b));
    std::vector<Complex> c(b.dim());
    for (std::size_t k = 0; k < b.dim(); ++k) c[k] = (k % 2 == 0 ? -1.0 : 1.0) * b[k];
    detail::polish_multiple(c, clusters);
    std::vector<int> idx;
    double mult = 1.0;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      for (int k = 0; k < clusters[i].count; ++k) idx.push_back(static_cast<int>(i));
      mult *= detail::factorial(clusters[i].count);
    }
    Fiber f;
    do {
      ComplexPoint x(b.dim());
      for (std::size_t j = 0; j < idx.size(); ++j) x[j] = clusters[static_cast<std::size_t>(idx[j])].value;
      f.points.push_back({x, static_cast<int>(mult)});
    } while (std::next_permutation(idx.begin(), idx.end()));
    return f;
  }

  // Same roots, polishing and clustering as the general path, without the
  // heap traffic; the quadratic is evaluated on every mollifier node.
  static Fiber vieta_fiber2(Complex s, Complex p) {
    auto polish = [&](Complex r) {
      for (int k = 0; k < 2; ++k) {
        const Complex val = (r - s) * r + p, dv = 2.0 * r - s;
        if (std::abs(dv) <= 1e-12 * (1.0 + std::abs(r))) break;
        const Complex next = r - val / dv;
        if (!std::isfinite(next.real()) || !std::isfinite(next.imag())) break;
        r = next;
      }
      return r;
    };
    const Complex sq = std::sqrt(s * s - 4.0 * p);
    const Complex q = 0.5 * (std::real(std::conj(s) * sq) >= 0.0 ? s + sq : s - sq);
    Complex r1 = 0.5 * s, r2 = 0.5 * s;
    if (q != Complex(0.0, 0.0)) {
      r1 = q;
      r2 = p / q;
    }
    r1 = polish(r1);
    r2 = polish(r2);
    for (const Complex r : {r1, r2})
      if (!std::isfinite(r.real()) || !std::isfinite(r.imag()))
        throw Error(ErrorKind::RootSolver, "non-finite root for " + ComplexPoint{s, p}.str());
    Fiber f;
    const double tol = kRootClusterTolerance * (1.0 + std::max(std::abs(r1), std::abs(r2)));
    if (std::abs(r2 - r1) <= tol) {
      Complex m = 0.5 * (r1 + r2);
      for (int k = 0; k < 2; ++k) {  // Newton on the derivative 2t - s
        const Complex next = m - (2.0 * m - s) / 2.0;
        if (!std::isfinite(next.real()) || !std::isfinite(next.imag())) break;
        m = next;
      }
      f.points.push_back({ComplexPoint{m, m}, 2});
      return f;
    }
    f.points.reserve(2);
    f.points.push_back({ComplexPoint{r1, r2}, 1});
    f.points.push_back({ComplexPoint{r2, r1}, 1});
    return f;
  }

  CoverKind kind_;
  int degree_;
  int power_;
  Atlas downstairs_;
  Atlas up_;
  std::vector<Domain> base_;
};

inline Fiber fiber(const CoverSpec& cover, const ComplexPoint& b, std::size_t chart = 0) {
  return cover.fiber(chart, b);
}

inline double discriminant_value(const CoverSpec& cover, const ComplexPoint& b, std::size_t chart = 0) {
  return cover.discriminant(chart, b);
}

/// (pi_* f)(b) = sum over the fiber of multiplicity * f(x), on downstairs
/// chart `chart`, for f given on the matching upstairs chart. Smooth off
/// the branch locus (for the identity cover: wherever f is).
inline ScalarField pushforward(const CoverSpec& cover, const ScalarField& f, std::size_t chart = 0) {
  if (f.dim() != cover.dim()) throw Error(ErrorKind::InvalidArgument, "pushforward: dimension mismatch");
  const Domain& patch = cover.downstairs().chart(chart).patch;
  std::optional<Domain> smooth;
  if (cover.kind() == CoverKind::Identity) {
    smooth = f.smooth_on();
  } else {
    smooth = Domain::intersection(
        patch, Domain::region(cover.dim(), "off branch locus", patch.center(), patch.bbox(),
                              [cover, chart](const ComplexPoint& b) { return cover.discriminant(chart, b); }));
  }
  return ScalarField(
      [cover, f, chart](const ComplexPoint& b) {
        const Fiber fib = cover.fiber(chart, b);
        double s = 0.0;
        for (const auto& pt : fib.points) {
          if (!f.valid_on().contains(pt.x))
            throw Error(ErrorKind::FiberContainment,
                        "fiber point " + pt.x.str() + " over " + b.str() + " leaves the domain of " + f.label());
          s += pt.multiplicity * f(pt.x);
        }
        return s;
      },
      patch, smooth, "push(" + f.label() + ")");
}

}  // namespace kahler
