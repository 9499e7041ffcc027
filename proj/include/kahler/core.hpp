// Basic value types shared by every kahler module: complex points, real
// boxes and the library error type.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace kahler {

using Complex = std::complex<double>;

inline constexpr std::size_t kMaxDim = 4;
inline constexpr double kPi = 3.14159265358979323846;

enum class ErrorKind {
  InvalidArgument,
  OutOfDomain,
  EmptyGrid,
  GridTooLarge,
  UnsupportedDimension,
  DisjointDomains,
  Coverage,
  ParameterInfeasible,
  MarginNonPositive,
  RootSolver,
  FiberContainment,
  UnknownScenario,
  Io,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid_argument";
    case ErrorKind::OutOfDomain: return "out_of_domain";
    case ErrorKind::EmptyGrid: return "empty_grid";
    case ErrorKind::GridTooLarge: return "grid_too_large";
    case ErrorKind::UnsupportedDimension: return "unsupported_dimension";
    case ErrorKind::DisjointDomains: return "disjoint_domains";
    case ErrorKind::Coverage: return "coverage";
    case ErrorKind::ParameterInfeasible: return "parameter_infeasible";
    case ErrorKind::MarginNonPositive: return "margin_non_positive";
    case ErrorKind::RootSolver: return "root_solver";
    case ErrorKind::FiberContainment: return "fiber_containment";
    case ErrorKind::UnknownScenario: return "unknown_scenario";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// A point of C^n, n <= kMaxDim, stored inline.
///
/// Real coordinate k addresses Re z_{k/2} for even k and Im z_{k/2} for odd
/// k, so the underlying real space is R^{2n} with the usual ordering
/// (x_1, y_1, x_2, y_2, ...).
class ComplexPoint {
 public:
  ComplexPoint() = default;

  explicit ComplexPoint(std::size_t n) : n_(n) {
    if (n == 0 || n > kMaxDim)
      throw Error(ErrorKind::UnsupportedDimension,
                  "complex dimension must lie in [1, " +
                      std::to_string(kMaxDim) + "], got " + std::to_string(n));
  }

  ComplexPoint(std::initializer_list<Complex> coords) : ComplexPoint(coords.size()) {
    std::copy(coords.begin(), coords.end(), z_.begin());
    require_finite();
  }

  static ComplexPoint from(const std::vector<Complex>& coords) {
    ComplexPoint p(coords.size());
    std::copy(coords.begin(), coords.end(), p.z_.begin());
    p.require_finite();
    return p;
  }

  std::size_t dim() const noexcept { return n_; }
  std::size_t real_dim() const noexcept { return 2 * n_; }

  Complex& operator[](std::size_t j) noexcept { return z_[j]; }
  const Complex& operator[](std::size_t j) const noexcept { return z_[j]; }

  const Complex* begin() const noexcept { return z_.data(); }
  const Complex* end() const noexcept { return z_.data() + n_; }

  double real_coord(std::size_t k) const noexcept {
    return (k % 2 == 0) ? z_[k / 2].real() : z_[k / 2].imag();
  }

  void set_real_coord(std::size_t k, double v) noexcept {
    Complex& c = z_[k / 2];
    c = (k % 2 == 0) ? Complex(v, c.imag()) : Complex(c.real(), v);
  }

  ComplexPoint shifted(std::size_t k, double d) const noexcept {
    ComplexPoint q = *this;
    q.set_real_coord(k, real_coord(k) + d);
    return q;
  }

  bool finite() const noexcept {
    return std::all_of(begin(), end(), [](const Complex& c) {
      return std::isfinite(c.real()) && std::isfinite(c.imag());
    });
  }

  double norm() const noexcept {
    double s = 0.0;
    for (const auto& c : *this) s += std::norm(c);
    return std::sqrt(s);
  }

  friend bool operator==(const ComplexPoint& a, const ComplexPoint& b) noexcept {
    return a.n_ == b.n_ && std::equal(a.begin(), a.end(), b.begin());
  }

  friend ComplexPoint operator+(ComplexPoint a, const ComplexPoint& b) noexcept {
    for (std::size_t j = 0; j < a.n_; ++j) a.z_[j] += b.z_[j];
    return a;
  }

  friend ComplexPoint operator-(ComplexPoint a, const ComplexPoint& b) noexcept {
    for (std::size_t j = 0; j < a.n_; ++j) a.z_[j] -= b.z_[j];
    return a;
  }

  friend ComplexPoint operator*(double s, ComplexPoint a) noexcept {
    for (std::size_t j = 0; j < a.n_; ++j) a.z_[j] *= s;
    return a;
  }

  std::string str() const {
    std::ostringstream os;
    os.precision(17);
    os << '(';
    for (std::size_t j = 0; j < n_; ++j) {
      if (j) os << ", ";
      os << z_[j].real() << (z_[j].imag() < 0 ? "-" : "+") << std::abs(z_[j].imag()) << 'i';
    }
    os << ')';
    return os.str();
  }

 private:
  void require_finite() const {
    if (!finite()) throw Error(ErrorKind::InvalidArgument, "non-finite coordinate in complex point");
  }

  std::array<Complex, kMaxDim> z_{};
  std::size_t n_ = 0;
};

inline double distance(const ComplexPoint& a, const ComplexPoint& b) noexcept {
  return (a - b).norm();
}

/// Axis-aligned box in the real coordinates of C^n.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  std::size_t real_dim() const noexcept { return lo.size(); }

  bool bounded() const noexcept {
    for (std::size_t k = 0; k < lo.size(); ++k)
      if (!std::isfinite(lo[k]) || !std::isfinite(hi[k])) return false;
    return true;
  }

  bool empty() const noexcept {
    for (std::size_t k = 0; k < lo.size(); ++k)
      if (!(lo[k] < hi[k])) return true;
    return false;
  }

  double smallest_extent() const noexcept {
    double e = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < lo.size(); ++k) e = std::min(e, hi[k] - lo[k]);
    return e;
  }

  static Box unbounded(std::size_t n) {
    const double inf = std::numeric_limits<double>::infinity();
    return Box{std::vector<double>(2 * n, -inf), std::vector<double>(2 * n, inf)};
  }

  static Box intersect(const Box& a, const Box& b) {
    Box r = a;
    for (std::size_t k = 0; k < r.lo.size(); ++k) {
      r.lo[k] = std::max(a.lo[k], b.lo[k]);
      r.hi[k] = std::min(a.hi[k], b.hi[k]);
    }
    return r;
  }

  static Box hull(const Box& a, const Box& b) {
    Box r = a;
    for (std::size_t k = 0; k < r.lo.size(); ++k) {
      r.lo[k] = std::min(a.lo[k], b.lo[k]);
      r.hi[k] = std::max(a.hi[k], b.hi[k]);
    }
    return r;
  }
};

}  // namespace kahler
