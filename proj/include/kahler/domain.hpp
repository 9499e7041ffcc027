// Open subsets of C^n described by intersections of smooth constraints.
#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "kahler/core.hpp"

namespace kahler {

/// An open set {x : margin(x) > 0}.
///
/// Every constraint carries a margin function that is positive exactly on
/// its interior and, in absolute value, never exceeds the Euclidean distance
/// to its zero set (signed distance lower bound). Disks, balls, annuli and
/// polydisks use exact distances; explicit chart regions supply their own
/// function, usually a defining function divided by a Lipschitz constant.
///
/// The domain's margin is the minimum over its constraints, so intersections
/// are cheap and keep their per-constraint structure (needed by the shift
/// profile of the local smoothing step, which pairs constraints of nested
/// domains).
class Domain {
 public:
  using MarginFn = std::function<double(const ComplexPoint&)>;

  struct Constraint {
    MarginFn margin;
    std::string label;
  };

  static Domain whole(std::size_t n) {
    return Domain(n, "whole", ComplexPoint(n), Box::unbounded(n), {});
  }

  static Domain disk(Complex c, double r) {
    require_positive(r, "disk radius");
    Box box{{c.real() - r, c.imag() - r}, {c.real() + r, c.imag() + r}};
    auto con = make_constraint("|w-c|<" + fmt(r),
                               [c, r](const ComplexPoint& p) { return r - std::abs(p[0] - c); });
    return Domain(1, "disk", ComplexPoint{c}, std::move(box), {con});
  }

  static Domain annulus(Complex c, double r_in, double r_out) {
    require_positive(r_in, "annulus inner radius");
    if (!(r_out > r_in))
      throw Error(ErrorKind::InvalidArgument, "annulus outer radius must exceed inner radius");
    Box box{{c.real() - r_out, c.imag() - r_out}, {c.real() + r_out, c.imag() + r_out}};
    auto outer = make_constraint("|w-c|<" + fmt(r_out), [c, r_out](const ComplexPoint& p) {
      return r_out - std::abs(p[0] - c);
    });
    auto inner = make_constraint("|w-c|>" + fmt(r_in), [c, r_in](const ComplexPoint& p) {
      return std::abs(p[0] - c) - r_in;
    });
    return Domain(1, "annulus", ComplexPoint{c}, std::move(box), {outer, inner});
  }

  static Domain ball(const ComplexPoint& c, double r) {
    require_positive(r, "ball radius");
    const std::size_t n = c.dim();
    Box box = Box::unbounded(n);
    for (std::size_t k = 0; k < 2 * n; ++k) {
      box.lo[k] = c.real_coord(k) - r;
      box.hi[k] = c.real_coord(k) + r;
    }
    auto con = make_constraint("|z-c|<" + fmt(r),
                               [c, r](const ComplexPoint& p) { return r - distance(p, c); });
    return Domain(n, n == 1 ? "disk" : "ball", c, std::move(box), {con});
  }

  /// {|z_j - c| < r} inside C^n, all other coordinates free.
  static Domain coordinate_disk(std::size_t n, std::size_t j, Complex c, double r) {
    require_positive(r, "coordinate disk radius");
    if (j >= n) throw Error(ErrorKind::InvalidArgument, "coordinate index out of range");
    Box box = Box::unbounded(n);
    box.lo[2 * j] = c.real() - r;
    box.hi[2 * j] = c.real() + r;
    box.lo[2 * j + 1] = c.imag() - r;
    box.hi[2 * j + 1] = c.imag() + r;
    ComplexPoint center(n);
    center[j] = c;
    auto con = make_constraint("|z" + std::to_string(j + 1) + "-c|<" + fmt(r),
                               [j, c, r](const ComplexPoint& p) { return r - std::abs(p[j] - c); });
    return Domain(n, "coordinate-disk", center, std::move(box), {con});
  }

  static Domain polydisk(const ComplexPoint& c, const std::vector<double>& radii) {
    const std::size_t n = c.dim();
    if (radii.size() != n)
      throw Error(ErrorKind::InvalidArgument, "polydisk needs one radius per coordinate");
    Domain d = coordinate_disk(n, 0, c[0], radii[0]);
    for (std::size_t j = 1; j < n; ++j) d = intersection(d, coordinate_disk(n, j, c[j], radii[j]));
    d.kind_ = n == 1 ? "disk" : "polydisk";
    d.center_ = c;
    return d;
  }

  /// A chart region given by an explicit boundary function.
  static Domain region(std::size_t n, std::string label, const ComplexPoint& center, Box box,
                       MarginFn margin) {
    return Domain(n, "region", center, std::move(box), {make_constraint(std::move(label), std::move(margin))});
  }

  static Domain intersection(const Domain& a, const Domain& b) {
    a.require_same_dim(b);
    std::vector<std::shared_ptr<const Constraint>> cons = a.constraints_;
    cons.insert(cons.end(), b.constraints_.begin(), b.constraints_.end());
    Domain d(a.dim_, "intersection", a.center_, Box::intersect(a.box_, b.box_), std::move(cons));
    if (!d.contains(d.center_) && d.contains(b.center_)) d.center_ = b.center_;
    return d;
  }

  static Domain unite(const Domain& a, const Domain& b) {
    a.require_same_dim(b);
    auto con = make_constraint("(" + a.describe() + ")|(" + b.describe() + ")",
                               [a, b](const ComplexPoint& p) { return std::max(a.margin(p), b.margin(p)); });
    return Domain(a.dim_, "union", a.center_, Box::hull(a.box_, b.box_), {con});
  }

  /// a minus the closure of b.
  static Domain minus(const Domain& a, const Domain& b) {
    a.require_same_dim(b);
    auto con = make_constraint("not(" + b.describe() + ")",
                               [b](const ComplexPoint& p) { return -b.margin(p); });
    std::vector<std::shared_ptr<const Constraint>> cons = a.constraints_;
    cons.push_back(con);
    return Domain(a.dim_, "difference", a.center_, a.box_, std::move(cons));
  }

  std::size_t dim() const noexcept { return dim_; }
  const std::string& kind() const noexcept { return kind_; }
  const ComplexPoint& center() const noexcept { return center_; }
  const Box& bbox() const noexcept { return box_; }
  const std::vector<std::shared_ptr<const Constraint>>& constraints() const noexcept {
    return constraints_;
  }

  double margin(const ComplexPoint& p) const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& c : constraints_) m = std::min(m, c->margin(p));
    return m;
  }

  bool contains(const ComplexPoint& p) const {
    if (p.dim() != dim_) return false;
    return margin(p) > 0.0;
  }

  /// {margin > r}: every point of the result has an r-ball inside *this.
  Domain shrunk(double r) const { return offset(-r, "shrunk"); }

  /// {margin > -r}: contains the r-neighbourhood of *this.
  Domain grown(double r) const { return offset(r, "grown"); }

  std::string describe() const {
    if (constraints_.empty()) return kind_;
    std::string s;
    for (std::size_t i = 0; i < constraints_.size(); ++i) {
      if (i) s += " & ";
      s += constraints_[i]->label;
    }
    return s;
  }

 private:
  Domain(std::size_t n, std::string kind, ComplexPoint center, Box box,
         std::vector<std::shared_ptr<const Constraint>> cons)
      : dim_(n), kind_(std::move(kind)), center_(std::move(center)), box_(std::move(box)),
        constraints_(std::move(cons)) {}

  static std::shared_ptr<const Constraint> make_constraint(std::string label, MarginFn f) {
    return std::make_shared<const Constraint>(Constraint{std::move(f), std::move(label)});
  }

  static void require_positive(double r, const char* what) {
    if (!(r > 0.0) || !std::isfinite(r))
      throw Error(ErrorKind::InvalidArgument, std::string(what) + " must be positive and finite");
  }

  static std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
  }

  void require_same_dim(const Domain& other) const {
    if (other.dim_ != dim_)
      throw Error(ErrorKind::InvalidArgument, "domains of different dimension cannot be combined");
  }

  Domain offset(double r, const char* tag) const {
    std::vector<std::shared_ptr<const Constraint>> cons;
    cons.reserve(constraints_.size());
    for (const auto& c : constraints_) {
      auto inner = c;
      cons.push_back(make_constraint(c->label + (r < 0 ? "-" : "+") + fmt(std::abs(r)),
                                     [inner, r](const ComplexPoint& p) { return inner->margin(p) + r; }));
    }
    Box box = box_;
    for (std::size_t k = 0; k < box.lo.size(); ++k) {
      box.lo[k] -= r;
      box.hi[k] += r;
    }
    return Domain(dim_, tag, center_, std::move(box), std::move(cons));
  }

  std::size_t dim_ = 1;
  std::string kind_;
  ComplexPoint center_;
  Box box_;
  std::vector<std::shared_ptr<const Constraint>> constraints_;
};

}  // namespace kahler
