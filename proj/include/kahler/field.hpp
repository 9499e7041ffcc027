// Scalar fields: lazily composed evaluation procedures with a declared
// domain of validity.
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "kahler/domain.hpp"

namespace kahler {

class ScalarField {
 public:
  using Evaluator = std::function<double(const ComplexPoint&)>;

  ScalarField(Evaluator f, Domain valid_on, std::optional<Domain> smooth_on = std::nullopt,
              std::string label = "field")
      : eval_(std::make_shared<const Evaluator>(std::move(f))),
        valid_on_(std::move(valid_on)),
        smooth_on_(std::move(smooth_on)),
        label_(std::move(label)) {
    if (smooth_on_ && smooth_on_->dim() != valid_on_.dim())
      throw Error(ErrorKind::InvalidArgument, "smooth_on and valid_on differ in dimension");
  }

  static ScalarField constant(double c, const Domain& d) {
    return ScalarField([c](const ComplexPoint&) { return c; }, d, d, "constant");
  }

  /// Evaluates at p; points outside valid_on are rejected, never extrapolated.
  double operator()(const ComplexPoint& p) const {
    if (p.dim() != valid_on_.dim() || !(valid_on_.margin(p) > 0.0))
      throw Error(ErrorKind::OutOfDomain,
                  label_ + " evaluated outside its domain at " + p.str());
    return (*eval_)(p);
  }

  std::size_t dim() const noexcept { return valid_on_.dim(); }
  const Domain& valid_on() const noexcept { return valid_on_; }
  const std::optional<Domain>& smooth_on() const noexcept { return smooth_on_; }
  const std::string& label() const noexcept { return label_; }

  bool is_smooth_at(const ComplexPoint& p) const { return smooth_on_ && smooth_on_->contains(p); }

  ScalarField with_smooth_on(std::optional<Domain> s) const {
    ScalarField r = *this;
    r.smooth_on_ = std::move(s);
    return r;
  }

  ScalarField with_label(std::string label) const {
    ScalarField r = *this;
    r.label_ = std::move(label);
    return r;
  }

  /// Same values, validity cut down to valid_on ∩ d.
  ScalarField restricted(const Domain& d) const {
    ScalarField r = *this;
    r.valid_on_ = Domain::intersection(valid_on_, d);
    if (r.smooth_on_) r.smooth_on_ = Domain::intersection(*r.smooth_on_, d);
    return r;
  }

  ScalarField scaled(double a) const {
    auto f = *this;
    return ScalarField([f, a](const ComplexPoint& p) { return a * f(p); }, valid_on_, smooth_on_,
                       label_);
  }

  friend ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    return combine(a, b, [](double x, double y) { return x + y; }, "+");
  }

  friend ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    return combine(a, b, [](double x, double y) { return x - y; }, "-");
  }

 private:
  template <class Op>
  static ScalarField combine(const ScalarField& a, const ScalarField& b, Op op, const char* sym) {
    std::optional<Domain> smooth;
    if (a.smooth_on_ && b.smooth_on_) smooth = Domain::intersection(*a.smooth_on_, *b.smooth_on_);
    return ScalarField([a, b, op](const ComplexPoint& p) { return op(a(p), b(p)); },
                       Domain::intersection(a.valid_on_, b.valid_on_), std::move(smooth),
                       "(" + a.label_ + sym + b.label_ + ")");
  }

  std::shared_ptr<const Evaluator> eval_;
  Domain valid_on_;
  std::optional<Domain> smooth_on_;
  std::string label_;
};

/// Pulls a domain back along the complex line t -> origin + t*dir. Margins are
/// divided by |dir|, so distance lower bounds stay lower bounds.
inline Domain line_preimage(const Domain& d, const ComplexPoint& origin, const ComplexPoint& dir,
                            double param_radius) {
  const double scale = dir.norm();
  if (!(scale > 0.0)) throw Error(ErrorKind::InvalidArgument, "line direction must be non-zero");
  Box box{{-param_radius, -param_radius}, {param_radius, param_radius}};
  auto at = [origin, dir](const ComplexPoint& t) {
    ComplexPoint q = origin;
    for (std::size_t j = 0; j < q.dim(); ++j) q[j] += t[0] * dir[j];
    return q;
  };
  return Domain::region(1, "line-preimage(" + d.describe() + ")", ComplexPoint{Complex(0.0, 0.0)},
                        std::move(box), [d, at, scale](const ComplexPoint& t) {
                          return d.margin(at(t)) / scale;
                        });
}

/// The restriction of f to the complex line t -> origin + t*dir, as a field on C.
inline ScalarField restrict_to_line(const ScalarField& f, const ComplexPoint& origin,
                                    const ComplexPoint& dir, double param_radius) {
  if (origin.dim() != f.dim() || dir.dim() != f.dim())
    throw Error(ErrorKind::InvalidArgument, "line and field dimensions differ");
  Domain valid = line_preimage(f.valid_on(), origin, dir, param_radius);
  std::optional<Domain> smooth;
  if (f.smooth_on()) smooth = line_preimage(*f.smooth_on(), origin, dir, param_radius);
  return ScalarField(
      [f, origin, dir](const ComplexPoint& t) {
        ComplexPoint q = origin;
        for (std::size_t j = 0; j < q.dim(); ++j) q[j] += t[0] * dir[j];
        return f(q);
      },
      std::move(valid), std::move(smooth), f.label() + "|line");
}

}  // namespace kahler
