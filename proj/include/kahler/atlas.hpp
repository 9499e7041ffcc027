// Chart atlases and subsets of charted manifolds.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kahler/domain.hpp"

namespace kahler {

struct Chart {
  std::string name;
  Domain patch;  // the cover element, in this chart's coordinates
};

/// A finite atlas. transition(from, to, x) returns the coordinates of x in
/// chart `to`, or nothing when x has no image there.
class Atlas {
 public:
  using Transition = std::function<std::optional<ComplexPoint>(std::size_t, std::size_t, const ComplexPoint&)>;

  Atlas(std::size_t dim, std::vector<Chart> charts, Transition t)
      : dim_(dim), charts_(std::move(charts)), transition_(std::move(t)) {
    if (charts_.empty()) throw Error(ErrorKind::InvalidArgument, "atlas needs at least one chart");
    for (const auto& c : charts_)
      if (c.patch.dim() != dim_) throw Error(ErrorKind::InvalidArgument, "chart dimension mismatch");
  }

  static Atlas single(const std::string& name, const Domain& patch) {
    return Atlas(patch.dim(), {Chart{name, patch}}, [](std::size_t, std::size_t, const ComplexPoint& x) {
      return std::optional<ComplexPoint>(x);
    });
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return charts_.size(); }
  const Chart& chart(std::size_t i) const { return charts_.at(i); }
  const std::vector<Chart>& charts() const noexcept { return charts_; }

  /// Same transitions, different cover elements.
  Atlas with_patches(const std::vector<Domain>& patches) const {
    if (patches.size() != charts_.size()) throw Error(ErrorKind::InvalidArgument, "one patch per chart is required");
    std::vector<Chart> c = charts_;
    for (std::size_t i = 0; i < c.size(); ++i) c[i].patch = patches[i];
    return Atlas(dim_, std::move(c), transition_);
  }

  std::optional<ComplexPoint> map(std::size_t from, std::size_t to, const ComplexPoint& x) const {
    if (from == to) return x;
    return transition_(from, to, x);
  }

  /// First chart whose patch contains the point given in chart `from`.
  std::optional<std::pair<std::size_t, ComplexPoint>> locate(std::size_t from, const ComplexPoint& x) const {
    for (std::size_t j = 0; j < charts_.size(); ++j) {
      auto y = map(from, j, x);
      if (y && charts_[j].patch.contains(*y)) return std::make_pair(j, *y);
    }
    return std::nullopt;
  }

 private:
  std::size_t dim_;
  std::vector<Chart> charts_;
  Transition transition_;
};

/// A subset of a charted manifold, given in every chart by a domain. The
/// representations are expected to agree on chart overlaps.
struct ChartSet {
  std::string label;
  std::vector<Domain> in_chart;

  bool contains(std::size_t chart, const ComplexPoint& x) const { return in_chart.at(chart).contains(x); }
};

}  // namespace kahler
