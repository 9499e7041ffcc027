// Uniform lattices restricted to domains, slices through complex lines,
// low-discrepancy samples and CSV dumps.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <ostream>
#include <vector>

#include "kahler/domain.hpp"

namespace kahler {

inline constexpr std::size_t kDefaultMaxGridNodes = 6'000'000;

/// Lattice nodes of a domain. Every node lies in the domain. A full grid has
/// the same spacing h in all 2n real directions; a slice grid spans the real
/// plane of one complex line instead.
struct Grid {
  Domain domain;
  double h = 0.0;
  std::vector<ComplexPoint> nodes;

  std::size_t size() const noexcept { return nodes.size(); }
};

namespace detail {

inline void require_spacing(double h) {
  if (!(h > 0.0) || !std::isfinite(h))
    throw Error(ErrorKind::InvalidArgument, "grid spacing must be positive and finite");
}

}  // namespace detail

/// Lattice center + h*Z^{2n} restricted to the domain. The center is always a
/// node when it lies in the domain, so tiny domains still get one node.
inline Grid sample_grid(const Domain& domain, double h,
                        std::size_t max_nodes = kDefaultMaxGridNodes) {
  detail::require_spacing(h);
  const Box& box = domain.bbox();
  if (!box.bounded()) throw Error(ErrorKind::InvalidArgument, "cannot grid an unbounded domain");
  const std::size_t rd = 2 * domain.dim();
  const ComplexPoint& c = domain.center();
  std::vector<long long> lo(rd), hi(rd);
  double cells = 1.0;
  for (std::size_t k = 0; k < rd; ++k) {
    lo[k] = static_cast<long long>(std::ceil((box.lo[k] - c.real_coord(k)) / h));
    hi[k] = static_cast<long long>(std::floor((box.hi[k] - c.real_coord(k)) / h));
    cells *= static_cast<double>(std::max(0LL, hi[k] - lo[k] + 1));
  }
  if (cells > 50.0 * static_cast<double>(max_nodes))
    throw Error(ErrorKind::GridTooLarge, "lattice enumeration too large for spacing " + std::to_string(h));
  Grid g{domain, h, {}};
  if (cells == 0.0)
    throw Error(ErrorKind::EmptyGrid, "no lattice node inside " + domain.describe());
  std::vector<long long> idx(lo);
  while (true) {
    ComplexPoint p = c;
    for (std::size_t k = 0; k < rd; ++k) p.set_real_coord(k, c.real_coord(k) + h * static_cast<double>(idx[k]));
    if (domain.contains(p)) {
      g.nodes.push_back(p);
      if (g.nodes.size() > max_nodes)
        throw Error(ErrorKind::GridTooLarge, "grid exceeds " + std::to_string(max_nodes) + " nodes");
    }
    std::size_t k = 0;
    while (k < rd && ++idx[k] > hi[k]) {
      idx[k] = lo[k];
      ++k;
    }
    if (k == rd) break;
  }
  if (g.nodes.empty())
    throw Error(ErrorKind::EmptyGrid, "no lattice node inside " + domain.describe());
  return g;
}

/// Nodes origin + h*(a + ib)*dir, |h*(a+ib)| <= radius, that lie in the domain.
inline Grid sample_slice(const Domain& domain, const ComplexPoint& origin, const ComplexPoint& dir,
                         double h, double radius, std::size_t max_nodes = kDefaultMaxGridNodes) {
  detail::require_spacing(h);
  if (origin.dim() != domain.dim() || dir.dim() != domain.dim())
    throw Error(ErrorKind::InvalidArgument, "slice and domain dimensions differ");
  const long long m = static_cast<long long>(std::floor(radius / h));
  if (static_cast<double>(2 * m + 1) * static_cast<double>(2 * m + 1) > 50.0 * static_cast<double>(max_nodes))
    throw Error(ErrorKind::GridTooLarge, "slice enumeration too large");
  Grid g{domain, h, {}};
  for (long long b = -m; b <= m; ++b) {
    for (long long a = -m; a <= m; ++a) {
      const Complex t(h * static_cast<double>(a), h * static_cast<double>(b));
      if (std::abs(t) > radius) continue;
      ComplexPoint p = origin;
      for (std::size_t j = 0; j < p.dim(); ++j) p[j] += t * dir[j];
      if (domain.contains(p)) g.nodes.push_back(p);
    }
  }
  if (g.nodes.size() > max_nodes) throw Error(ErrorKind::GridTooLarge, "slice grid too large");
  if (g.nodes.empty()) throw Error(ErrorKind::EmptyGrid, "slice misses " + domain.describe());
  return g;
}

/// Smallest outer margin over the nodes of a grid of the inner domain, minus
/// the half-diagonal of a grid cell. Positive means inner ⋐ outer, up to the
/// resolution of the grid.
inline double nesting_margin(const Domain& inner, const Domain& outer, double h) {
  Grid g = sample_grid(inner, h);
  double m = std::numeric_limits<double>::infinity();
  for (const auto& p : g.nodes) m = std::min(m, outer.margin(p));
  return m - 0.5 * h * std::sqrt(static_cast<double>(2 * inner.dim()));
}

/// Halton sequence in up to 2*kMaxDim dimensions.
class Halton {
 public:
  explicit Halton(std::size_t dim, std::uint64_t skip = 0) : dim_(dim), index_(skip) {
    if (dim == 0 || dim > 2 * kMaxDim) throw Error(ErrorKind::InvalidArgument, "Halton dimension out of range");
  }

  std::vector<double> next() {
    static constexpr unsigned kPrimes[8] = {2, 3, 5, 7, 11, 13, 17, 19};
    ++index_;
    std::vector<double> u(dim_);
    for (std::size_t k = 0; k < dim_; ++k) {
      double f = 1.0, r = 0.0;
      std::uint64_t i = index_;
      while (i > 0) {
        f /= kPrimes[k];
        r += f * static_cast<double>(i % kPrimes[k]);
        i /= kPrimes[k];
      }
      u[k] = r;
    }
    return u;
  }

 private:
  std::size_t dim_;
  std::uint64_t index_;
};

/// Fixed skip of the Halton stream; recorded in every report.
inline constexpr std::uint64_t kSampleSeed = 20050131;

/// Deterministic low-discrepancy points of a bounded domain (rejection from
/// its bounding box). Returns fewer than count points only if max_draws runs out.
inline std::vector<ComplexPoint> low_discrepancy_sample(const Domain& domain, std::size_t count,
                                                        std::size_t max_draws = 0,
                                                        std::uint64_t seed = kSampleSeed) {
  const Box& box = domain.bbox();
  if (!box.bounded()) throw Error(ErrorKind::InvalidArgument, "cannot sample an unbounded domain");
  if (max_draws == 0) max_draws = 2000 * count + 1000;
  const std::size_t rd = 2 * domain.dim();
  Halton seq(rd, seed);
  std::vector<ComplexPoint> out;
  out.reserve(count);
  for (std::size_t d = 0; d < max_draws && out.size() < count; ++d) {
    auto u = seq.next();
    ComplexPoint p(domain.dim());
    for (std::size_t k = 0; k < rd; ++k) p.set_real_coord(k, box.lo[k] + u[k] * (box.hi[k] - box.lo[k]));
    if (domain.contains(p)) out.push_back(p);
  }
  return out;
}

/// CSV dump: header re_1,im_1,...,re_n,im_n,value and one row per node.
inline void write_csv(std::ostream& os, const std::vector<ComplexPoint>& nodes,
                      const std::function<double(const ComplexPoint&)>& value) {
  if (nodes.empty()) throw Error(ErrorKind::EmptyGrid, "nothing to dump");
  const std::size_t n = nodes.front().dim();
  for (std::size_t j = 1; j <= n; ++j) os << "re_" << j << ",im_" << j << ',';
  os << "value\n";
  os.precision(17);
  for (const auto& p : nodes) {
    for (std::size_t j = 0; j < n; ++j) os << p[j].real() << ',' << p[j].imag() << ',';
    os << value(p) << '\n';
  }
}

}  // namespace kahler
