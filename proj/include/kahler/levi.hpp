// Finite-difference Levi forms and the plurisubharmonicity checks built on them.
#pragma once

#include <limits>

#include <json.hpp>

#include "kahler/calculus.hpp"
#include "kahler/grid.hpp"
#include "kahler/linalg.hpp"

namespace kahler {

/// Values of d^2 u / dz_j dzbar_k at one point.
struct LeviMatrix {
  HermitianMatrix entries;
  ComplexPoint location;
  double h = 0.0;

  double min_eigenvalue() const { return kahler::min_eigenvalue(entries); }
};

/// Central differences with spacing h:
///   L_jj = (f_xjxj + f_yjyj) / 4
///   L_jk = [(f_xjxk + f_yjyk) + i (f_xjyk - f_yjxk)] / 4,   L_kj = conj(L_jk).
/// Mixed derivatives use the four diagonal points, so a 2-variable form
/// costs 25 evaluations.
inline LeviMatrix levi_form(const ScalarField& f, const ComplexPoint& p, double h) {
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "stencil spacing must be positive");
  const std::size_t n = p.dim();
  const double f0 = f(p);
  const double h2 = h * h;
  auto second = [&](std::size_t k) { return (f(p.shifted(k, h)) - 2.0 * f0 + f(p.shifted(k, -h))) / h2; };
  auto mixed = [&](std::size_t a, std::size_t b) {
    const ComplexPoint pa = p.shifted(a, h), ma = p.shifted(a, -h);
    return (f(pa.shifted(b, h)) - f(pa.shifted(b, -h)) - f(ma.shifted(b, h)) + f(ma.shifted(b, -h))) / (4.0 * h2);
  };
  LeviMatrix L{HermitianMatrix(n), p, h};
  for (std::size_t j = 0; j < n; ++j) L.entries(j, j) = 0.25 * (second(2 * j) + second(2 * j + 1));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) {
      const double re = mixed(2 * j, 2 * k) + mixed(2 * j + 1, 2 * k + 1);
      const double im = mixed(2 * j, 2 * k + 1) - mixed(2 * j + 1, 2 * k);
      L.entries(j, k) = 0.25 * Complex(re, im);
      L.entries(k, j) = std::conj(L.entries(j, k));
    }
  }
  return L;
}

/// Smallest Levi eigenvalue over a grid; the margin m equals min_eigenvalue.
struct PshReport {
  double min_eigenvalue = std::numeric_limits<double>::infinity();
  ComplexPoint argmin;
  double h = 0.0;
  std::size_t nodes = 0;

  double margin() const noexcept { return min_eigenvalue; }

  nlohmann::json to_json() const {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& z : argmin) {
      a.push_back(z.real());
      a.push_back(z.imag());
    }
    return {{"min_eigenvalue", min_eigenvalue}, {"argmin", a}, {"h", h}};
  }
};

inline PshReport min_levi_eigenvalue(const ScalarField& f, const std::vector<ComplexPoint>& nodes, double h) {
  if (nodes.empty()) throw Error(ErrorKind::EmptyGrid, "min_levi_eigenvalue on an empty grid");
  PshReport r;
  r.h = h;
  r.nodes = nodes.size();
  for (const auto& p : nodes) {
    const double m = levi_form(f, p, h).min_eigenvalue();
    if (m < r.min_eigenvalue || r.argmin.dim() == 0) {
      r.min_eigenvalue = m;
      r.argmin = p;
    }
  }
  return r;
}

inline PshReport min_levi_eigenvalue(const ScalarField& f, const Grid& g, double h) {
  return min_levi_eigenvalue(f, g.nodes, h);
}

struct PluriharmonicCheck {
  bool pass = false;
  double deviation = 0.0;  // max over nodes of the Levi matrix max-norm
  ComplexPoint worst;
};

inline PluriharmonicCheck check_pluriharmonic(const ScalarField& f, const std::vector<ComplexPoint>& nodes,
                                              double h, double tol) {
  if (nodes.empty()) throw Error(ErrorKind::EmptyGrid, "check_pluriharmonic on an empty grid");
  PluriharmonicCheck c;
  c.worst = nodes.front();
  for (const auto& p : nodes) {
    const double d = levi_form(f, p, h).entries.max_abs();
    if (d > c.deviation) {
      c.deviation = d;
      c.worst = p;
    }
  }
  c.pass = c.deviation <= tol;
  return c;
}

inline PluriharmonicCheck check_pluriharmonic(const ScalarField& f, const Grid& g, double h, double tol) {
  return check_pluriharmonic(f, g.nodes, h, tol);
}

/// Refinement ratio of the sup of |discrete Laplacian| between spacing h and
/// h/2 over the lattices of a region (the C^2 proxy). Smooth fields give
/// ratios near 1; a conical kink at a lattice node gives 2.
struct RefinementRatio {
  double sup_coarse = 0.0;
  double sup_fine = 0.0;
  double ratio = 0.0;
};

inline RefinementRatio laplacian_refinement_ratio(const ScalarField& f, const std::vector<ComplexPoint>& coarse,
                                                  const std::vector<ComplexPoint>& fine, double h) {
  if (coarse.empty() || fine.empty()) throw Error(ErrorKind::EmptyGrid, "refinement ratio on an empty grid");
  RefinementRatio r;
  for (const auto& p : coarse) r.sup_coarse = std::max(r.sup_coarse, std::abs(discrete_laplacian(f, p, h)));
  for (const auto& p : fine) r.sup_fine = std::max(r.sup_fine, std::abs(discrete_laplacian(f, p, 0.5 * h)));
  r.ratio = r.sup_fine / r.sup_coarse;
  return r;
}

}  // namespace kahler
