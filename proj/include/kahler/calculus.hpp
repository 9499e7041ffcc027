// Finite-difference Laplacian and dd^c masses over disks.
//
// Convention: d^c = i(dbar - d), so dd^c u = 2i ddbar u and in one variable
// dd^c u = (Laplacian u) dx^dy. Masses are integrals of the Laplacian.
#pragma once

#include <cmath>

#include "kahler/field.hpp"

namespace kahler {

/// Sum over all 2n real directions of [f(p+h e_k) - 2 f(p) + f(p-h e_k)] / h^2.
inline double discrete_laplacian(const ScalarField& f, const ComplexPoint& p, double h) {
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "stencil spacing must be positive");
  const double f0 = f(p);
  double s = 0.0;
  for (std::size_t k = 0; k < p.real_dim(); ++k) s += f(p.shifted(k, h)) - 2.0 * f0 + f(p.shifted(k, -h));
  return s / (h * h);
}

namespace detail {

inline double disk_radius(const Domain& disk) {
  if (disk.dim() != 1)
    throw Error(ErrorKind::UnsupportedDimension, "disk masses are defined on one-dimensional bases only");
  if (disk.kind() != "disk") throw Error(ErrorKind::InvalidArgument, "mass_integral needs a disk domain");
  return 0.5 * (disk.bbox().hi[0] - disk.bbox().lo[0]);
}

}  // namespace detail

/// Integral of the discrete Laplacian (stencil h) over a disk, by the
/// midpoint rule on polar cells of radial width h/2.
///
/// The stencil average of a Laplacian is the Laplacian of a tent-smoothed
/// field, so the sum also captures the mass of conical points such as the
/// vertex of 2|w|: the result tends to the boundary flux of f.
inline double mass_integral(const ScalarField& f, const Domain& disk, double h) {
  if (f.dim() != 1)
    throw Error(ErrorKind::UnsupportedDimension, "mass_integral is defined for one complex variable");
  const double R = detail::disk_radius(disk);
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "mass_integral: h must be positive");
  if (R < h) throw Error(ErrorKind::InvalidArgument, "mass_integral: disk smaller than the stencil");
  const Complex c = disk.center()[0];
  const int nr = static_cast<int>(std::ceil(2.0 * R / h));
  int nt = std::max(64, static_cast<int>(std::ceil(2.0 * kPi * R / h)));
  nt += (4 - nt % 4) % 4;
  const double dr = R / nr, dt = 2.0 * kPi / nt;
  double total = 0.0;
  for (int i = 0; i < nr; ++i) {
    const double r = (i + 0.5) * dr;
    double ring = 0.0;
    for (int j = 0; j < nt; ++j) {
      const double t = (j + 0.5) * dt;
      ring += discrete_laplacian(f, ComplexPoint{c + std::polar(r, t)}, h);
    }
    total += ring * r;
  }
  return total * dr * dt;
}

}  // namespace kahler
