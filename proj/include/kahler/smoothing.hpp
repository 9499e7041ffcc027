// Local smoothing of a continuous strictly psh potential, gluing of local
// corrections over a finite refinement, and the smoothed pushforward.
//
// Local step (Richberg pattern): mollify, lift by a smooth step 2 delta sigma
// that is +1 on U and -1 off V, and take the regularized max with the
// original potential. Off V the original wins by at least 2 eta, so the
// result equals it exactly there.
#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kahler/cocycle.hpp"
#include "kahler/cover.hpp"
#include "kahler/kernel.hpp"
#include "kahler/mollify.hpp"
#include "kahler/report.hpp"

namespace kahler {

/// U ⋐ V ⋐ W, and Omega ⊂ W where the input is already smooth.
struct NestedOpens {
  Domain U, V, W;
  std::optional<Domain> Omega;
};

struct SmoothingParams {
  double eps = 0.05;    // mollification radius
  double eta = 0.005;   // regularized-max width
  double delta = 0.02;  // shift amplitude
  int quad_order = kDefaultMollifyOrder;
  double h = 0.01;             // verification grid spacing
  double stencil_h = 0.0;      // spacing of the margin measurements; 0 means eps/4
  std::size_t shell_samples = 2000;

  // Measured on V∖U by the local step (NaN until measured).
  double tau_bound = std::nan("");             // sup |phi_eps - phi|
  double psh_margin = std::nan("");            // m, smallest Levi eigenvalue of phi_eps
  double relative_shift_bound = std::nan("");  // sup |L sigma| relative to L phi_eps
  double shift_hessian_bound = std::nan("");   // K_sigma = m * relative bound
  double quadrature_gap = std::nan("");

  // Slack in each inequality, filled by validate_params.
  double tau_slack = std::nan("");
  double eta_slack = std::nan("");
  double absorption_slack = std::nan("");

  double stencil() const noexcept { return stencil_h > 0.0 ? stencil_h : 0.25 * eps; }

  nlohmann::json to_json() const {
    auto num = [](double v) { return detail::number(v); };
    return {{"eps", eps},
            {"eta", eta},
            {"delta", delta},
            {"quad_order", quad_order},
            {"h", h},
            {"stencil_h", stencil()},
            {"shell_samples", shell_samples},
            {"tau_bound", num(tau_bound)},
            {"psh_margin", num(psh_margin)},
            {"relative_shift_bound", num(relative_shift_bound)},
            {"K_sigma", num(shift_hessian_bound)},
            {"quadrature_gap", num(quadrature_gap)},
            {"tau_slack", num(tau_slack)},
            {"eta_slack", num(eta_slack)},
            {"absorption_slack", num(absorption_slack)}};
  }
};

namespace detail {

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace detail

/// Checks that need no measurement: positive finite eps, eta, delta, h and
/// eta ≤ delta/2.
inline SmoothingParams validate_static(SmoothingParams p) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw Error(ErrorKind::ParameterInfeasible, std::string(name) + " must be positive and finite");
  };
  positive(p.eps, "eps");
  positive(p.eta, "eta");
  positive(p.delta, "delta");
  positive(p.h, "h");
  if (p.quad_order < 2) throw Error(ErrorKind::ParameterInfeasible, "quad_order must be >= 2");
  if (!(p.eta <= 0.5 * p.delta))
    throw Error(ErrorKind::ParameterInfeasible, "violated: eta ≤ delta/2 (eta=" + detail::fmt(p.eta) +
                                                    ", delta/2=" + detail::fmt(0.5 * p.delta) + ")");
  p.eta_slack = 0.5 * p.delta - p.eta;
  return p;
}

/// All three inequalities: tau_bound < delta, eta ≤ delta/2 and
/// 2 delta K_sigma < m/2. Returns p with the slacks filled in.
inline SmoothingParams validate_params(double m, SmoothingParams p) {
  if (!(m > 0.0))
    throw Error(ErrorKind::MarginNonPositive, "psh margin must be positive (m=" + detail::fmt(m) + ")");
  p = validate_static(p);
  p.psh_margin = m;
  if (std::isnan(p.tau_bound) || p.tau_bound < 0.0)
    throw Error(ErrorKind::ParameterInfeasible, "tau_bound has not been measured");
  if (std::isnan(p.shift_hessian_bound) || p.shift_hessian_bound < 0.0)
    throw Error(ErrorKind::ParameterInfeasible, "K_sigma has not been measured");
  if (!(p.tau_bound < p.delta))
    throw Error(ErrorKind::ParameterInfeasible, "violated: tau_bound < delta (tau_bound=" +
                                                    detail::fmt(p.tau_bound) + ", delta=" + detail::fmt(p.delta) +
                                                    ")");
  if (!(2.0 * p.delta * p.shift_hessian_bound < 0.5 * m))
    throw Error(ErrorKind::ParameterInfeasible,
                "violated: 2·delta·K_sigma < m/2 (2·delta·K_sigma=" +
                    detail::fmt(2.0 * p.delta * p.shift_hessian_bound) + ", m/2=" + detail::fmt(0.5 * m) + ")");
  p.tau_slack = p.delta - p.tau_bound;
  p.absorption_slack = 0.5 * m - 2.0 * p.delta * p.shift_hessian_bound;
  return p;
}

/// sigma = 2 prod_k S(t_k) - 1 with t_k = m^V_k / (m^V_k - m^U_k), pairing
/// the k-th constraint of the inner domain with the k-th of the outer one.
/// Equal to 1 on the closure of U, -1 off V, smooth in between.
class ShiftProfile {
 public:
  ShiftProfile(Domain inner, Domain outer, const RegMaxKernel& k = default_kernel())
      : inner_(std::move(inner)), outer_(std::move(outer)), kernel_(&k) {
    if (inner_.dim() != outer_.dim()) throw Error(ErrorKind::InvalidArgument, "shift profile: dimension mismatch");
    if (inner_.constraints().size() != outer_.constraints().size() || inner_.constraints().empty())
      throw Error(ErrorKind::InvalidArgument,
                  "shift profile needs nested domains with the same number of constraints");
  }

  double operator()(const ComplexPoint& x) const {
    double prod = 1.0;
    const auto& ci = inner_.constraints();
    const auto& co = outer_.constraints();
    for (std::size_t k = 0; k < ci.size(); ++k) {
      const double mu = ci[k]->margin(x);
      if (mu >= 0.0) continue;
      const double mv = co[k]->margin(x);
      if (mv <= 0.0) return -1.0;
      prod *= kernel_->smoothstep(mv / (mv - mu));
    }
    return 2.0 * prod - 1.0;
  }

  ScalarField field() const {
    ShiftProfile s = *this;
    return ScalarField([s](const ComplexPoint& x) { return s(x); }, Domain::whole(inner_.dim()),
                       Domain::whole(inner_.dim()), "sigma");
  }

 private:
  Domain inner_, outer_;
  const RegMaxKernel* kernel_;
};

struct LocalSmoothing {
  ScalarField psi;
  ScalarField mollified;
  SmoothingParams params;  // with measured bounds and slacks
};

namespace detail {

inline constexpr std::size_t kNestingSamples = 512;

// Smallest margin of `outer` over samples of `inner`.
inline double sampled_nesting(const Domain& inner, const Domain& outer, std::size_t count = kNestingSamples) {
  auto pts = low_discrepancy_sample(inner, count, 400 * count);
  if (pts.empty()) throw Error(ErrorKind::InvalidArgument, "empty domain: " + inner.describe());
  double m = std::numeric_limits<double>::infinity();
  for (const auto& p : pts) m = std::min(m, outer.margin(p));
  return m;
}

inline void require_nesting(const ScalarField& phi, const NestedOpens& o, double eps) {
  if (o.U.dim() != phi.dim() || o.V.dim() != phi.dim() || o.W.dim() != phi.dim())
    throw Error(ErrorKind::InvalidArgument, "nested opens and potential differ in dimension");
  if (!(sampled_nesting(o.U, o.V) > 0.0)) throw Error(ErrorKind::InvalidArgument, "U is not compactly inside V");
  if (!(sampled_nesting(o.V, o.W) > 0.0)) throw Error(ErrorKind::InvalidArgument, "V is not compactly inside W");
  if (!(sampled_nesting(o.W, phi.valid_on()) > 0.0))
    throw Error(ErrorKind::OutOfDomain, "W leaves the domain of " + phi.label());
  if (!(sampled_nesting(o.V, phi.valid_on()) > eps))
    throw Error(ErrorKind::ParameterInfeasible, "eps too large: V plus an eps-collar leaves the domain of " +
                                                    phi.label());
}

}  // namespace detail

/// The local step with its measurements. probes: extra points of V where
/// tau is also measured (points of the branch locus, say). within: the part
/// of the chart that belongs to the manifold; tau, m and K_sigma are
/// measured on the shell V∖U inside it (a finite refinement has to let V
/// stick out of the manifold near its boundary).
inline LocalSmoothing smooth_locally(const ScalarField& phi, const NestedOpens& o, SmoothingParams p,
                                     const std::vector<ComplexPoint>& probes = {},
                                     const std::optional<Domain>& within = std::nullopt,
                                     const RegMaxKernel& k = default_kernel()) {
  p = validate_static(p);
  detail::require_nesting(phi, o, p.eps);
  const ShiftProfile sigma(o.U, o.V, k);

  const Domain shell = within ? Domain::intersection(Domain::minus(o.V, o.U), *within) : Domain::minus(o.V, o.U);
  std::vector<ComplexPoint> pts = low_discrepancy_sample(shell, p.shell_samples, 400 * p.shell_samples);
  if (pts.empty()) throw Error(ErrorKind::InvalidArgument, "V∖U has no sample points");

  std::vector<ComplexPoint> tau_pts = pts;
  for (const auto& q : probes)
    if (o.V.contains(q) && (!within || within->contains(q))) tau_pts.push_back(q);
  Mollification mol = mollify_with_bound(phi, p.eps, p.quad_order, tau_pts);

  // Margin and relative Hessian of the shift, measured on the mollified
  // potential (finite differences of phi itself are meaningless across its
  // kinks), on the shell where sigma varies.
  const double hs = p.stencil();
  const ScalarField sf = sigma.field();
  double m = std::numeric_limits<double>::infinity();
  std::vector<LeviMatrix> lphi;
  lphi.reserve(pts.size());
  for (const auto& x : pts) {
    lphi.push_back(levi_form(mol.field, x, hs));
    m = std::min(m, lphi.back().min_eigenvalue());
  }
  if (!(m > 0.0))
    throw Error(ErrorKind::MarginNonPositive,
                "psh margin of " + phi.label() + " on V∖U is not positive (m=" + detail::fmt(m) + ")");
  double krel = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    krel = std::max(krel, relative_bound(lphi[i].entries, levi_form(sf, pts[i], hs).entries));

  p.tau_bound = mol.tau;
  p.quadrature_gap = mol.quadrature_gap;
  p.relative_shift_bound = krel;
  p.shift_hessian_bound = m * krel;
  p = validate_params(m, p);

  const ScalarField phi_eps = mol.field;
  const Domain V = o.V;
  const double eta = p.eta, two_delta = 2.0 * p.delta;
  const RegMaxKernel* kp = &k;
  ScalarField psi(
      [phi, phi_eps, sigma, V, eta, two_delta, kp](const ComplexPoint& x) {
        if (!(V.margin(x) > 0.0)) return phi(x);
        return reg_max_scalar(phi(x), phi_eps(x) + two_delta * sigma(x), eta, *kp);
      },
      phi.valid_on(), std::nullopt, "smooth(" + phi.label() + ")");

  // Smooth on U, on Omega, and wherever phi is smooth off the closure of V.
  const Domain U = o.U;
  const std::optional<Domain> omega = o.Omega;
  const std::optional<Domain> phi_smooth = phi.smooth_on();
  Domain smooth = Domain::region(
      phi.dim(), "U ∪ Omega ∪ (smooth(phi)∖closure V)", phi.valid_on().center(), phi.valid_on().bbox(),
      [U, omega, phi_smooth, V](const ComplexPoint& x) {
        double s = U.margin(x);
        if (omega) s = std::max(s, omega->margin(x));
        if (phi_smooth) s = std::max(s, std::min(phi_smooth->margin(x), -V.margin(x)));
        return s;
      });
  return LocalSmoothing{psi.with_smooth_on(Domain::intersection(phi.valid_on(), smooth)), phi_eps, p};
}

/// psi: equal to phi off the closure of V, strictly psh, smooth on U ∪ Omega.
inline ScalarField local_smooth(const ScalarField& phi, const NestedOpens& opens, const SmoothingParams& params) {
  return smooth_locally(phi, opens, params).psi;
}

/// V'' ⋐ V' ⋐ V in the coordinates of one chart. The local step runs with
/// U = V'', V = V', W = V.
struct RefinementTriple {
  std::size_t chart = 0;
  Domain inner;   // V''
  Domain middle;  // V'
  Domain outer;   // V
  std::string label;
  std::vector<ComplexPoint> probes;  // extra tau measurement points
};

struct CorrectionStep {
  std::size_t index = 0;
  std::size_t chart = 0;
  std::string label;
  Domain support;                // V' in the step's chart; chi_n vanishes off it
  std::vector<ScalarField> chi;  // chi_n read in every chart
  SmoothingParams params;
};

/// chi = sum of the chi_n, read in every chart.
struct GluingCorrection {
  std::vector<CorrectionStep> steps;
  std::vector<ScalarField> chi;
};

struct GlueOptions {
  std::size_t coverage_samples = 4000;
  std::size_t containment_samples = 1000;
};

struct GlueResult {
  GluingCorrection correction;
  KahlerCocycle cocycle;
};

namespace detail {

inline Error at_step(std::size_t n, const Error& e) {
  return Error(e.kind(), "step " + std::to_string(n + 1) + ": " + e.what());
}

// chi_n in chart j: psi_new - phi_old at the image of x in the step's chart,
// zero where x has no image inside the step's outer domain.
inline ScalarField transported_correction(const Atlas& atlas, std::size_t j, std::size_t c, const ScalarField& psi,
                                          const ScalarField& old, const Domain& outer, const Domain& valid_j,
                                          const std::string& label) {
  if (j == c)
    return ScalarField([psi, old](const ComplexPoint& x) { return psi(x) - old(x); }, valid_j, std::nullopt,
                       label);
  return ScalarField(
      [atlas, j, c, psi, old, outer](const ComplexPoint& x) {
        auto y = atlas.map(j, c, x);
        if (!y || !outer.contains(*y)) return 0.0;
        return psi(*y) - old(*y);
      },
      valid_j, std::nullopt, label + "@" + atlas.chart(j).name);
}

inline ScalarField sum_fields(const std::vector<ScalarField>& parts, const Domain& valid, const std::string& label) {
  return ScalarField(
      [parts](const ComplexPoint& x) {
        double s = 0.0;
        for (const auto& f : parts) s += f(x);
        return s;
      },
      valid, std::nullopt, label);
}

}  // namespace detail

/// The gluing induction over a finite refinement. X1, X2 are given in every
/// chart; the manifold is the union of the cocycle's chart patches.
inline GlueResult global_glue(const KahlerCocycle& cocycle, const ChartSet& X1, const ChartSet& X2,
                              const std::vector<RefinementTriple>& refinement, const SmoothingParams& params,
                              const GlueOptions& opt = {}, const RegMaxKernel& k = default_kernel()) {
  const Atlas& atlas = cocycle.atlas();
  const std::size_t nc = cocycle.size();
  if (X1.in_chart.size() != nc || X2.in_chart.size() != nc)
    throw Error(ErrorKind::InvalidArgument, "X1 and X2 need one domain per chart");
  for (const auto& t : refinement)
    if (t.chart >= nc) throw Error(ErrorKind::InvalidArgument, "refinement triple '" + t.label + "' names no chart");
  validate_static(params);

  // The V'' sets must cover X2∖X1.
  for (std::size_t j = 0; j < nc; ++j) {
    const Domain gap =
        Domain::intersection(atlas.chart(j).patch, Domain::minus(X2.in_chart[j], X1.in_chart[j]));
    for (const auto& x : low_discrepancy_sample(gap, opt.coverage_samples, 200 * opt.coverage_samples)) {
      bool covered = false;
      for (const auto& t : refinement) {
        auto y = atlas.map(j, t.chart, x);
        if (y && t.inner.contains(*y)) {
          covered = true;
          break;
        }
      }
      if (!covered)
        throw Error(ErrorKind::Coverage, "X2∖X1 point " + x.str() + " of chart " + atlas.chart(j).name +
                                             " lies in no V'' of the refinement");
    }
  }

  std::vector<ScalarField> pots = cocycle.potentials();
  GluingCorrection corr;
  std::vector<std::vector<ScalarField>> chi_parts(nc);
  for (std::size_t n = 0; n < refinement.size(); ++n) {
    const RefinementTriple& t = refinement[n];
    const std::size_t c = t.chart;
    const Domain& patch = atlas.chart(c).patch;
    for (const auto& x : low_discrepancy_sample(Domain::intersection(t.outer, patch), opt.containment_samples,
                                                200 * opt.containment_samples))
      if (!X2.contains(c, x))
        throw Error(ErrorKind::InvalidArgument, "step " + std::to_string(n + 1) + ": V of triple '" + t.label +
                                                    "' leaves X2 at " + x.str());

    // Omega = V ∩ (X1 ∪ A_{n-1}), A_{n-1} the union of earlier V'' sets.
    Domain omega_base = X1.in_chart[c];
    if (n > 0) {
      std::vector<RefinementTriple> done(refinement.begin(), refinement.begin() + static_cast<std::ptrdiff_t>(n));
      const Domain A = Domain::region(
          atlas.dim(), "A_" + std::to_string(n), patch.center(), t.outer.bbox(),
          [atlas, c, done](const ComplexPoint& x) {
            double s = -std::numeric_limits<double>::infinity();
            for (const auto& d : done) {
              auto y = atlas.map(c, d.chart, x);
              if (y) s = std::max(s, d.inner.margin(*y));
            }
            return std::isfinite(s) ? s : -1.0;
          });
      omega_base = Domain::unite(omega_base, A);
    }
    NestedOpens opens{t.inner, t.middle, t.outer, Domain::intersection(t.outer, omega_base)};
    // The part of chart c that belongs to the manifold: points landing in
    // some chart patch. The local measurements only look there.
    const Domain manifold = Domain::region(atlas.dim(), "manifold", patch.center(), t.outer.bbox(),
                                           [atlas, c, nc](const ComplexPoint& x) {
                                             double s = -1.0;
                                             for (std::size_t j = 0; j < nc; ++j) {
                                               auto y = atlas.map(c, j, x);
                                               if (y) s = std::max(s, atlas.chart(j).patch.margin(*y));
                                             }
                                             return s;
                                           });

    LocalSmoothing ls = [&] {
      try {
        return smooth_locally(pots[c], opens, params, t.probes, manifold, k);
      } catch (const Error& e) {
        throw detail::at_step(n, e);
      }
    }();

    CorrectionStep step{n, c, t.label, t.middle, {}, ls.params};
    const ScalarField old = pots[c];
    for (std::size_t j = 0; j < nc; ++j)
      step.chi.push_back(detail::transported_correction(atlas, j, c, ls.psi, old, t.outer, pots[j].valid_on(),
                                                        "chi_" + std::to_string(n + 1)));
    for (std::size_t j = 0; j < nc; ++j) {
      chi_parts[j].push_back(step.chi[j]);
      pots[j] = j == c ? ls.psi : (pots[j] + step.chi[j]).with_label(pots[j].label() + "+chi");
    }
    corr.steps.push_back(std::move(step));
  }
  for (std::size_t j = 0; j < nc; ++j)
    corr.chi.push_back(detail::sum_fields(chi_parts[j], cocycle.potential(j).valid_on(), "chi"));
  return GlueResult{std::move(corr), cocycle.with_potentials(std::move(pots))};
}

/// sup |psi - reference| over a low-discrepancy sample of region; passes iff
/// the sup is exactly 0. When region meets `excluded` (the smoothing zone)
/// the check does not apply.
inline Check verify_agreement(const ScalarField& psi, const ScalarField& reference, const Domain& region,
                              std::size_t sample_count, const std::optional<Domain>& excluded = std::nullopt,
                              const std::string& name = "agreement_outside_N") {
  auto pts = low_discrepancy_sample(region, sample_count, 400 * sample_count + 1000);
  if (pts.empty()) throw Error(ErrorKind::EmptyGrid, "agreement region has no sample points");
  if (excluded)
    for (const auto& x : pts)
      if (excluded->contains(x))
        return Check::not_applicable(name, "region overlaps the smoothing zone at " + x.str());
  double sup = 0.0;
  for (const auto& x : pts) {
    if (!psi.valid_on().contains(x) || !reference.valid_on().contains(x))
      throw Error(ErrorKind::OutOfDomain, "agreement region leaves the field domains at " + x.str());
    sup = std::max(sup, std::abs(psi(x) - reference(x)));
  }
  return Check::make(name, sup, "==", 0.0, std::to_string(pts.size()) + " samples");
}

struct PushforwardOptions {
  GlueOptions glue;
  std::size_t agreement_samples = 10000;
  std::size_t positivity_samples = 1500;
  std::size_t containment_samples = 400;
  std::optional<Domain> mass_disk;  // one-dimensional bases: reference disk containing supp chi
  double mass_h = 0.0;              // stencil of the mass integral; 0 means params.h
  double overlap_tol = 1e-8;
};

struct SmoothedPushforward {
  KahlerCocycle raw;
  KahlerCocycle smoothed;
  GluingCorrection correction;
  VerificationReport report;
};

/// The pipeline: push the upstairs cocycle down, glue with X1 = base∖N̄',
/// X2 = N, and verify agreement outside N̄, positivity and mass.
inline SmoothedPushforward smooth_pushforward(const CoverSpec& cover, const KahlerCocycle& upstairs,
                                              const ChartSet& N, const ChartSet& Nprime,
                                              const std::vector<RefinementTriple>& refinement,
                                              const SmoothingParams& params, const PushforwardOptions& opt = {}) {
  const std::size_t nc = cover.downstairs().size();
  if (upstairs.size() != nc || cover.upstairs().size() != nc)
    throw Error(ErrorKind::InvalidArgument, "cover and upstairs cocycle have different chart counts");
  if (N.in_chart.size() != nc || Nprime.in_chart.size() != nc)
    throw Error(ErrorKind::InvalidArgument, "N and N' need one domain per chart");
  validate_static(params);

  for (std::size_t i = 0; i < nc; ++i) {
    const Domain np = Domain::intersection(Nprime.in_chart[i], cover.base(i));
    auto pts = low_discrepancy_sample(np, opt.containment_samples, 400 * opt.containment_samples);
    for (const auto& x : pts)
      if (!(N.in_chart[i].margin(x) > 0.0))
        throw Error(ErrorKind::ParameterInfeasible, "N′ ⋐ N violated at " + x.str());
    if (!pts.empty() && !(detail::sampled_nesting(np, N.in_chart[i]) > 0.0))
      throw Error(ErrorKind::ParameterInfeasible, "N′ ⋐ N violated");
  }

  // Fibers over each downstairs chart must stay in the upstairs chart.
  std::vector<ScalarField> down;
  for (std::size_t i = 0; i < nc; ++i) {
    const Domain& ext = cover.downstairs().chart(i).patch;
    const ScalarField& f = upstairs.potential(i);
    for (const auto& b : low_discrepancy_sample(ext, opt.containment_samples, 400 * opt.containment_samples))
      for (const auto& pt : cover.fiber(i, b).points)
        if (!f.valid_on().contains(pt.x))
          throw Error(ErrorKind::FiberContainment,
                      "fiber over " + b.str() + " leaves upstairs chart " + cover.upstairs().chart(i).name);
    down.push_back(pushforward(cover, f, i));
  }
  KahlerCocycle raw(cover.base_atlas(), down);

  ChartSet X1{"base∖closure(N')", {}}, X2{"N", {}};
  for (std::size_t i = 0; i < nc; ++i) {
    X1.in_chart.push_back(Domain::minus(cover.base(i), Nprime.in_chart[i]));
    X2.in_chart.push_back(Domain::intersection(cover.base(i), N.in_chart[i]));
  }
  GlueResult g = global_glue(raw, X1, X2, refinement, params, opt.glue);

  VerificationReport rep;
  rep.scenario = cover.describe();
  rep.params = params.to_json();
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : g.correction.steps) {
    auto j = s.params.to_json();
    j["triple"] = s.label;
    j["chart"] = s.chart;
    steps.push_back(std::move(j));
  }
  rep.params["steps"] = steps;

  for (std::size_t i = 0; i < nc; ++i) {
    const std::string sfx = nc > 1 ? "[" + cover.downstairs().chart(i).name + "]" : "";
    const Domain outside = Domain::minus(cover.base(i), N.in_chart[i]);
    rep.add(verify_agreement(g.cocycle.potential(i), raw.potential(i), outside, opt.agreement_samples,
                             std::nullopt, "agreement_outside_N" + sfx));
    auto pts = low_discrepancy_sample(cover.base(i).shrunk(2.0 * params.h), opt.positivity_samples,
                                      400 * opt.positivity_samples);
    for (double h : {params.h, 0.5 * params.h}) {
      const PshReport pr = min_levi_eigenvalue(g.cocycle.potential(i), pts, h);
      rep.add(Check::make("positivity_samples" + sfx + "@h=" + detail::fmt(h), pr.min_eigenvalue, ">", 0.0));
    }
  }
  if (opt.mass_disk) {
    const double mh = opt.mass_h > 0.0 ? opt.mass_h : params.h;
    const double before = mass_integral(raw.potential(0), *opt.mass_disk, mh);
    const double after = mass_integral(g.cocycle.potential(0), *opt.mass_disk, mh);
    rep.add(Check::make("mass_conservation", std::abs(after - before) / std::abs(before), "<=", 0.01,
                        "before=" + detail::fmt(before) + " after=" + detail::fmt(after)));
  }
  return SmoothedPushforward{std::move(raw), std::move(g.cocycle), std::move(g.correction), std::move(rep)};
}

/// Single-chart convenience form.
inline SmoothedPushforward smooth_pushforward(const CoverSpec& cover, const KahlerCocycle& upstairs, const Domain& N,
                                              const Domain& Nprime, const std::vector<RefinementTriple>& refinement,
                                              const SmoothingParams& params, const PushforwardOptions& opt = {}) {
  return smooth_pushforward(cover, upstairs, ChartSet{"N", {N}}, ChartSet{"N'", {Nprime}}, refinement, params, opt);
}

}  // namespace kahler
