#pragma once

#include "ibg/builders.hpp"

#include <atomic>
#include <cstdlib>
#include <optional>
#include <thread>

namespace ibg {

struct GridSpec {
  std::vector<int> n;  // points per axis
  Real margin_stencils = 3;
};

// Numbers are stored in double so that the serialized report is exact.
struct VerificationReport {
  std::string kind;
  GridSpec grid;
  double max = 0;
  double rms = 0;
  double tol = 0;
  std::optional<double> order;
  bool pass = false;
  std::vector<double> worst_point;
  int points = 0;
  int skipped = 0;
};

inline int worker_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("IBG_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) n = v;
  }
  return std::max(1, n);
}

// Evaluates f at every point; results are stored by index so the reduction is order independent.
template <class F>
std::vector<Real> parallel_eval(const std::vector<Vec>& pts, F&& f) {
  std::vector<Real> out(pts.size(), 0);
  std::vector<std::exception_ptr> errs(pts.size());
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i; (i = next.fetch_add(1)) < pts.size();) {
      try {
        out[i] = f(pts[i]);
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  };
  const int nw = std::min<int>(worker_count(), static_cast<int>(std::max<size_t>(1, pts.size())));
  std::vector<std::thread> pool;
  for (int k = 1; k < nw; ++k) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

inline Real stencil_reach(const FDConfig& cfg, int nesting = 2) {
  return nesting * stencil_for(cfg.order).half * cfg.h;
}

inline std::vector<Vec> grid_points(const Chart& c, const GridSpec& g, const FDConfig& cfg, int* skipped = nullptr,
                                    int nesting = 2) {
  if (static_cast<int>(g.n.size()) != c.dim) throw Error(Errc::BadParams, "grid dimension mismatch");
  const Real m = g.margin_stencils * stencil_reach(cfg, nesting);
  Vec lo = c.lo.array() + m, hi = c.hi.array() - m;
  for (int k = 0; k < c.dim; ++k)
    if (!(hi(k) >= lo(k))) throw Error(Errc::BadParams, "chart too small for grid margin");
  std::vector<Vec> pts;
  int skip = 0;
  std::vector<int> idx(c.dim, 0);
  while (true) {
    Vec p(c.dim);
    for (int k = 0; k < c.dim; ++k)
      p(k) = g.n[k] == 1 ? (lo(k) + hi(k)) / 2 : lo(k) + (hi(k) - lo(k)) * idx[k] / (g.n[k] - 1);
    bool bad = false;
    if (c.excluded) {
      for (int corner = 0; corner < (1 << c.dim) && !bad; ++corner) {
        Vec q = p;
        for (int k = 0; k < c.dim; ++k) q(k) += ((corner >> k) & 1 ? m : -m);
        bad = c.excluded(q);
      }
      bad = bad || c.excluded(p);
    }
    if (bad) ++skip;
    else pts.push_back(p);
    int k = 0;
    while (k < c.dim && ++idx[k] == g.n[k]) idx[k++] = 0;
    if (k == c.dim) break;
  }
  if (skipped) *skipped = skip;
  return pts;
}

inline VerificationReport make_report(std::string kind, const GridSpec& grid, Real tol, const std::vector<Vec>& pts,
                                      const std::vector<Real>& vals, int skipped) {
  VerificationReport r;
  r.kind = std::move(kind);
  r.grid = grid;
  r.tol = static_cast<double>(tol);
  r.points = static_cast<int>(pts.size());
  r.skipped = skipped;
  Real ss = 0, mx = 0;
  size_t worst = 0;
  for (size_t i = 0; i < vals.size(); ++i) {
    const Real v = std::isfinite(vals[i]) ? vals[i] : std::numeric_limits<Real>::infinity();
    ss += v * v;
    if (v > mx) {
      mx = v;
      worst = i;
    }
  }
  r.max = static_cast<double>(mx);
  r.rms = vals.empty() ? 0 : static_cast<double>(std::sqrt(ss / vals.size()));
  if (!pts.empty()) r.worst_point.assign(pts[worst].data(), pts[worst].data() + pts[worst].size());
  r.pass = !pts.empty() && r.max <= tol;
  return r;
}

enum class GeometryKind { EinsteinWeyl, Selfdual };

inline const char* geometry_kind_name(GeometryKind k) {
  return k == GeometryKind::EinsteinWeyl ? "einstein_weyl" : "selfdual";
}

// Pointwise normalized residual: |r0| resp. |W-| over max(1, |R|).
inline Real einstein_weyl_residual(const WeylStructure& ws, const Vec& p, const FDConfig& cfg = {}) {
  const CurvatureBundle cb = curvature(ws, p, cfg);
  return cb.r0_norm / std::max<Real>(1, cb.riemann_norm);
}

inline Real selfdual_residual(const MetricField& m, const Vec& p, const FDConfig& cfg = {}) {
  const CurvatureBundle cb = curvature(WeylStructure{m, {}}, p, cfg);
  return cb.wminus_norm / std::max<Real>(1, cb.riemann_norm);
}

inline VerificationReport verify_geometry(GeometryKind kind, const WeylStructure& ws, const GridSpec& grid, Real tol,
                                          const FDConfig& cfg = {}) {
  const int dim = ws.metric.chart.dim;
  if ((kind == GeometryKind::EinsteinWeyl && dim != 3) || (kind == GeometryKind::Selfdual && dim != 4))
    throw Error(Errc::BadParams, "object dimension does not match verification kind");
  int skipped = 0;
  const auto pts = grid_points(ws.metric.chart, grid, cfg, &skipped);
  const auto vals = parallel_eval(pts, [&](const Vec& p) {
    return kind == GeometryKind::EinsteinWeyl ? einstein_weyl_residual(ws, p, cfg)
                                              : selfdual_residual(ws.metric, p, cfg);
  });
  return make_report(geometry_kind_name(kind), grid, tol, pts, vals, skipped);
}

inline VerificationReport verify_geometry(GeometryKind kind, const MetricField& m, const GridSpec& grid, Real tol,
                                          const FDConfig& cfg = {}) {
  return verify_geometry(kind, WeylStructure{m, {}}, grid, tol, cfg);
}

// ---------- hyperCR ----------

struct HyperCRResidual {
  std::array<Real, 3> coframe{};  // |d chi_i + omega ^ chi_i - 2 kappa chi_j ^ chi_k|
  Real gt_derivative = 0;         // |*(d khat - omega khat) - F/2|
  Real gt_scalar = 0;             // |khat^2 - scal/6|
  Real max() const {
    return std::max({coframe[0], coframe[1], coframe[2], gt_derivative, gt_scalar});
  }
};

inline HyperCRResidual hypercr_residual(const WeylStructure& ws, const HyperCRData& d, const Vec& p,
                                        const FDConfig& cfg = {}) {
  HyperCRResidual r;
  const Mat g = ws.metric.g(p);
  const Vec w = ws.omega ? ws.omega(p) : Vec(Vec::Zero(3));
  if (d.chi[0]) {
    Mat eta(3, 3);
    for (int i = 0; i < 3; ++i) eta.row(i) = d.chi[i](p).transpose();
    const Mat G = eta * detail::inverse_checked(g) * eta.transpose();
    if ((G - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() > 1e-10L)
      throw Error(Errc::NonOrthonormalFrame, "chi is not orthonormal");
    const Real k = d.kappa ? d.kappa(p) : 0;
    for (int i = 0; i < 3; ++i) {
      const int j = (i + 1) % 3, l = (i + 2) % 3;
      const Mat R = exterior_d(d.chi[i], p, cfg) + wedge(w, eta.row(i).transpose()) -
                    2 * k * wedge(eta.row(j).transpose(), eta.row(l).transpose());
      r.coframe[i] = two_form_in_coframe(eta, R).norm() / std::sqrt(Real(2));
    }
  }
  if (d.kappa_hat) {
    const Real kh = d.kappa_hat(p);
    const Vec Dk = fd_gradient(d.kappa_hat, p, cfg) - w * kh;
    auto om = ws.omega ? ws.omega : std::function<Vec(const Vec&)>([](const Vec&) { return Vec(Vec::Zero(3)); });
    const Mat F = exterior_d(om, p, cfg);
    const Vec diff = Dk - hodge2_3d(g, 0.5L * F);
    r.gt_derivative = std::sqrt(std::abs(diff.dot(detail::inverse_checked(g) * diff)));
    const CurvatureBundle cb = curvature(ws, p, cfg);
    r.gt_scalar = std::abs(kh * kh - cb.scal / 6);
    const Real scale = std::max<Real>(1, cb.riemann_norm);
    r.gt_derivative /= scale;
    r.gt_scalar /= scale;
  }
  return r;
}

inline VerificationReport hypercr_check(const WeylStructure& ws, const HyperCRData& d, const GridSpec& grid, Real tol,
                                        const FDConfig& cfg = {}) {
  int skipped = 0;
  const auto pts = grid_points(ws.metric.chart, grid, cfg, &skipped);
  const auto vals = parallel_eval(pts, [&](const Vec& p) { return hypercr_residual(ws, d, p, cfg).max(); });
  return make_report("hypercr", grid, tol, pts, vals, skipped);
}

// ---------- PDE residuals ----------

enum class PdeKind { Toda, DKP, Heavenly1, Heavenly2, MNFrame };

inline const char* pde_kind_name(PdeKind k) {
  switch (k) {
    case PdeKind::Toda: return "toda";
    case PdeKind::DKP: return "dkp";
    case PdeKind::Heavenly1: return "heavenly1";
    case PdeKind::Heavenly2: return "heavenly2";
    case PdeKind::MNFrame: return "mn_frame";
  }
  return "?";
}

// Scalar data on a 4-chart ordered (w, z, x, y); the Poisson bracket uses the fibre coordinates (x, y).
struct HeavenlyData {
  int kind = 1;
  Chart chart;
  std::function<Real(const Vec&)> f;
};

namespace detail {
inline Real d2(const std::function<Real(const Vec&)>& f, const Vec& p, int a, int b, const FDConfig& c) {
  return fd_partial([&](const Vec& q) { return fd_partial(f, q, b, c.h, c.order); }, p, a, c.h, c.order);
}
}  // namespace detail

// toda on (x, y, z): u_xx + u_yy + (e^u)_zz.  dkp on (x, y, t): u_yy - (u_t - u u_x)_x.
inline Real pde_point_residual(PdeKind kind, const std::function<Real(const Vec&)>& u, const Vec& p,
                               const FDConfig& cfg = {}) {
  switch (kind) {
    case PdeKind::Toda: {
      auto eu = [&](const Vec& q) { return std::exp(u(q)); };
      return std::abs(detail::d2(u, p, 0, 0, cfg) + detail::d2(u, p, 1, 1, cfg) + detail::d2(eu, p, 2, 2, cfg));
    }
    case PdeKind::DKP: {
      auto flux = [&](const Vec& q) { return fd_partial(u, q, 2, cfg.h, cfg.order) - u(q) * fd_partial(u, q, 0, cfg.h, cfg.order); };
      return std::abs(detail::d2(u, p, 1, 1, cfg) - fd_partial(flux, p, 0, cfg.h, cfg.order));
    }
    default: throw Error(Errc::BadParams, "use the heavenly/frame overloads");
  }
}

inline Real heavenly_point_residual(const HeavenlyData& hd, const Vec& p, const FDConfig& cfg = {}) {
  const auto& f = hd.f;
  auto pb = [&](const std::function<Real(const Vec&)>& a, const std::function<Real(const Vec&)>& b) {
    return fd_partial(a, p, 2, cfg.h, cfg.order) * fd_partial(b, p, 3, cfg.h, cfg.order) -
           fd_partial(a, p, 3, cfg.h, cfg.order) * fd_partial(b, p, 2, cfg.h, cfg.order);
  };
  auto dk = [&](int k) { return std::function<Real(const Vec&)>([&f, k, cfg](const Vec& q) { return fd_partial(f, q, k, cfg.h, cfg.order); }); };
  if (hd.kind == 1) return std::abs(pb(dk(0), dk(1)) - 1);
  return std::abs(detail::d2(f, p, 2, 0, cfg) + detail::d2(f, p, 3, 1, cfg) - pb(dk(2), dk(3)));
}

inline VerificationReport pde_residual(PdeKind kind, const std::function<Real(const Vec&)>& u, const Chart& chart,
                                       const GridSpec& grid, Real tol, const FDConfig& cfg = {}) {
  int skipped = 0;
  const auto pts = grid_points(chart, grid, cfg, &skipped);
  const auto vals = parallel_eval(pts, [&](const Vec& p) { return pde_point_residual(kind, u, p, cfg); });
  return make_report(pde_kind_name(kind), grid, tol, pts, vals, skipped);
}

inline VerificationReport pde_residual(const HeavenlyData& hd, const GridSpec& grid, Real tol, const FDConfig& cfg = {}) {
  int skipped = 0;
  const auto pts = grid_points(hd.chart, grid, cfg, &skipped);
  const auto vals = parallel_eval(pts, [&](const Vec& p) { return heavenly_point_residual(hd, p, cfg); });
  return make_report(hd.kind == 1 ? "heavenly1" : "heavenly2", grid, tol, pts, vals, skipped);
}

inline VerificationReport pde_residual(const FrameField4& ff, const GridSpec& grid, Real tol, const FDConfig& cfg = {}) {
  int skipped = 0;
  const auto pts = grid_points(ff.chart, grid, cfg, &skipped, 1);
  const auto vals = parallel_eval(pts, [&](const Vec& p) {
    const auto r = mason_newman(ff, p, cfg);
    return std::max({r[0], r[1], r[2]});
  });
  return make_report("mn_frame", grid, tol, pts, vals, skipped);
}

// ---------- convergence ----------

struct ConvergenceResult {
  std::vector<Real> steps, residuals;
  Real order = 0;
  bool non_monotone = false;
};

inline ConvergenceResult convergence_study(const std::function<Real(Real)>& residual_at_h, std::vector<Real> steps) {
  if (steps.size() < 3) throw Error(Errc::BadParams, "need at least 3 step sizes");
  for (size_t i = 1; i < steps.size(); ++i)
    if (!(steps[i] < steps[i - 1])) throw Error(Errc::BadParams, "steps must decrease");
  ConvergenceResult r;
  r.steps = steps;
  for (Real h : steps) r.residuals.push_back(residual_at_h(h));
  for (size_t i = 1; i < r.residuals.size(); ++i)
    if (!(r.residuals[i] < r.residuals[i - 1])) r.non_monotone = true;
  // least-squares slope of log(res) against log(h)
  Real sx = 0, sy = 0, sxx = 0, sxy = 0;
  const Real n = static_cast<Real>(steps.size());
  for (size_t i = 0; i < steps.size(); ++i) {
    const Real x = std::log(steps[i]), y = std::log(std::max(r.residuals[i], std::numeric_limits<Real>::min()));
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  r.order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return r;
}

}  // namespace ibg
