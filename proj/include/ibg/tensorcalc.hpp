#pragma once

#include "ibg/core.hpp"

#include <algorithm>
#include <optional>

namespace ibg {

// Flip to -1 to reverse the orientation used by every Hodge star in the library.
inline constexpr int kOrientation = 1;

struct Chart {
  int dim = 3;
  std::vector<std::string> names;
  Vec lo, hi;
  std::function<bool(const Vec&)> excluded;  // true on coordinate singularities

  bool inside(const Vec& p) const {
    for (int i = 0; i < dim; ++i)
      if (p(i) < lo(i) || p(i) > hi(i)) return false;
    return true;
  }
  bool is_excluded(const Vec& p) const { return excluded && excluded(p); }
};

inline Chart make_chart(std::vector<std::string> names, std::vector<std::pair<Real, Real>> box,
                        std::function<bool(const Vec&)> excl = {}) {
  Chart c;
  c.dim = static_cast<int>(names.size());
  if (c.dim != 3 && c.dim != 4) throw Error(Errc::BadParams, "chart dimension must be 3 or 4");
  if (box.size() != names.size()) throw Error(Errc::BadParams, "box/name size mismatch");
  c.names = std::move(names);
  c.lo.resize(c.dim);
  c.hi.resize(c.dim);
  for (int i = 0; i < c.dim; ++i) {
    if (!(box[i].first < box[i].second)) throw Error(Errc::BadParams, "empty domain box");
    c.lo(i) = box[i].first;
    c.hi(i) = box[i].second;
  }
  c.excluded = std::move(excl);
  return c;
}

struct Signature {
  int pos = 3;
  int neg = 0;
  bool riemannian() const { return neg == 0; }
};

struct MetricField {
  Chart chart;
  std::function<Mat(const Vec&)> g;
  Signature sig;
};

struct WeylStructure {
  MetricField metric;
  std::function<Vec(const Vec&)> omega;  // empty means omega = 0
  int dim() const { return metric.chart.dim; }
};

struct FDConfig {
  Real h = 1e-3L;
  int order = 4;
};

// Scalar field with an optional analytic gradient.
struct ScalarField {
  std::function<Real(const Vec&)> eval;
  std::function<Vec(const Vec&)> grad;
};

inline Vec fd_gradient(const std::function<Real(const Vec&)>& f, const Vec& p, const FDConfig& cfg) {
  Vec out(p.size());
  for (int k = 0; k < p.size(); ++k) out(k) = fd_partial(f, p, k, cfg.h, cfg.order);
  return out;
}

// Fixed-capacity tensors (n <= 4) so stencils stay allocation free.
struct T3 {
  int n = 0;
  std::array<Real, 64> v{};
  explicit T3(int n_ = 0) : n(n_) {}
  Real& operator()(int a, int b, int c) { return v[(a * 4 + b) * 4 + c]; }
  Real operator()(int a, int b, int c) const { return v[(a * 4 + b) * 4 + c]; }
  T3 operator+(const T3& o) const { T3 r(n); for (size_t i = 0; i < v.size(); ++i) r.v[i] = v[i] + o.v[i]; return r; }
  T3 operator-(const T3& o) const { T3 r(n); for (size_t i = 0; i < v.size(); ++i) r.v[i] = v[i] - o.v[i]; return r; }
  T3 operator*(Real s) const { T3 r(n); for (size_t i = 0; i < v.size(); ++i) r.v[i] = v[i] * s; return r; }
};

struct T4 {
  int n = 0;
  std::array<Real, 256> v{};
  explicit T4(int n_ = 0) : n(n_) {}
  Real& operator()(int a, int b, int c, int d) { return v[((a * 4 + b) * 4 + c) * 4 + d]; }
  Real operator()(int a, int b, int c, int d) const { return v[((a * 4 + b) * 4 + c) * 4 + d]; }
  Real frob() const {
    Real s = 0;
    for (Real x : v) s += x * x;
    return std::sqrt(s);
  }
};

inline int levi_civita(const std::array<int, 4>& idx, int n) {
  int sgn = 1;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (idx[i] == idx[j]) return 0;
      if (idx[i] > idx[j]) sgn = -sgn;
    }
  return sgn;
}

inline int eps3(int a, int b, int c) { return levi_civita({a, b, c, 0}, 3); }
inline int eps4(int a, int b, int c, int d) { return levi_civita({a, b, c, d}, 4); }

namespace detail {

inline Mat inverse_checked(const Mat& g) {
  Real det = g.determinant();
  Real scale = std::pow(g.cwiseAbs().maxCoeff(), static_cast<Real>(g.rows()));
  if (!std::isfinite(det) || std::abs(det) <= 1e-14L * std::max<Real>(scale, 1e-300L))
    throw Error(Errc::SingularMetric, "metric not invertible");
  return g.inverse();
}

inline void check_point(const Chart& c, const Vec& p) {
  if (p.size() != c.dim) throw Error(Errc::OutOfDomain, "point dimension mismatch");
  if (!c.inside(p)) throw Error(Errc::OutOfDomain, "point outside chart box");
  if (c.is_excluded(p)) throw Error(Errc::OutOfDomain, "point in excluded region");
}

inline void check_stencil(const Chart& c, const Vec& p, Real reach) {
  for (int i = 0; i < c.dim; ++i)
    if (p(i) - reach < c.lo(i) || p(i) + reach > c.hi(i))
      throw Error(Errc::StencilOverflow, "stencil leaves chart box along " + c.names[i]);
}

inline T3 connection_raw(const WeylStructure& ws, const Vec& p, const FDConfig& cfg) {
  const int n = ws.dim();
  const Mat g = ws.metric.g(p);
  const Mat gi = inverse_checked(g);
  std::array<Mat, 4> dg;
  for (int k = 0; k < n; ++k) dg[k] = fd_partial(ws.metric.g, p, k, cfg.h, cfg.order);
  T3 G(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        Real s = 0;
        for (int d = 0; d < n; ++d) s += gi(a, d) * (dg[b](d, c) + dg[c](d, b) - dg[d](b, c));
        G(a, b, c) = 0.5L * s;
      }
  if (ws.omega) {
    const Vec w = ws.omega(p);
    const Vec wu = gi * w;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          G(a, b, c) += (a == b ? w(c) : 0) + (a == c ? w(b) : 0) - g(b, c) * wu(a);
  }
  return G;
}

// R^a_{bcd} = d_c G^a_{db} - d_d G^a_{cb} + G^a_{ce} G^e_{db} - G^a_{de} G^e_{cb}
inline T4 riemann_raw(const WeylStructure& ws, const Vec& p, const FDConfig& cfg, T3* gamma_out) {
  const int n = ws.dim();
  const T3 G = connection_raw(ws, p, cfg);
  std::array<T3, 4> dG;
  auto conn = [&](const Vec& q) { return connection_raw(ws, q, cfg); };
  for (int k = 0; k < n; ++k) dG[k] = fd_partial(conn, p, k, cfg.h, cfg.order);
  T4 R(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          Real s = dG[c](a, d, b) - dG[d](a, c, b);
          for (int e = 0; e < n; ++e) s += G(a, c, e) * G(e, d, b) - G(a, d, e) * G(e, c, b);
          R(a, b, c, d) = s;
        }
  if (gamma_out) *gamma_out = G;
  return R;
}

}  // namespace detail

// Frame E with E^T g E = diag(+-1), positively oriented in coordinate order.
struct Frame {
  Mat E;
  Vec eta;
};

inline Frame pseudo_orthonormal_frame(const Mat& g) {
  Eigen::SelfAdjointEigenSolver<Mat> es(g);
  const Vec lam = es.eigenvalues();
  Mat Q = es.eigenvectors();
  Frame f;
  const int n = static_cast<int>(g.rows());
  f.E.resize(n, n);
  f.eta.resize(n);
  for (int i = 0; i < n; ++i) {
    if (lam(i) == 0) throw Error(Errc::SingularMetric, "zero eigenvalue");
    f.eta(i) = lam(i) > 0 ? 1 : -1;
    f.E.col(i) = Q.col(i) / std::sqrt(std::abs(lam(i)));
  }
  if (f.E.determinant() < 0) f.E.col(0) = -f.E.col(0);
  return f;
}

inline int signature_neg(const Mat& g) {
  Eigen::SelfAdjointEigenSolver<Mat> es(g);
  int neg = 0;
  for (int i = 0; i < g.rows(); ++i)
    if (es.eigenvalues()(i) < 0) ++neg;
  return neg;
}

// Project all four slots of a lowered tensor into the frame.
inline T4 to_frame(const T4& T, const Mat& E) {
  const int n = T.n;
  T4 A(n), B(n);
  for (int i = 0; i < n; ++i)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          Real s = 0;
          for (int a = 0; a < n; ++a) s += T(a, b, c, d) * E(a, i);
          A(i, b, c, d) = s;
        }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          Real s = 0;
          for (int b = 0; b < n; ++b) s += A(i, b, c, d) * E(b, j);
          B(i, j, c, d) = s;
        }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int d = 0; d < n; ++d) {
          Real s = 0;
          for (int c = 0; c < n; ++c) s += B(i, j, c, d) * E(c, k);
          A(i, j, k, d) = s;
        }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Real s = 0;
          for (int d = 0; d < n; ++d) s += A(i, j, k, d) * E(d, l);
          B(i, j, k, l) = s;
        }
  return B;
}

struct CurvatureBundle {
  int n = 0;
  Mat g, ginv;
  T3 gamma;       // Gamma^D{}^a_{bc}
  T4 riemann;     // R^D{}^a_{bcd}
  Mat ricci;      // R^D_{bd} = R^a_{bad}, not symmetric in general
  Mat r0;         // Sym_0(ricci)
  Real scal = 0;  // g^{bd} ricci_{bd}
  Mat F;          // d omega
  T4 weyl;        // C_{abcd} of the metric representative (conformally invariant)
  Real riemann_norm = 0;  // frame norm of R^D
  Real r0_norm = 0;       // frame norm of r0
  Real wplus_norm = 0;
  Real wminus_norm = 0;
};

inline T3 weyl_connection(const WeylStructure& ws, const Vec& p, const FDConfig& cfg) {
  detail::check_point(ws.metric.chart, p);
  detail::check_stencil(ws.metric.chart, p, stencil_for(cfg.order).half * cfg.h);
  return detail::connection_raw(ws, p, cfg);
}

namespace detail {

inline T4 lower_first(const T4& R, const Mat& g) {
  const int n = R.n;
  T4 L(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          Real s = 0;
          for (int e = 0; e < n; ++e) s += g(a, e) * R(e, b, c, d);
          L(a, b, c, d) = s;
        }
  return L;
}

// Weyl tensor from a Levi-Civita Riemann tensor with R_{bd} = R^a_{bad}.
inline T4 weyl_from_riemann(const T4& R, const Mat& g, const Mat& gi) {
  const int n = R.n;
  T4 L = lower_first(R, g);
  T4 C(n);
  if (n < 4) return C;  // identically zero in dimension 3
  Mat ric = Mat::Zero(n, n);
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d)
      for (int a = 0; a < n; ++a) ric(b, d) += R(a, b, a, d);
  ric = 0.5L * (ric + ric.transpose()).eval();
  Real sc = (gi.array() * ric.array()).sum();
  const Real k1 = 1.0L / (n - 2), k2 = sc / ((n - 1) * (n - 2));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          C(a, b, c, d) = L(a, b, c, d) -
                          k1 * (g(a, c) * ric(d, b) - g(a, d) * ric(c, b) - g(b, c) * ric(d, a) +
                                g(b, d) * ric(c, a)) +
                          k2 * (g(a, c) * g(d, b) - g(a, d) * g(c, b));
  return C;
}

// Apply P(sign) = (1 + sign *)/2 to both pairs of a frame tensor, Riemannian dim 4.
inline T4 project_pairs(const T4& W, int sign) {
  T4 X(4), Y(4);
  const Real s = static_cast<Real>(sign * kOrientation);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          Real t = 0;
          for (int m = 0; m < 4; ++m)
            for (int q = 0; q < 4; ++q) t += eps4(i, j, m, q) * W(m, q, k, l);
          X(i, j, k, l) = 0.5L * (W(i, j, k, l) + s * 0.5L * t);
        }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          Real t = 0;
          for (int m = 0; m < 4; ++m)
            for (int q = 0; q < 4; ++q) t += X(i, j, m, q) * eps4(m, q, k, l);
          Y(i, j, k, l) = 0.5L * (X(i, j, k, l) + s * 0.5L * t);
        }
  return Y;
}

}  // namespace detail

inline CurvatureBundle curvature(const WeylStructure& ws, const Vec& p, const FDConfig& cfg) {
  const Chart& ch = ws.metric.chart;
  detail::check_point(ch, p);
  detail::check_stencil(ch, p, 2 * stencil_for(cfg.order).half * cfg.h);
  const int n = ws.dim();
  CurvatureBundle cb;
  cb.n = n;
  cb.g = ws.metric.g(p);
  cb.ginv = detail::inverse_checked(cb.g);
  cb.riemann = detail::riemann_raw(ws, p, cfg, &cb.gamma);
  cb.ricci = Mat::Zero(n, n);
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d)
      for (int a = 0; a < n; ++a) cb.ricci(b, d) += cb.riemann(a, b, a, d);
  Mat sym = 0.5L * (cb.ricci + cb.ricci.transpose());
  cb.scal = (cb.ginv.array() * sym.array()).sum();
  cb.r0 = sym - (cb.scal / n) * cb.g;
  cb.F = Mat::Zero(n, n);
  if (ws.omega) {
    for (int a = 0; a < n; ++a) {
      Vec dw = fd_partial(ws.omega, p, a, cfg.h, cfg.order);
      for (int b = 0; b < n; ++b) {
        cb.F(a, b) += dw(b);
        cb.F(b, a) -= dw(b);
      }
    }
  }
  const Frame fr = pseudo_orthonormal_frame(cb.g);
  cb.riemann_norm = to_frame(detail::lower_first(cb.riemann, cb.g), fr.E).frob();
  cb.r0_norm = (fr.E.transpose() * cb.r0 * fr.E).norm();
  if (n == 4) {
    T4 Rg = cb.riemann;
    if (ws.omega) {
      WeylStructure lc{ws.metric, {}};
      Rg = detail::riemann_raw(lc, p, cfg, nullptr);
    }
    cb.weyl = detail::weyl_from_riemann(Rg, cb.g, cb.ginv);
    if (ws.metric.sig.riemannian()) {
      T4 Wf = to_frame(cb.weyl, fr.E);
      cb.wplus_norm = detail::project_pairs(Wf, +1).frob();
      cb.wminus_norm = detail::project_pairs(Wf, -1).frob();
    }
  } else {
    cb.weyl = T4(n);
  }
  return cb;
}

inline Real asd_weyl_norm(const MetricField& m, const Vec& p, const FDConfig& cfg) {
  if (m.chart.dim != 4) throw Error(Errc::BadParams, "asd_weyl_norm needs dimension 4");
  return curvature(WeylStructure{m, {}}, p, cfg).wminus_norm;
}

// Hodge star of a 2-form (antisymmetric matrix) in dimension 4.
struct SdAsd {
  Mat star, plus, minus;
};

inline Mat hodge2_4d(const Mat& g, const Mat& phi) {
  const Mat gi = detail::inverse_checked(g);
  const Mat up = gi * phi * gi.transpose();
  const Real vol = std::sqrt(std::abs(g.determinant())) * kOrientation;
  Mat out = Mat::Zero(4, 4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      Real s = 0;
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) s += eps4(a, b, c, d) * up(c, d);
      out(a, b) = 0.5L * vol * s;
    }
  return out;
}

// Dimension 3: 2-form -> 1-form and 1-form -> 2-form.
inline Vec hodge2_3d(const Mat& g, const Mat& phi) {
  const Mat gi = detail::inverse_checked(g);
  const Mat up = gi * phi * gi.transpose();
  const Real vol = std::sqrt(std::abs(g.determinant())) * kOrientation;
  Vec out = Vec::Zero(3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) out(a) += 0.5L * vol * eps3(a, b, c) * up(b, c);
  return out;
}

inline Mat hodge1_3d(const Mat& g, const Vec& alpha) {
  const Mat gi = detail::inverse_checked(g);
  const Vec up = gi * alpha;
  const Real vol = std::sqrt(std::abs(g.determinant())) * kOrientation;
  Mat out = Mat::Zero(3, 3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) out(b, c) += vol * eps3(a, b, c) * up(a);
  return out;
}

inline SdAsd hodge_sd_asd(const MetricField& m, const Vec& p, const Mat& phi) {
  const Mat g = m.g(p);
  SdAsd r;
  if (m.chart.dim == 3) {
    Vec s = hodge2_3d(g, phi);
    r.star = Mat(s);
    return r;
  }
  r.star = hodge2_4d(g, phi);
  if (m.sig.riemannian()) {
    r.plus = 0.5L * (phi + r.star);
    r.minus = phi - r.plus;
  }
  return r;
}

// |phi|^2 = (1/2) phi_{ab} phi^{ab}
inline Real two_form_norm(const Mat& g, const Mat& phi) {
  const Mat gi = detail::inverse_checked(g);
  const Mat up = gi * phi * gi.transpose();
  return std::sqrt(std::abs(0.5L * (up.array() * phi.array()).sum()));
}

}  // namespace ibg
