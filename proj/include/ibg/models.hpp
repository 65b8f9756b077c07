#pragma once

#include "ibg/verify.hpp"

namespace ibg::models {

inline Vec vec3(Real a, Real b, Real c) { Vec v(3); v << a, b, c; return v; }
inline Vec vec4(Real a, Real b, Real c, Real d) { Vec v(4); v << a, b, c, d; return v; }

inline WeylStructure flat3(Real half = 1) {
  Chart c = make_chart({"x", "y", "z"}, {{-half, half}, {-half, half}, {-half, half}});
  return {{c, [](const Vec&) { return Mat(Mat::Identity(3, 3)); }, {3, 0}}, {}};
}

inline MetricField flat4(Real half = 1) {
  Chart c = make_chart({"t", "x", "y", "z"}, {{-half, half}, {-half, half}, {-half, half}, {-half, half}});
  return {c, [](const Vec&) { return Mat(Mat::Identity(4, 4)); }, {4, 0}};
}

// ---------- SU(2) in Euler angles (theta, phi, psi) ----------

// Left-invariant coframe with d sigma_1 = -sigma_2 ^ sigma_3 (cyclic); rows are sigma_i.
inline Mat3 su2_coframe(Real th, Real, Real ps) {
  Mat3 s;
  s << std::sin(ps), std::cos(ps) * std::sin(th), 0,
      -std::cos(ps), std::sin(ps) * std::sin(th), 0,
      0, std::cos(th), -1;
  return s;
}

// Dual left-invariant vector fields, [X_2, X_3] = X_1 (columns).
inline Mat3 su2_frame(Real th, Real ph, Real ps) { return su2_coframe(th, ph, ps).inverse(); }

// Round metric sum sigma_i^2 (the 3-sphere of radius 2).
inline Mat3 su2_round(Real th) {
  Mat3 g = Mat3::Zero();
  g(0, 0) = 1;
  g(1, 1) = 1;
  g(1, 2) = g(2, 1) = -std::cos(th);
  g(2, 2) = 1;
  return g;
}

// ---------- Gibbons-Hawking ----------

struct GHCenter {
  Vec3 c;
  Real m;
};

inline Real gh_potential(const std::vector<GHCenter>& cs, const Vec& x, Real v0 = 1) {
  Real V = v0;
  for (const auto& k : cs) V += k.m / (x - Vec(k.c)).norm();
  return V;
}

// Dirac potential with the string along the negative axis below each center.
inline Vec gh_connection(const std::vector<GHCenter>& cs, const Vec& x) {
  Vec A = Vec::Zero(3);
  for (const auto& k : cs) {
    const Real X = x(0) - k.c(0), Y = x(1) - k.c(1), Z = x(2) - k.c(2);
    // m (z/rho - 1)/(x^2 + y^2) = -m/(rho (rho + z)), regular on the upper axis
    const Real rho = std::sqrt(X * X + Y * Y + Z * Z);
    const Real f = -k.m / (rho * (rho + Z));
    A(0) += -f * Y;
    A(1) += f * X;
  }
  return A;
}

inline bool near_gh_singularity(const std::vector<GHCenter>& cs, const Vec& x, Real r_min) {
  for (const auto& k : cs) {
    const Real X = x(0) - k.c(0), Y = x(1) - k.c(1), Z = x(2) - k.c(2);
    if (std::sqrt(X * X + Y * Y + Z * Z) < r_min) return true;
    if (Z < r_min && std::sqrt(X * X + Y * Y) < r_min) return true;
  }
  return false;
}

inline Monopole gh_monopole(const std::vector<GHCenter>& cs, Real v0 = 1) {
  // on the base with c_B = V delta the representative in the t-gauge is Phi = sqrt(V)
  Monopole m;
  m.Phi = [cs, v0](const Vec& x, Real) { return std::sqrt(gh_potential(cs, x, v0)); };
  m.A = [cs](const Vec& x, Real) { return gh_connection(cs, x); };
  return m;
}

inline WeylStructure gh_base(const std::vector<GHCenter>& cs, const Chart& chart, Real v0 = 1) {
  WeylStructure w;
  w.metric = {chart, [cs, v0](const Vec& x) { return Mat(gh_potential(cs, x, v0) * Mat::Identity(3, 3)); }, {3, 0}};
  // D is the flat connection: omega = -d log sqrt(V) in the gauge V delta
  w.omega = [cs, v0](const Vec& x) {
    Vec g = Vec::Zero(3);
    const Real V = gh_potential(cs, x, v0);
    for (const auto& k : cs) {
      const Vec d = x - Vec(k.c);
      g += -k.m * d / std::pow(d.norm(), 3);
    }
    return Vec(-0.5L * g / V);
  };
  return w;
}

// g = V delta + V^{-1} (dt + A)^2 on (t, x, y, z)
inline MetricField gibbons_hawking(const std::vector<GHCenter>& cs, Real half = 3, Real r_min = 0.5, Real v0 = 1) {
  Chart base = make_chart({"x", "y", "z"}, {{-half, half}, {-half, half}, {-half, half}},
                          [cs, r_min](const Vec& x) { return near_gh_singularity(cs, x, r_min); });
  return sd_from_ew_monopole(gh_base(cs, base, v0), gh_monopole(cs, v0), {-1, 1});
}

inline std::vector<GHCenter> gh_single(Real m = 0.5) { return {{Vec3(0, 0, 0), m}}; }

// ---------- sphere families ----------

inline Complex zeta(Real th, Real ph) { return std::tan(th / 2) * std::exp(kI * ph); }

enum class HolKind { One, Zeta, Const };

struct Holomorphic {
  HolKind kind = HolKind::One;
  Complex c = 1;  // for Const
  Complex operator()(Complex z) const {
    switch (kind) {
      case HolKind::One: return 1;
      case HolKind::Zeta: return z;
      case HolKind::Const: return c;
    }
    return 1;
  }
};

// g = |h|^2 g_S2 + beta^2, beta = d psi + P d phi, on (theta, phi, psi).
inline WeylStructure ewgs(Holomorphic h, bool zero_omega = false) {
  Chart c = make_chart({"theta", "phi", "psi"}, {{0.2L, kPi - 0.2L}, {-1, 1}, {-1, 1}});
  auto P = [h](Real th, Real ph) -> Real {
    switch (h.kind) {
      case HolKind::One: return -std::cos(th);
      case HolKind::Const: return -h.c.real() * std::cos(th);
      case HolKind::Zeta: return (th - std::sin(th)) * std::cos(ph);
    }
    return 0;
  };
  WeylStructure w;
  w.metric.chart = c;
  w.metric.sig = {3, 0};
  w.metric.g = [h, P](const Vec& x) {
    const Real n = std::norm(h(zeta(x(0), x(1))));
    const Real p = P(x(0), x(1));
    Mat g = Mat::Zero(3, 3);
    g(0, 0) = n;
    g(1, 1) = n * std::pow(std::sin(x(0)), 2) + p * p;
    g(1, 2) = g(2, 1) = p;
    g(2, 2) = 1;
    return g;
  };
  if (!zero_omega)
    w.omega = [h, P](const Vec& x) {
      const Complex hv = h(zeta(x(0), x(1)));
      const Real f = hv.imag() / std::norm(hv);
      return vec3(0, f * P(x(0), x(1)), f);
    };
  return w;
}

// Gauduchon-Tod scalar for ewgs.
inline std::function<Real(const Vec&)> ewgs_kappa_hat(Holomorphic h) {
  return [h](const Vec& x) {
    const Complex hv = h(zeta(x(0), x(1)));
    return -hv.real() / (2 * std::norm(hv));
  };
}

// Natural coframe of ewgs with h = 1 (the round 3-sphere of radius 2): positively oriented
// left-invariant forms with d chi_i = 2 kappa chi_j ^ chi_k, on the chart (theta, phi, psi).
inline HyperCRData ewgs_round_hypercr() {
  HyperCRData d;
  for (int i = 0; i < 3; ++i)
    d.chi[i] = [i](const Vec& x) {
      Mat3 s;
      s << -std::sin(x(2)), -std::cos(x(2)) * std::sin(x(0)), 0,
          std::cos(x(2)), -std::sin(x(2)) * std::sin(x(0)), 0,
          0, -std::cos(x(0)), 1;
      return Vec(s.row(i).transpose());
    };
  d.kappa = [](const Vec&) { return Real(0.5); };
  d.kappa_hat = ewgs_kappa_hat({});
  return d;
}

// g = |t + h|^2 g_S2 + dt^2 on (theta, phi, t).
inline WeylStructure hcrtoda(Holomorphic h, bool zero_omega = false) {
  Chart c = make_chart({"theta", "phi", "t"}, {{0.2L, kPi - 0.2L}, {-1, 1}, {0.5, 2}});
  WeylStructure w;
  w.metric.chart = c;
  w.metric.sig = {3, 0};
  w.metric.g = [h](const Vec& x) {
    const Real n = std::norm(x(2) + h(zeta(x(0), x(1))));
    Mat g = Mat::Zero(3, 3);
    g(0, 0) = n;
    g(1, 1) = n * std::pow(std::sin(x(0)), 2);
    g(2, 2) = 1;
    return g;
  };
  if (!zero_omega)
    w.omega = [h](const Vec& x) {
      const Complex th = x(2) + h(zeta(x(0), x(1)));
      return vec3(0, 0, -2 * th.real() / std::norm(th));
    };
  return w;
}

inline std::function<Real(const Vec&)> hcrtoda_kappa_hat(Holomorphic h) {
  return [h](const Vec& x) {
    const Complex th = x(2) + h(zeta(x(0), x(1)));
    return -th.imag() / std::norm(th);
  };
}

// ---------- spinor-vortex spaces and Hitchin fields ----------

inline SpinorVortexSpace trivial_sv(Real half = 2) {
  SpinorVortexSpace sv;
  sv.kind = "trivial";
  sv.xr = {-half, half};
  sv.yr = {-half, half};
  return sv;
}

inline Real sc(Real x, Real y) { return 1 / (1 + x * x + y * y); }

// Round sphere in a stereographic coordinate with psi the holomorphic trivialization.
inline SpinorVortexSpace spherical_sv() {
  SpinorVortexSpace sv;
  sv.kind = "spherical";
  sv.xr = {-3, 3};
  sv.yr = {-3, 3};
  sv.sigma = [](Real x, Real y) { return 0.5L * std::log(2 * sc(x, y) * sc(x, y)); };
  sv.rho = [](Real x, Real y) { return std::log(2 / sc(x, y)); };
  sv.b = [](Real x, Real y) { return Complex(x, y) * sc(x, y); };
  sv.psi = [](Real x, Real y) { return Complex(sc(x, y)); };
  return sv;
}

// Unit disk with the hyperbolic metric and constant C.
inline SpinorVortexSpace hyperbolic_sv() {
  SpinorVortexSpace sv;
  sv.kind = "hyperbolic";
  sv.xr = {-0.6L, 0.6L};
  sv.yr = {-0.6L, 0.6L};
  sv.sigma = [](Real x, Real y) { return 0.5L * std::log(2 / std::pow(1 - x * x - y * y, 2)); };
  sv.rho = [](Real x, Real y) { return 0.5L * std::log(1 - x * x - y * y); };
  sv.C = [](Real, Real) { return Complex(1); };
  return sv;
}

// Phi = (t + i f)/sqrt 2, alpha = -i f_z with f = sin(sqrt 2 x), so Delta f = -2 f.
inline HitchinField affine_hitchin() {
  HitchinField hf;
  hf.sv = trivial_sv();
  hf.algebra = "aff";
  const Real k = std::sqrt(Real(2));
  hf.Phi = [k](const Vec3& p) { return Complex(p(2), std::sin(k * p(0))) / k; };
  hf.alpha = [k](const Vec3& p) { return Complex(0, -0.5L * k * std::cos(k * p(0))); };
  return hf;
}

inline Chart affine_chart() { return make_chart({"x", "y", "t"}, {{-1, 1}, {-1, 1}, {0.5, 3}}); }

// ewgs on the spherical spinor-vortex space: Phi = i h s, psi = s.
inline HitchinField ewgs_hitchin(Holomorphic h) {
  HitchinField hf;
  hf.sv = spherical_sv();
  hf.algebra = "abelian";
  hf.Phi = [h](const Vec3& p) { return kI * h(Complex(p(0), p(1))) * sc(p(0), p(1)); };
  if (h.kind == HolKind::Zeta) {
    hf.alpha = [](const Vec3& p) {
      const Real x = p(0), y = p(1), r = std::hypot(x, y);
      const Real F = 2 * x * (std::atan(r) - r / (1 + r * r)) / (r * r * r);
      return Complex(-y * F / 2, -x * F / 2);
    };
  } else {
    const Real re = h(0).real();
    hf.alpha = [re](const Vec3& p) { return re * Complex(0, -1) * Complex(p(0), -p(1)) * sc(p(0), p(1)); };
  }
  return hf;
}

inline Chart ewgs_hitchin_chart(Holomorphic h) {
  if (h.kind == HolKind::Zeta) return make_chart({"x", "y", "t"}, {{0.2L, 0.9L}, {-0.4L, 0.4L}, {-1, 1}});
  return make_chart({"x", "y", "t"}, {{-1, 1}, {-1, 1}, {-1, 1}});
}

// hcrtoda on the spherical spinor-vortex space: Phi = (t + h) s, psi = s, flat connection.
inline HitchinField hcrtoda_hitchin(Holomorphic h) {
  HitchinField hf;
  hf.sv = spherical_sv();
  hf.algebra = "aff";
  hf.Phi = [h](const Vec3& p) { return (p(2) + h(Complex(p(0), p(1)))) * sc(p(0), p(1)); };
  return hf;
}

inline Chart hcrtoda_hitchin_chart() { return make_chart({"x", "y", "t"}, {{-1, 1}, {-1, 1}, {0.5, 2}}); }

// ---------- dispersionless ----------

inline ScalarField toda_log_linear(Real a = 1, Real b = 0) {
  return {[a, b](const Vec& p) { return std::log(a * p(2) + b); },
          [a, b](const Vec& p) { return vec3(0, 0, a / (a * p(2) + b)); }};
}

inline Chart toda_chart() { return make_chart({"x", "y", "z"}, {{-1, 1}, {-1, 1}, {0.5, 2}}); }

inline ScalarField dkp_rational() {
  return {[](const Vec& p) { return -p(0) / p(2); },
          [](const Vec& p) { return vec3(-1 / p(2), 0, p(0) / (p(2) * p(2))); }};
}

inline Chart dkp_chart() { return make_chart({"x", "y", "t"}, {{-1, 1}, {-1, 1}, {0.5, 2}}); }

// ---------- Nahm data ----------

inline NahmField nahm_su2_pole() {
  NahmField nf;
  nf.algebra = su2_algebra();
  nf.riccati = closed_form(RiccatiType::Zero);
  const auto basis = nf.algebra.basis;
  nf.analytic = [basis](Real r) {
    Triple t;
    for (int i = 0; i < 3; ++i) t[i] = basis[i] * (-1 / r);
    return t;
  };
  return nf;
}

inline Triple euler_top_initial(const Vec3& f) {
  const auto su2 = su2_algebra();
  return {su2.basis[0] * f(0), su2.basis[1] * f(1), su2.basis[2] * f(2)};
}

// Coefficients f_i of Phi_i = f_i e_i, using tr(e_i e_i) = -1/2.
inline Vec3 euler_coefficients(const Triple& P) {
  const auto su2 = su2_algebra();
  Vec3 f;
  for (int i = 0; i < 3; ++i) f(i) = -2 * (P[i] * su2.basis[i]).trace().real();
  return f;
}

// ---------- SDiff Nahm data ----------

// Coordinates of the unit sphere in terms of (p, q) = (phi, cos theta), so {x_1, x_2} = x_3 cyclically.
inline Vec3 sphere_xyz(Real p, Real q) {
  const Real s = std::sqrt(std::max<Real>(0, 1 - q * q));
  return Vec3(s * std::cos(p), s * std::sin(p), q);
}

// F^i = f(r) x_i with f = -1/r: an SDiff Nahm field with B = 0, on (p, q, r).
inline HamiltonianNahm sdiff_rotation() {
  HamiltonianNahm hn;
  hn.F = [](const Vec3& x) { return Vec3(-sphere_xyz(x(0), x(1)) / x(2)); };
  return hn;
}

inline Chart sdiff_chart() { return make_chart({"r", "p", "q"}, {{0.8L, 1.6L}, {-1, 1}, {-0.6L, 0.6L}}); }

// The same rotation fields written in (p, q) = (theta, phi), which do not preserve dp ^ dq.
inline DiffNahm diff_rotation() {
  DiffNahm dn;
  dn.fields = [](const Vec3& x) {
    const Real r = x(0), th = x(1), ph = x(2), cot = std::cos(th) / std::sin(th);
    Mat32 m;
    m << std::sin(ph), cot * std::cos(ph),
        -std::cos(ph), cot * std::sin(ph),
        0, -1;
    return Mat32(m / r);
  };
  return dn;
}

inline Chart diff_rotation_chart() { return make_chart({"r", "theta", "phi"}, {{0.8L, 1.6L}, {0.7L, 2.4L}, {-1, 1}}); }

// Rotation Hamiltonians F^i = f_i(t) x_i on the projective type-D Riccati space
// (a = 1/3, B = diag(1/6, 1/6, -1/3)); f solves f_1' = (1/2) f_1 + f_2 f_3 and cyclic.
inline Vec3 tod_coefficients(Real t, Real t0 = 0, Vec3 f0 = Vec3(0.6L, 0.4L, 0.5L), int steps = 600) {
  const Vec3 lam(0.5L, 0.5L, 0);
  auto rhs = [&](const Vec3& f) { return Vec3(lam(0) * f(0) + f(1) * f(2), lam(1) * f(1) + f(2) * f(0), lam(2) * f(2) + f(0) * f(1)); };
  Vec3 f = f0;
  const Real h = (t - t0) / steps;
  for (int k = 0; k < steps && h != 0; ++k) {
    const Vec3 k1 = rhs(f), k2 = rhs(f + h / 2 * k1), k3 = rhs(f + h / 2 * k2), k4 = rhs(f + h * k3);
    f += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return f;
}

inline CMat3 toda_riccati_B(Real = 0) {
  CMat3 B = CMat3::Zero();
  B(0, 0) = B(1, 1) = Real(1) / 6;
  B(2, 2) = -Real(1) / 3;
  return B;
}

inline Chart tod_chart() { return make_chart({"r", "p", "q"}, {{-0.8L, 0.4L}, {-1, 1}, {-0.6L, 0.6L}}); }

inline HamiltonianNahm tod_so3() {
  HamiltonianNahm hn;
  hn.a = Real(1) / 3;
  hn.B = toda_riccati_B;
  hn.F = [](const Vec3& x) { return Vec3(tod_coefficients(x(2)).cwiseProduct(sphere_xyz(x(0), x(1)))); };
  return hn;
}

// Toda hodograph data: F = (e^{t/2} p, e^{t/2} q, e^t), i.e. x = p, y = q, z = e^t, u = t.
inline HamiltonianNahm toda_hamiltonian() {
  HamiltonianNahm hn;
  hn.a = Real(1) / 3;
  hn.B = toda_riccati_B;
  hn.F = [](const Vec3& x) { const Real e = std::exp(x(2) / 2); return Vec3(e * x(0), e * x(1), e * e); };
  return hn;
}

inline HodographBundle toda_hodograph() {
  HodographBundle hb;
  hb.theta = [](Real t) {
    CMat3 th = CMat3::Identity();
    th(0, 0) = th(1, 1) = std::exp(t / 2);
    return th;
  };
  hb.x = [](const Vec3& x) { return Vec3(x(0), x(1), std::exp(x(2))); };
  hb.u = [](const Vec3& x) { return x(2); };
  return hb;
}

inline std::function<CMat3(Real)> toda_framing() {
  return [](Real u) {
    CMat3 th = CMat3::Identity();
    th(0, 0) = th(1, 1) = std::exp(u / 2);
    return th;
  };
}

// theta = I - u M with M = [[1, i], [i, -1]] nilpotent, so that sum (theta dx)^2 is the dKP metric
// under -sqrt2 t = x1 + i x2, 2 sqrt2 x = x1 - i x2, y = x3.
inline std::function<CMat3(Real)> dkp_framing() {
  return [](Real u) {
    CMat3 th = CMat3::Identity();
    th(0, 0) = 1 - u;
    th(0, 1) = th(1, 0) = -kI * u;
    th(1, 1) = 1 + u;
    return th;
  };
}

// The framing rows (1+u, 2iu, 0), (2iu, 1-u, 0), (0, 0, 1) as printed.
inline std::function<CMat3(Real)> dkp_framing_printed() {
  return [](Real u) {
    CMat3 th = CMat3::Identity();
    th(0, 0) = 1 + u;
    th(0, 1) = th(1, 0) = Real(2) * kI * u;
    th(1, 1) = 1 - u;
    return th;
  };
}

// ---------- hypercomplex frames ----------

// AJS frame (d_r, X_1/r, X_2/r, X_3/r) from the su(2) Nahm solution -e_i/r acting through
// left-invariant fields, on (r, theta, phi, psi).
inline Nahm3Data ajs_nahm3() {
  Nahm3Data d;
  d.chart = make_chart({"r", "theta", "phi", "psi"}, {{0.8L, 1.6L}, {0.3L, kPi - 0.3L}, {-1, 1}, {-1, 1}});
  d.Phi = [](int i, Real r, const Vec3& x) { return Vec3(su2_frame(x(0), x(1), x(2)).col(i) / r); };
  return d;
}

inline FrameField4 ajs_frame() { return frame_from_nahm3(ajs_nahm3()); }

inline FrameField4 coordinate_frame4() {
  FrameField4 ff;
  ff.chart = flat4().chart;
  for (int i = 0; i < 4; ++i) ff.V[i] = [i](const Vec&) { Vec v = Vec::Zero(4); v(i) = 1; return v; };
  return ff;
}

// ---------- Bianchi IX ----------

struct BianchiIX {
  BianchiState s0{Vec3(1.0L, 1.2L, 0.8L), Vec3(0.3L, -0.1L, 0.2L)};
  Real t0 = 0;
  int steps_per_unit = 400;

  BianchiState at(Real t) const {
    // step count fixed per unit interval so that the state is smooth in t
    const int n = steps_per_unit * std::max(1, static_cast<int>(std::ceil(std::abs(t - t0))));
    return integrate_bianchi(s0, t0, t, n);
  }
};

// g = w1 w2 w3 dt^2 + sum (w_j w_k / w_i) sigma_i^2 on (t, phi, theta, psi); with this
// coordinate order the metric is anti-selfdual in the kOrientation convention.
inline MetricField bianchi_ix_metric(const BianchiIX& b, std::pair<Real, Real> trange = {-0.2L, 0.2L}) {
  Chart c = make_chart({"t", "phi", "theta", "psi"},
                       {trange, {-1, 1}, {0.3L, kPi - 0.3L}, {-1, 1}});
  return {c, [b](const Vec& x) {
            const Vec3 w = b.at(x(0)).w;
            Mat3 sg = su2_coframe(x(2), x(1), x(3));
            sg.col(0).swap(sg.col(1));
            const Vec3 c(w(1) * w(2) / w(0), w(2) * w(0) / w(1), w(0) * w(1) / w(2));
            Mat g = Mat::Zero(4, 4);
            g(0, 0) = w.prod();
            g.block(1, 1, 3, 3) = sg.transpose() * c.asDiagonal() * sg;
            return g;
          }, {4, 0}};
}

// Flat metric plus a compactly supported bump eps * b(x) dx^0 dx^1, which is not selfdual.
inline MetricField bump_flat(Real eps = 0.05L) {
  return {flat4().chart, [eps](const Vec& x) {
            const Real s = x.squaredNorm();
            const Real b = s < 1 ? std::exp(-1 / (1 - s)) * std::exp(Real(1)) : 0;
            Mat g = Mat::Identity(4, 4);
            g(0, 1) = g(1, 0) = eps * b * (1 + x(2));
            g(2, 2) += eps * b * x(3);
            return g;
          }, {4, 0}};
}

}  // namespace ibg::models
