#pragma once

#include "ibg/gauge.hpp"

namespace ibg {

using Vec4 = Eigen::Matrix<Real, 4, 1>;
using Mat32 = Eigen::Matrix<Real, 3, 2>;

// ---------- small form helpers ----------

inline Mat wedge(const Vec& a, const Vec& b) { return a * b.transpose() - b * a.transpose(); }

inline Mat exterior_d(const std::function<Vec(const Vec&)>& form, const Vec& p, const FDConfig& cfg) {
  const int n = static_cast<int>(p.size());
  Mat J(n, n);  // J(a, b) = d_a form_b
  for (int a = 0; a < n; ++a) J.row(a) = fd_partial(form, p, a, cfg.h, cfg.order).transpose();
  return J - J.transpose();
}

// Components of a 2-form in the frame dual to the coframe whose rows are eta.
inline Mat two_form_in_coframe(const Mat& eta, const Mat& phi) {
  const Mat E = detail::inverse_checked(eta);  // columns: dual vectors
  return E.transpose() * phi * E;
}

inline Real real_part_checked(Complex z, const char* what) {
  if (std::abs(z.imag()) > 1e-9L * std::max<Real>(1, std::abs(z)))
    throw Error(Errc::BadParams, std::string(what) + " must be real");
  return z.real();
}

// ---------- Diff(Sigma^2) Nahm fields Phi^i = phi^i d_p + psi^i d_q on coordinates (r, p, q) ----------

struct DiffNahm {
  std::function<Mat32(const Vec3&)> fields;  // row i = (phi^i, psi^i) at (r, p, q)
  std::function<CMat3(Real)> B;              // empty: B = 0
  Real a = 0;

  Mat3 b_real(Real r) const {
    if (!B) return Mat3::Zero();
    const CMat3 c = B(r);
    Mat3 out;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) out(i, j) = real_part_checked(c(i, j), "B");
    return out;
  }
};

// Field of a Hamiltonian F: minus its Hamiltonian vector field, phi = F_q, psi = -F_p, so that
// the map takes {F, G} to the Lie algebra bracket (minus the vector-field commutator).
inline DiffNahm hamiltonian_vector_fields(const HamiltonianNahm& hn, Real h = 1e-4L) {
  DiffNahm dn;
  dn.a = hn.a;
  dn.B = hn.B;
  auto F = hn.F;
  dn.fields = [F, h](const Vec3& rpq) {
    auto at = [&](Real p, Real q) { return Vec3(F(Vec3(p, q, rpq(0)))); };
    const Vec3 Fp = fd1([&](Real s) { return at(s, rpq(2)); }, rpq(1), h, 6);
    const Vec3 Fq = fd1([&](Real s) { return at(rpq(1), s); }, rpq(2), h, 6);
    Mat32 m;
    m.col(0) = Fq;
    m.col(1) = -Fp;
    return m;
  };
  return dn;
}

struct DiffNahmJet {
  Mat32 v, p, q, r;
};

inline DiffNahmJet diff_nahm_jet(const DiffNahm& dn, const Vec3& x, Real h) {
  auto d = [&](int k) {
    return fd1([&](Real s) { Vec3 y = x; y(k) = s; return Mat32(dn.fields(y)); }, x(k), h, 4);
  };
  return {dn.fields(x), d(1), d(2), d(0)};
}

// Phi_r - a Phi - *[Phi, Phi] - B Phi, max over components, where the Lie algebra bracket of
// vector fields is minus their commutator.
inline Real diff_nahm_residual(const DiffNahm& dn, const Vec3& x, Real h = 1e-3L) {
  const DiffNahmJet J = diff_nahm_jet(dn, x, h);
  const Mat3 B = dn.b_real(x(0));
  Real m = 0;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    // [X, Y] = X(Y) - Y(X) with X = phi d_p + psi d_q
    Eigen::Matrix<Real, 1, 2> br = J.v(j, 0) * J.p.row(k) + J.v(j, 1) * J.q.row(k) - J.v(k, 0) * J.p.row(j) -
                                    J.v(k, 1) * J.q.row(j);
    Eigen::Matrix<Real, 1, 2> res = J.r.row(i) - dn.a * J.v.row(i) + br;
    for (int l = 0; l < 3; ++l) res -= B(i, l) * J.v.row(l);
    m = std::max(m, res.cwiseAbs().maxCoeff());
  }
  return m;
}

struct NahmFrameData {
  Mat3 eta;  // rows eta_i in (dr, dp, dq)
  Vec3 nu;
  Vec3 div;  // phi^i_p + psi^i_q
};

inline NahmFrameData nahm_frame_data(const DiffNahm& dn, const Vec3& x, Real h) {
  const DiffNahmJet J = diff_nahm_jet(dn, x, h);
  NahmFrameData d;
  const auto& f = J.v;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    d.nu(i) = f(j, 0) * f(k, 1) - f(k, 0) * f(j, 1);
    d.div(i) = J.p(i, 0) + J.q(i, 1);
  }
  for (int i = 0; i < 3; ++i) d.eta.row(i) << d.nu(i), -f(i, 1), f(i, 0);
  if (d.nu.squaredNorm() < 1e-24L) throw Error(Errc::DegenerateHiggs, "nu vanishes");
  return d;
}

inline Vec3 riccati_nahm_omega(const DiffNahm& dn, const Vec3& x, Real h) {
  const NahmFrameData d = nahm_frame_data(dn, x, h);
  const Mat3 B = dn.b_real(x(0));
  Vec3 w = Vec3::Zero();
  for (int k = 0; k < 3; ++k) {
    Real c = 0;
    for (int j = 0; j < 3; ++j) c += 2 * B(j, k) * d.nu(j);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) c += eps3(i, j, k) * d.nu(i) * d.div(j);
    w += c * d.eta.row(k).transpose();
  }
  w /= d.nu.squaredNorm();
  w(0) -= dn.a;  // projective gauge: D = d_r + a
  return w;
}

// Weyl structure on coordinates (r, p, q).
inline WeylStructure ew_from_riccati_nahm(const DiffNahm& dn, const Chart& chart, Real h = 1e-4L) {
  if (chart.dim != 3) throw Error(Errc::BadParams, "chart must be (r, p, q)");
  WeylStructure ws;
  ws.metric.chart = chart;
  ws.metric.sig = {3, 0};
  ws.metric.g = [dn, h](const Vec& x) {
    const Mat3 e = nahm_frame_data(dn, Vec3(x(0), x(1), x(2)), h).eta;
    return Mat(e.transpose() * e);
  };
  ws.omega = [dn, h](const Vec& x) { return Vec(riccati_nahm_omega(dn, Vec3(x(0), x(1), x(2)), h)); };
  return ws;
}

struct KappaResult {
  Real kappa = 0;
  Mat3 eta;
  Vec3 omega;
  std::array<Real, 3> structure{};  // |d eta_i + omega ^ eta_i - kappa eta_j ^ eta_k| in the eta frame
};

inline KappaResult kappa_from_sdiff_nahm(const DiffNahm& dn, const Vec3& x, const FDConfig& cfg = {},
                                         Real h_inner = 1e-4L) {
  KappaResult res;
  const NahmFrameData d = nahm_frame_data(dn, x, h_inner);
  res.kappa = d.nu.dot(d.div) / d.nu.squaredNorm();
  res.eta = d.eta;
  res.omega = riccati_nahm_omega(dn, x, h_inner);
  const Vec p = x;
  const Vec w = res.omega;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    auto eta_i = [&](const Vec& q) {
      return Vec(nahm_frame_data(dn, Vec3(q(0), q(1), q(2)), h_inner).eta.row(i).transpose());
    };
    const Vec ei = d.eta.row(i).transpose(), ej = d.eta.row(j).transpose(), ek = d.eta.row(k).transpose();
    const Mat R = exterior_d(eta_i, p, cfg) + wedge(w, ei) - res.kappa * wedge(ej, ek);
    res.structure[i] = two_form_in_coframe(d.eta, R).norm() / std::sqrt(Real(2));
  }
  return res;
}

// ---------- spinor-vortex Hitchin fields -> Einstein-Weyl, coordinates (x, y, t) ----------

namespace detail {
inline Complex dt_of(const std::function<Complex(const Vec3&)>& f, const Vec3& p, Real h) {
  return fd1([&](Real s) { return f(Vec3(p(0), p(1), s)); }, p(2), h, 6);
}
}  // namespace detail

inline WeylStructure ew_from_sv_hitchin(const HitchinField& hf, const Chart& chart, Real h = 1e-4L) {
  if (chart.dim != 3) throw Error(Errc::BadParams, "chart must be (x, y, t)");
  WeylStructure ws;
  ws.metric.chart = chart;
  ws.metric.sig = {3, 0};
  ws.metric.g = [hf](const Vec& x) {
    const Vec3 p(x(0), x(1), x(2));
    const Complex Phi = hf.Phi(p), al = hf.alpha(p);
    if (std::abs(Phi) < 1e-14L) throw Error(Errc::DegenerateHiggs, "Higgs field vanishes");
    const Vec3 beta(2 * al.real(), -2 * al.imag(), 1);  // dt + alpha dz + conj(alpha) dzbar
    Mat g = beta * beta.transpose();
    g(0, 0) += 4 * std::norm(Phi);
    g(1, 1) += 4 * std::norm(Phi);
    return g;
  };
  ws.omega = [hf, h](const Vec& x) {
    const Vec3 p(x(0), x(1), x(2));
    const Complex Phi = hf.Phi(p), al = hf.alpha(p);
    const Complex C = hf.sv.C(p(0), p(1)), psi = hf.sv.psi(p(0), p(1));
    const Real e2s = std::exp(2 * hf.sv.sigma(p(0), p(1))), e2r = std::exp(2 * hf.sv.rho(p(0), p(1)));
    // C enters through its coordinate coefficient
    const Complex Cc = C * e2r * Real(0.5) * e2s;
    const Complex adot = detail::dt_of(hf.alpha, p, h), Pdot = detail::dt_of(hf.Phi, p, h);
    const Complex cz = adot - Real(2) * std::conj(Cc) * Phi / std::conj(Phi);
    const Real lam = -((psi + Pdot) / Phi).real();
    const Vec3 beta(2 * al.real(), -2 * al.imag(), 1);
    Vec w(3);
    w << 2 * cz.real(), -2 * cz.imag(), 0;
    w += lam * Vec(beta);
    return w;
  };
  return ws;
}

// ---------- monopoles and the Jones-Tod correspondence ----------

// (A, Phi) d_t on a 3-dimensional base; t-dependence allowed for Diff(S^1) monopoles.
struct Monopole {
  std::function<Real(const Vec& base, Real t)> Phi;
  std::function<Vec(const Vec& base, Real t)> A;  // empty: A = 0
};

inline Monopole abelian(std::function<Real(const Vec&)> Phi, std::function<Vec(const Vec&)> A = {}) {
  Monopole m;
  m.Phi = [Phi](const Vec& b, Real) { return Phi(b); };
  if (A) m.A = [A](const Vec& b, Real) { return A(b); };
  return m;
}

inline BogomolnyField to_bogomolny(const WeylStructure& w, const Monopole& m, Real t0 = 0) {
  return abelian_monopole(
      w, [m, t0](const Vec& p) { return m.Phi(p, t0); },
      m.A ? std::function<Vec(const Vec&)>([m, t0](const Vec& p) { return m.A(p, t0); }) : std::function<Vec(const Vec&)>());
}

// c = c_B + Phi^{-2} (dt + A)^2 on coordinates (t, base).
inline MetricField sd_from_ew_monopole(const WeylStructure& w3, const Monopole& m, std::pair<Real, Real> t_range) {
  const Chart& b = w3.metric.chart;
  if (b.dim != 3) throw Error(Errc::BadParams, "base must be 3-dimensional");
  std::vector<std::string> names{"t"};
  std::vector<std::pair<Real, Real>> box{t_range};
  for (int i = 0; i < 3; ++i) {
    names.push_back(b.names[i]);
    box.emplace_back(b.lo(i), b.hi(i));
  }
  auto bex = b.excluded;
  Chart c4 = make_chart(names, box, bex ? std::function<bool(const Vec&)>([bex](const Vec& p) {
                                            return bex(Vec(p.tail(3)));
                                          })
                                        : std::function<bool(const Vec&)>());
  MetricField out;
  out.chart = c4;
  out.sig = {w3.metric.sig.pos + 1, w3.metric.sig.neg};
  auto gB = w3.metric.g;
  out.g = [gB, m](const Vec& p) {
    const Vec base = p.tail(3);
    const Real Phi = m.Phi(base, p(0));
    if (std::abs(Phi) < 1e-14L) throw Error(Errc::DegenerateHiggs, "monopole Higgs field vanishes");
    Vec beta = Vec::Zero(4);
    beta(0) = 1;
    if (m.A) beta.tail(3) = m.A(base, p(0));
    Mat g = Mat::Zero(4, 4);
    g.block(1, 1, 3, 3) = gB(base);
    g += beta * beta.transpose() / (Phi * Phi);
    return g;
  };
  return out;
}

struct JonesTod {
  WeylStructure weyl;
  Monopole monopole;
};

// Reduction by d_t (coordinate 0), evaluated on the slice t = t0.
inline JonesTod jones_tod_reduce(const MetricField& m4, Real t0, const FDConfig& cfg = {}) {
  if (m4.chart.dim != 4) throw Error(Errc::BadParams, "metric must be 4-dimensional");
  const Chart& c = m4.chart;
  Chart base = make_chart({c.names[1], c.names[2], c.names[3]},
                          {{c.lo(1), c.hi(1)}, {c.lo(2), c.hi(2)}, {c.lo(3), c.hi(3)}},
                          c.excluded ? std::function<bool(const Vec&)>([ex = c.excluded, t0](const Vec& b) {
                            Vec p(4);
                            p << t0, b;
                            return ex(p);
                          })
                                     : std::function<bool(const Vec&)>());
  auto g4 = m4.g;
  auto lift = [t0](const Vec& b) {
    Vec p(4);
    p << t0, b;
    return p;
  };
  auto gtt = [g4, lift](const Vec& b) {
    const Real v = g4(lift(b))(0, 0);
    if (!(v > 0)) throw Error(Errc::NullOrbit, "g(d_t, d_t) <= 0");
    return v;
  };
  JonesTod jt;
  jt.monopole.Phi = [gtt](const Vec& b, Real) { return 1 / std::sqrt(gtt(b)); };
  jt.monopole.A = [g4, lift, gtt](const Vec& b, Real) {
    const Mat g = g4(lift(b));
    return Vec(g.block(0, 1, 1, 3).transpose() / gtt(b));
  };
  jt.weyl.metric.chart = base;
  jt.weyl.metric.sig = {m4.sig.pos - 1, m4.sig.neg};
  jt.weyl.metric.g = [g4, lift](const Vec& b) {
    const Mat g = g4(lift(b));
    const Vec gt = g.block(0, 1, 1, 3).transpose();
    return Mat(g.block(1, 1, 3, 3) - gt * gt.transpose() / g(0, 0));
  };
  auto mono = jt.monopole;
  auto gB = jt.weyl.metric.g;
  jt.weyl.omega = [mono, gB, cfg](const Vec& b) {
    auto phi = [&](const Vec& q) { return mono.Phi(q, 0); };
    auto A = [&](const Vec& q) { return mono.A(q, 0); };
    const Vec dphi = fd_gradient(phi, b, cfg);
    const Mat dA = exterior_d(A, b, cfg);
    return Vec((dphi - hodge2_3d(gB(b), dA)) / phi(b));
  };
  return jt;
}

// ---------- hypercomplex frames ----------

struct FrameField4 {
  Chart chart;
  std::array<std::function<Vec(const Vec&)>, 4> V;

  Mat matrix(const Vec& p) const {
    Mat M(4, 4);
    for (int i = 0; i < 4; ++i) M.col(i) = V[i](p);
    return M;
  }
  // rows are eta_i
  Mat coframe(const Vec& p) const {
    const Mat M = matrix(p);
    if (std::abs(M.determinant()) < 1e-14L * std::pow(std::max<Real>(1, M.cwiseAbs().maxCoeff()), 4))
      throw Error(Errc::SingularFrame, "frame is not invertible");
    return M.inverse();
  }
  MetricField metric() const {
    FrameField4 self = *this;
    return {chart, [self](const Vec& p) {
              const Mat e = self.coframe(p);
              return Mat(e.transpose() * e);
            }, {4, 0}};
  }
};

inline Vec lie_bracket(const std::function<Vec(const Vec&)>& X, const std::function<Vec(const Vec&)>& Y,
                       const Vec& p, const FDConfig& cfg) {
  const int n = static_cast<int>(p.size());
  const Vec x = X(p), y = Y(p);
  Vec out = Vec::Zero(n);
  for (int b = 0; b < n; ++b) {
    out += x(b) * fd_partial(Y, p, b, cfg.h, cfg.order);
    out -= y(b) * fd_partial(X, p, b, cfg.h, cfg.order);
  }
  return out;
}

// Coordinate volume density nu(x) dx^0..dx^3.
using VolumeDensity = std::function<Real(const Vec&)>;

inline Real divergence(const std::function<Vec(const Vec&)>& X, const VolumeDensity& nu, const Vec& p,
                       const FDConfig& cfg) {
  Real s = 0;
  for (int a = 0; a < static_cast<int>(p.size()); ++a)
    s += fd_partial([&](const Vec& q) { return nu(q) * X(q)(a); }, p, a, cfg.h, cfg.order);
  return s / nu(p);
}

struct HypercomplexResult {
  MetricField metric;
  std::array<Real, 3> mn{};    // bracket sums, normalized by the frame scale
  std::array<Real, 4> lie{};   // L_{V_i} nu / nu
  bool hyperkahler = false;
};

inline std::array<Real, 3> mason_newman(const FrameField4& ff, const Vec& p, const FDConfig& cfg) {
  detail::check_point(ff.chart, p);
  const auto& V = ff.V;
  const Mat e = ff.coframe(p);
  auto nrm = [&](const Vec& v) { return (e * v).norm(); };  // frame components
  return {nrm(lie_bracket(V[0], V[1], p, cfg) + lie_bracket(V[2], V[3], p, cfg)),
          nrm(lie_bracket(V[0], V[2], p, cfg) + lie_bracket(V[3], V[1], p, cfg)),
          nrm(lie_bracket(V[0], V[3], p, cfg) + lie_bracket(V[1], V[2], p, cfg))};
}

inline HypercomplexResult hypercomplex_from_frame(const FrameField4& ff, const Vec& p, const VolumeDensity& nu = {},
                                                  const FDConfig& cfg = {}, Real tol = 1e-7L) {
  HypercomplexResult r;
  r.metric = ff.metric();
  r.mn = mason_newman(ff, p, cfg);
  if (nu) {
    bool ok = true;
    for (int i = 0; i < 4; ++i) {
      r.lie[i] = std::abs(divergence(ff.V[i], nu, p, cfg));
      ok = ok && r.lie[i] < tol;
    }
    r.hyperkahler = ok;
  }
  return r;
}

// Hyperkahler representative nu(V_0, .., V_3) sum eta_i^2 for a volume-preserving frame.
inline MetricField hyperkahler_metric(const FrameField4& ff, const VolumeDensity& nu) {
  FrameField4 self = ff;
  return {ff.chart, [self, nu](const Vec& p) {
            const Mat e = self.coframe(p);
            return Mat(nu(p) * self.matrix(p).determinant() * e.transpose() * e);
          }, {4, 0}};
}

// Nahm data as vector fields on a 3-manifold: V_0 = d_r, V_i = Phi_i(r, x).
struct Nahm3Data {
  Chart chart;  // (r, x1, x2, x3)
  std::function<Vec3(int i, Real r, const Vec3& x)> Phi;
};

// Hitchin data on the trivial spinor-vortex space as complex vector fields on a surface
// with coordinates (u, v); chart is (x, y, u, v).
struct Hitchin2Data {
  Chart chart;
  std::function<Eigen::Matrix<Complex, 2, 1>(const Vec&)> alpha;  // components on (d_u, d_v)
  std::function<Eigen::Matrix<Complex, 2, 1>(const Vec&)> phi;
};

inline FrameField4 frame_from_nahm3(const Nahm3Data& d) {
  FrameField4 ff;
  ff.chart = d.chart;
  ff.V[0] = [](const Vec&) { Vec v = Vec::Zero(4); v(0) = 1; return v; };
  for (int i = 0; i < 3; ++i)
    ff.V[i + 1] = [d, i](const Vec& p) {
      Vec v = Vec::Zero(4);
      v.tail(3) = d.Phi(i, p(0), Vec3(p(1), p(2), p(3)));
      return v;
    };
  return ff;
}

// V_0 - i V_1 = d_z - alpha, V_2 + i V_3 = phi.
inline FrameField4 frame_from_hitchin2(const Hitchin2Data& d) {
  FrameField4 ff;
  ff.chart = d.chart;
  ff.V[0] = [d](const Vec& p) {
    Vec v = Vec::Zero(4);
    v(0) = 0.5L;
    const auto a = d.alpha(p);
    v(2) = -a(0).real();
    v(3) = -a(1).real();
    return v;
  };
  ff.V[1] = [d](const Vec& p) {
    Vec v = Vec::Zero(4);
    v(1) = 0.5L;
    const auto a = d.alpha(p);
    v(2) = a(0).imag();
    v(3) = a(1).imag();
    return v;
  };
  ff.V[2] = [d](const Vec& p) {
    Vec v = Vec::Zero(4);
    const auto f = d.phi(p);
    v(2) = f(0).real();
    v(3) = f(1).real();
    return v;
  };
  ff.V[3] = [d](const Vec& p) {
    Vec v = Vec::Zero(4);
    const auto f = d.phi(p);
    v(2) = f(0).imag();
    v(3) = f(1).imag();
    return v;
  };
  return ff;
}

// ---------- hyperCR data ----------

struct HyperCRData {
  std::array<std::function<Vec(const Vec&)>, 3> chi;  // empty: coframe equations not checked
  std::function<Real(const Vec&)> kappa;              // d^D chi_1 = 2 kappa chi_2 ^ chi_3
  std::function<Real(const Vec&)> kappa_hat;          // Gauduchon-Tod scalar
  std::function<Real(const Vec&)> tau;
};

// Kappa-hat of the geodesic generalized symmetry: (1/4i)((Phi' + psi)/Phi - conj).
inline std::function<Real(const Vec&)> kappa_hat_from_hitchin(const HitchinField& hf, Real h = 1e-4L) {
  return [hf, h](const Vec& x) {
    const Vec3 p(x(0), x(1), x(2));
    const Complex r = (detail::dt_of(hf.Phi, p, h) + hf.sv.psi(p(0), p(1))) / hf.Phi(p);
    return Real(0.5) * r.imag();
  };
}

// Natural coframe on a trivial spinor-vortex space: chi_1 + i chi_2 = 2 Phi dz, chi_3 = dt + alpha-hat.
inline HyperCRData hypercr_from_hitchin(const HitchinField& hf, Real h = 1e-4L) {
  HyperCRData d;
  d.chi[0] = [hf](const Vec& x) {
    const Complex P = hf.Phi(Vec3(x(0), x(1), x(2)));
    Vec v(3); v << 2 * P.real(), -2 * P.imag(), 0; return v;
  };
  d.chi[1] = [hf](const Vec& x) {
    const Complex P = hf.Phi(Vec3(x(0), x(1), x(2)));
    Vec v(3); v << 2 * P.imag(), 2 * P.real(), 0; return v;
  };
  d.chi[2] = [hf](const Vec& x) {
    const Complex a = hf.alpha(Vec3(x(0), x(1), x(2)));
    Vec v(3); v << 2 * a.real(), -2 * a.imag(), 1; return v;
  };
  d.kappa = [hf, h](const Vec& x) {
    const Vec3 p(x(0), x(1), x(2));
    return Real(0.5) * (detail::dt_of(hf.Phi, p, h) / hf.Phi(p)).imag();
  };
  d.tau = [hf, h](const Vec& x) {
    const Vec3 p(x(0), x(1), x(2));
    return (detail::dt_of(hf.Phi, p, h) / hf.Phi(p)).real();
  };
  d.kappa_hat = kappa_hat_from_hitchin(hf, h);
  return d;
}

// ---------- dispersionless Toda and dKP ----------

enum class Dispersionless { Toda, DKP };

// toda on (x, y, z): h = e^u (dx^2 + dy^2) + dz^2, omega = -u_z dz.
// dkp on (x, y, t): h = dy^2 - 4 dx dt - 4 u dt^2, omega = 2 u_x dt.
inline WeylStructure dispersionless_ew(Dispersionless kind, const ScalarField& u, const Chart& chart,
                                       const FDConfig& cfg = {}) {
  if (chart.dim != 3) throw Error(Errc::BadParams, "chart must be 3-dimensional");
  WeylStructure ws;
  ws.metric.chart = chart;
  auto grad = [u, cfg](const Vec& p) { return u.grad ? u.grad(p) : fd_gradient(u.eval, p, cfg); };
  if (kind == Dispersionless::Toda) {
    ws.metric.sig = {3, 0};
    ws.metric.g = [u](const Vec& p) {
      Mat g = Mat::Zero(3, 3);
      g(0, 0) = g(1, 1) = std::exp(u.eval(p));
      g(2, 2) = 1;
      return g;
    };
    ws.omega = [grad](const Vec& p) { Vec w = Vec::Zero(3); w(2) = -grad(p)(2); return w; };
  } else {
    ws.metric.sig = {2, 1};
    ws.metric.g = [u](const Vec& p) {
      Mat g = Mat::Zero(3, 3);
      g(1, 1) = 1;
      g(0, 2) = g(2, 0) = -2;
      g(2, 2) = -4 * u.eval(p);
      return g;
    };
    ws.omega = [grad](const Vec& p) { Vec w = Vec::Zero(3); w(2) = 2 * grad(p)(0); return w; };
  }
  return ws;
}

// ---------- hodograph transformation ----------

struct HodographBundle {
  std::function<CMat3(Real)> theta;      // rows theta^i
  std::function<Vec3(const Vec3&)> x;    // x^alpha(p, q, t)
  std::function<Real(const Vec3&)> u;    // optional
};

inline Vec3 hodograph_F(const HodographBundle& hb, const Vec3& pqt) {
  const CMat3 th = hb.theta(pqt(2));
  const Vec3 x = hb.x(pqt);
  Vec3 F;
  for (int i = 0; i < 3; ++i) F(i) = real_part_checked((th.row(i) * x.cast<Complex>())(0, 0), "F");
  return F;
}

struct HodographResult {
  Real nahm = 0;
  Real volume = 0;
};

inline HodographResult hodograph_check(const HodographBundle& hb, Real a, const std::function<CMat3(Real)>& B,
                                       const Vec3& pqt, const FDConfig& cfg = {}) {
  const CMat3 th = hb.theta(pqt(2));
  if (std::abs(th.determinant()) < 1e-12L) throw Error(Errc::SingularFraming, "theta not invertible");
  HamiltonianNahm hn;
  hn.F = [hb](const Vec3& y) { return hodograph_F(hb, y); };
  hn.B = B;
  hn.a = a;
  HodographResult r;
  r.nahm = nahm_residual_hamiltonian(hn, pqt, cfg.h);
  // metric on (p, q, t): J^T theta^T theta J
  Mat3 J;
  for (int k = 0; k < 3; ++k)
    J.col(k) = fd1([&](Real s) { Vec3 y = pqt; y(k) = s; return Vec3(hb.x(y)); }, pqt(k), cfg.h, cfg.order);
  const CMat3 G = J.cast<Complex>().transpose() * th.transpose() * th * J.cast<Complex>();
  Mat g(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = real_part_checked(G(i, j), "metric");
  Vec dt = Vec::Zero(3);
  dt(2) = 1;
  Mat s = hodge1_3d(g, dt);
  s(0, 1) -= 1;
  s(1, 0) += 1;
  r.volume = s.cwiseAbs().maxCoeff();
  return r;
}

// ---------- framings and the hydrodynamic-integrability equation ----------

struct FHZResult {
  CMat3 C;
  Complex a;
  CMat3 B;
  Real residual = 0;  // |C' - 2C^2 + tr(C) C - c I|
  Complex c;
  Real riccati = 0;   // |B' - a-gauge Riccati rhs|, B' = 2(B^2)_0 + a B + a' ... traceless part
};

namespace detail {
// complex-orthogonal Gram-Schmidt making O theta lower triangular (bilinear, no conjugation)
inline CMat3 lower_triangular_gauge(const CMat3& th) {
  // O th = L lower triangular: the rows of O are obtained by orthonormalizing the columns
  // of th from the last one, so that row k of O is orthogonal to columns k+1..2.
  CMat3 Q;
  std::array<CVec3, 3> q;
  for (int k = 2; k >= 0; --k) {
    CVec3 v = th.col(k);
    for (int l = 2; l > k; --l) v -= ((q[l].transpose() * v)(0, 0)) * q[l];
    const Complex n2 = (v.transpose() * v)(0, 0);
    if (std::abs(n2) < 1e-20L) throw Error(Errc::NonSymmetrizable, "null vector in gauge fixing");
    q[k] = v / std::sqrt(n2);
  }
  for (int k = 0; k < 3; ++k) Q.row(k) = q[k].transpose();
  return Q;  // orthogonal (Q Q^T = I)
}
inline CMat3 skew(const CMat3& M) { return Real(0.5) * (M - M.transpose()); }
}  // namespace detail

// Rotates theta by O(u) so that C = theta' theta^{-1} is symmetric; O(u0) makes O theta lower triangular.
inline std::function<CMat3(Real)> symmetrize_framing(const std::function<CMat3(Real)>& theta, Real u0,
                                                     int steps = 400, Real h = 1e-4L) {
  auto Craw = [theta, h](Real u) {
    const CMat3 dth = fd1([&](Real s) { return theta(s); }, u, h, 6);
    return CMat3(dth * theta(u).inverse());
  };
  const CMat3 O0 = detail::lower_triangular_gauge(theta(u0));
  return [=](Real u) {
    // O' = -skew(O C O^T) O
    auto f = [&](Real s, const CMat3& O) { return CMat3(-detail::skew(O * Craw(s) * O.transpose()) * O); };
    CMat3 O = O0;
    const Real dh = (u - u0) / steps;
    for (int k = 0; k < steps && dh != 0; ++k) {
      const Real s = u0 + k * dh;
      const CMat3 k1 = f(s, O), k2 = f(s + dh / 2, O + (dh / 2) * k1), k3 = f(s + dh / 2, O + (dh / 2) * k2),
                  k4 = f(s + dh, O + dh * k3);
      O += (dh / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return CMat3(O * theta(u));
  };
}

inline FHZResult fhz_consistency(const std::function<CMat3(Real)>& theta, Real u, Real u0, Real h = 1e-3L) {
  if (std::abs(theta(u).determinant()) < 1e-12L) throw Error(Errc::SingularFraming, "theta not invertible");
  // gauge fixing is skipped when C is already symmetric on the sampled range
  auto Craw = [&](Real s) {
    const CMat3 dth = fd1([&](Real v) { return theta(v); }, s, 1e-4L, 6);
    return CMat3(dth * theta(s).inverse());
  };
  std::function<CMat3(Real)> th = theta;
  if ((Craw(u) - Craw(u).transpose()).norm() > 1e-9L || (Craw(u0) - Craw(u0).transpose()).norm() > 1e-9L)
    th = symmetrize_framing(theta, u0);
  auto C = [&](Real s) {
    const CMat3 dth = fd1([&](Real v) { return th(v); }, s, 1e-4L, 6);
    return CMat3(dth * th(s).inverse());
  };
  FHZResult r;
  r.C = C(u);
  const CMat3 Cp = fd1(C, u, h, 4);
  const Complex tr = r.C.trace();
  const CMat3 lhs = Cp - 2 * r.C * r.C + tr * r.C;
  r.c = lhs.trace() / Real(3);
  r.residual = (lhs - r.c * CMat3::Identity()).cwiseAbs().maxCoeff();
  r.a = tr / Real(3);
  r.B = r.C - r.a * CMat3::Identity();
  auto Bf = [&](Real s) { const CMat3 c = C(s); return CMat3(c - (c.trace() / Real(3)) * CMat3::Identity()); };
  const CMat3 Bp = fd1(Bf, u, h, 4);
  r.riccati = (Bp - 2 * traceless_part(r.B * r.B) - r.a * r.B).cwiseAbs().maxCoeff();
  return r;
}

}  // namespace ibg
