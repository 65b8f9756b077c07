#pragma once

#include "ibg/riccati.hpp"
#include "ibg/tensorcalc.hpp"

#include <map>

namespace ibg {

// ---------- matrix Lie algebras ----------

struct MatrixAlgebra {
  std::string name;
  std::vector<CMat> basis;

  int dim() const { return static_cast<int>(basis.size()); }
  int rep_dim() const { return basis.empty() ? 0 : static_cast<int>(basis[0].rows()); }
  static CMat bracket(const CMat& a, const CMat& b) { return a * b - b * a; }

  // coordinates of m in the basis (least squares; exact for elements of the span)
  Eigen::Matrix<Complex, Eigen::Dynamic, 1> coords(const CMat& m) const {
    const int n = dim(), d = rep_dim();
    CMat M(d * d, n);
    for (int k = 0; k < n; ++k) M.col(k) = Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, 1>>(basis[k].data(), d * d);
    Eigen::Matrix<Complex, Eigen::Dynamic, 1> rhs = Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, 1>>(m.data(), d * d);
    return M.colPivHouseholderQr().solve(rhs);
  }

  // c[i][j][k] with [e_i, e_j] = c_ij^k e_k
  std::vector<std::vector<std::vector<Complex>>> structure_constants() const {
    const int n = dim();
    std::vector<std::vector<std::vector<Complex>>> c(n, std::vector<std::vector<Complex>>(n, std::vector<Complex>(n)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        auto v = coords(bracket(basis[i], basis[j]));
        for (int k = 0; k < n; ++k) c[i][j][k] = v(k);
      }
    return c;
  }
};

inline MatrixAlgebra su2_algebra() {
  MatrixAlgebra a;
  a.name = "su2";
  CMat s1(2, 2), s2(2, 2), s3(2, 2);
  s1 << 0, 1, 1, 0;
  s2 << 0, -kI, kI, 0;
  s3 << 1, 0, 0, -1;
  for (const CMat& s : {s1, s2, s3}) a.basis.push_back((Real(-0.5) * kI) * s);  // [e_i,e_j] = eps_ijk e_k
  return a;
}

inline MatrixAlgebra so3_algebra() {
  MatrixAlgebra a;
  a.name = "so3";
  for (int i = 0; i < 3; ++i) {
    CMat m = CMat::Zero(3, 3);
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    m(k, j) = 1;
    m(j, k) = -1;
    a.basis.push_back(m);
  }
  return a;
}

inline MatrixAlgebra abelian_algebra(int n = 3) {
  MatrixAlgebra a;
  a.name = "abelian";
  for (int i = 0; i < n; ++i) {
    CMat m = CMat::Zero(n, n);
    m(i, i) = 1;
    a.basis.push_back(m);
  }
  return a;
}

// Affine algebra of the line, realizing (c0 + c1 t) d/dt as [[-c1, c0], [0, 0]].
inline MatrixAlgebra aff_algebra() {
  MatrixAlgebra a;
  a.name = "aff";
  CMat tr = CMat::Zero(2, 2), sc = CMat::Zero(2, 2);
  tr(0, 1) = 1;   // d/dt
  sc(0, 0) = -1;  // t d/dt
  a.basis = {tr, sc};
  return a;
}

inline CMat aff_element(Complex c0, Complex c1) {
  CMat m = CMat::Zero(2, 2);
  m(0, 0) = -c1;
  m(0, 1) = c0;
  return m;
}

inline MatrixAlgebra algebra_by_name(const std::string& name) {
  if (name == "su2") return su2_algebra();
  if (name == "so3") return so3_algebra();
  if (name == "abelian") return abelian_algebra();
  if (name == "aff") return aff_algebra();
  throw Error(Errc::AlgebraMismatch, "unknown algebra " + name);
}

inline Real antisymmetry_residual(const MatrixAlgebra& A) {
  auto c = A.structure_constants();
  Real m = 0;
  for (int i = 0; i < A.dim(); ++i)
    for (int j = 0; j < A.dim(); ++j)
      for (int k = 0; k < A.dim(); ++k) m = std::max(m, std::abs(c[i][j][k] + c[j][i][k]));
  return m;
}

inline Real jacobi_residual(const MatrixAlgebra& A) {
  Real m = 0;
  const auto& e = A.basis;
  for (int i = 0; i < A.dim(); ++i)
    for (int j = 0; j < A.dim(); ++j)
      for (int k = 0; k < A.dim(); ++k) {
        CMat J = MatrixAlgebra::bracket(e[i], MatrixAlgebra::bracket(e[j], e[k])) +
                 MatrixAlgebra::bracket(e[j], MatrixAlgebra::bracket(e[k], e[i])) +
                 MatrixAlgebra::bracket(e[k], MatrixAlgebra::bracket(e[i], e[j]));
        m = std::max(m, J.norm());
      }
  return m;
}

// ---------- Hamiltonian functions on a periodic N x N grid over [0, 2pi)^2 ----------

using GridFn = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

struct GridAlgebra {
  int N = 64;
  Real L = 2 * kPi;
  Real h() const { return L / N; }

  GridFn sample(const std::function<Real(Real, Real)>& f) const {
    GridFn out(N, N);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) out(i, j) = f(i * h(), j * h());
    return out;
  }
  GridFn dp(const GridFn& F) const { return diff(F, 0); }
  GridFn dq(const GridFn& F) const { return diff(F, 1); }
  // {F,G} = F_p G_q - F_q G_p
  GridFn bracket(const GridFn& F, const GridFn& G) const {
    return (dp(F).array() * dq(G).array() - dq(F).array() * dp(G).array()).matrix();
  }
  Real integral(const GridFn& F) const { return F.sum() * h() * h(); }

 private:
  GridFn diff(const GridFn& F, int axis) const {
    GridFn out(N, N);
    const Real c = 1 / (12 * h());
    auto at = [&](int i, int j) { return F(((i % N) + N) % N, ((j % N) + N) % N); };
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        if (axis == 0)
          out(i, j) = c * (at(i - 2, j) - 8 * at(i - 1, j) + 8 * at(i + 1, j) - at(i + 2, j));
        else
          out(i, j) = c * (at(i, j - 2) - 8 * at(i, j - 1) + 8 * at(i, j + 1) - at(i, j + 2));
      }
    return out;
  }
};

// ---------- generalized Nahm equation with matrix gauge algebra ----------

using Triple = std::array<CMat, 3>;

inline Triple star_bracket(const Triple& P) {
  return {MatrixAlgebra::bracket(P[1], P[2]), MatrixAlgebra::bracket(P[2], P[0]),
          MatrixAlgebra::bracket(P[0], P[1])};
}

inline Triple b_dot(const CMat3& B, const Triple& P) {
  Triple out;
  for (int i = 0; i < 3; ++i) {
    out[i] = CMat::Zero(P[0].rows(), P[0].cols());
    for (int j = 0; j < 3; ++j) out[i] += B(i, j) * P[j];
  }
  return out;
}

struct NahmField {
  RiccatiSpace riccati;
  MatrixAlgebra algebra;
  std::function<Triple(Real)> analytic;
  std::vector<Real> r;
  std::vector<Triple> phi;

  bool is_trajectory() const { return !analytic; }

  size_t node(Real rr) const {
    auto it = std::lower_bound(r.begin(), r.end(), rr - 1e-12L);
    if (it == r.end() || std::abs(*it - rr) > 1e-9L) throw Error(Errc::OutOfRange, "r is not a trajectory node");
    return static_cast<size_t>(it - r.begin());
  }
  Triple at(Real rr) const { return analytic ? analytic(rr) : phi[node(rr)]; }
  Triple deriv(Real rr, Real h = 1e-3L) const {
    Triple d;
    if (analytic) {
      for (int i = 0; i < 3; ++i) d[i] = fd1([&](Real s) { return CMat(analytic(s)[i]); }, rr, h, 6);
      return d;
    }
    const size_t k = node(rr);
    if (k < 2 || k + 2 >= r.size()) throw Error(Errc::OutOfRange, "node too close to trajectory end");
    const Real dr = r[k + 1] - r[k];
    for (int i = 0; i < 3; ++i)
      d[i] = (phi[k - 2][i] - Real(8) * phi[k - 1][i] + Real(8) * phi[k + 1][i] - phi[k + 2][i]) / (12 * dr);
    return d;
  }
};

inline Triple nahm_rhs(const Triple& P, const CMat3& B, Real a) {
  Triple s = star_bracket(P), bp = b_dot(B, P);
  Triple out;
  for (int i = 0; i < 3; ++i) out[i] = a * P[i] + s[i] + bp[i];
  return out;
}

// |Phi_r - a Phi - *[Phi,Phi] - B.Phi|
inline Real nahm_residual(const NahmField& nf, Real rr, Real h = 1e-3L) {
  const Triple P = nf.at(rr);
  for (const CMat& m : P)
    if (m.rows() != nf.algebra.rep_dim()) throw Error(Errc::AlgebraMismatch, "field/algebra size mismatch");
  const Triple dP = nf.deriv(rr, h);
  const Triple rhs = nahm_rhs(P, nf.riccati.at(rr), nf.riccati.a);
  Real s = 0;
  for (int i = 0; i < 3; ++i) s += (dP[i] - rhs[i]).squaredNorm();
  return std::sqrt(s);
}

inline NahmField solve_nahm(const Triple& phi0, const RiccatiSpace& riccati, const MatrixAlgebra& alg,
                            std::pair<Real, Real> r_span, int steps) {
  if (steps <= 0 || !(r_span.second > r_span.first)) throw Error(Errc::BadParams, "bad r_span/steps");
  NahmField nf;
  nf.riccati = riccati;
  nf.algebra = alg;
  const Real h = (r_span.second - r_span.first) / steps;
  Triple P = phi0;
  nf.r.push_back(r_span.first);
  nf.phi.push_back(P);
  auto axpy = [](const Triple& x, Real c, const Triple& y) {
    Triple o;
    for (int i = 0; i < 3; ++i) o[i] = x[i] + c * y[i];
    return o;
  };
  const Real a = riccati.a;
  for (int k = 0; k < steps; ++k) {
    const Real r0 = r_span.first + k * h;
    const Triple k1 = nahm_rhs(P, riccati.at(r0), a);
    const Triple k2 = nahm_rhs(axpy(P, h / 2, k1), riccati.at(r0 + h / 2), a);
    const Triple k3 = nahm_rhs(axpy(P, h / 2, k2), riccati.at(r0 + h / 2), a);
    const Triple k4 = nahm_rhs(axpy(P, h, k3), riccati.at(r0 + h), a);
    for (int i = 0; i < 3; ++i) P[i] += (h / 6) * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    Real nrm = 0;
    for (const CMat& m : P) nrm = std::max<Real>(nrm, m.norm());
    if (!std::isfinite(nrm) || nrm > kBlowUp)
      throw Error(Errc::BlowUp, "Nahm solution exceeds threshold after r = " +
                                    std::to_string(static_cast<double>(nf.r.back())));
    nf.r.push_back(r_span.first + (k + 1) * h);
    nf.phi.push_back(P);
  }
  return nf;
}

// ---------- isomonodromic Lax connection ----------

inline CVec3 e_zeta(Complex z) {
  CVec3 e;
  e << Real(0.5) * (z * z + Real(1)), kI * z, Real(0.5) * kI * (z * z - Real(1));
  return e;
}
inline CVec3 e_zeta_prime(Complex z) {
  CVec3 e;
  e << z, kI, kI * z;
  return e;
}

// plain bilinear cross product (Eigen's complex cross differs)
inline CVec3 cross3(const CVec3& u, const CVec3& v) {
  CVec3 w;
  w << u(1) * v(2) - u(2) * v(1), u(2) * v(0) - u(0) * v(2), u(0) * v(1) - u(1) * v(0);
  return w;
}

inline CMat contract(const CVec3& v, const Triple& P) { return v(0) * P[0] + v(1) * P[1] + v(2) * P[2]; }

// Base-locus polynomial <B e_zeta, e_zeta> (bilinear, no conjugation).
inline Complex lax_q(const CMat3& B, Complex z) {
  const CVec3 e = e_zeta(z);
  return (e.transpose() * B * e)(0, 0);
}

// Connection d + M dzeta + N dr.
struct LaxConnection {
  CMat M, N;
};

inline LaxConnection lax_connection(const CMat3& B, const Triple& P, Complex z) {
  const CVec3 e = e_zeta(z);
  const CVec3 Be = B * e;
  const Complex q = (e.transpose() * Be)(0, 0);
  const CVec3 ex = cross3(e, Be);
  return {contract(e, P) / q, contract(ex, P) / q};
}

// Vector-field generators Q d_zeta + Phi(e) and d_r + <B e, e'> d_zeta + Phi(e').
struct LaxGenerators {
  Complex dz1;
  CMat phi1;
  Complex dz2;
  CMat phi2;
};

inline LaxGenerators lax_generators(const CMat3& B, const Triple& P, Complex z) {
  const CVec3 e = e_zeta(z), ep = e_zeta_prime(z);
  return {(e.transpose() * B * e)(0, 0), contract(e, P), (ep.transpose() * B * e)(0, 0), contract(ep, P)};
}

inline constexpr Real kLaxPoleMargin = 1e-3L;

// Zero-curvature residual at one (zeta, r). The flat connection is d - M dzeta + N dr
// with M, N from lax_connection; the sign of M reflects that vector fields bracket with
// the opposite sign to the matrix algebra. For B = 0 the closure of the generators is used.
inline Real lax_residual_at(const NahmField& nf, Complex z, Real rr, Real h = 1e-3L) {
  const CMat3 B = nf.riccati.at(rr);
  const Triple P = nf.at(rr);
  const Triple dP = nf.deriv(rr, h);
  const Real scale = std::max<Real>(1, P[0].norm() + P[1].norm() + P[2].norm());
  if (B.norm() == 0) {
    const CMat L = contract(e_zeta(z), P);
    const CMat Lr = contract(e_zeta(z), dP);
    const CMat Mz = contract(e_zeta_prime(z), P);
    return (Lr - nf.riccati.a * L + MatrixAlgebra::bracket(L, Mz)).norm() / scale;
  }
  const Complex q = lax_q(B, z);
  if (std::abs(q) < kLaxPoleMargin * std::max<Real>(1, B.norm()))
    throw Error(Errc::NearPole, "zeta too close to a base-locus root");
  const CMat3 dB = fd1([&](Real s) { return nf.riccati.at(s); }, rr, h, 4);
  const CVec3 e = e_zeta(z);
  const Complex dq = (e.transpose() * dB * e)(0, 0);
  const CMat Phe = contract(e, P);
  // d_r M with M = Phi(e)/q
  const CMat Mr = contract(e, dP) / q - Phe * (dq / (q * q));
  // N is holomorphic in zeta, so a real-direction difference gives d_zeta N
  const Real hz = 1e-4L;
  const CMat Nz = fd1([&](Real s) { return lax_connection(B, P, z + Complex(s, 0)).N; }, 0, hz, 6);
  const LaxConnection c = lax_connection(B, P, z);
  return (Nz + Mr - MatrixAlgebra::bracket(c.M, c.N)).norm() / scale;
}

inline Real lax_residual(const NahmField& nf, const std::vector<std::pair<Complex, Real>>& samples,
                         Real h = 1e-3L) {
  Real m = 0;
  for (const auto& [z, rr] : samples) m = std::max(m, lax_residual_at(nf, z, rr, h));
  return m;
}

// ---------- Hamiltonian (SDiff) Nahm fields given by callbacks F^i(p, q, r) ----------

struct HamiltonianNahm {
  std::function<Vec3(const Vec3&)> F;  // (F^1, F^2, F^3) at (p, q, r)
  std::function<CMat3(Real)> B;        // may be empty for B = 0
  Real a = 0;
};

inline Real poisson(const std::function<Vec3(const Vec3&)>& F, int i, int j, const Vec3& x, Real h) {
  auto d = [&](int axis) {
    return fd1([&](Real s) { Vec3 y = x; y(axis) = s; return Vec3(F(y)); }, x(axis), h, 4);
  };
  const Vec3 Fp = d(0), Fq = d(1);
  return Fp(i) * Fq(j) - Fq(i) * Fp(j);
}

// F^i_r - a F^i - {F^j, F^k} - B_ij F^j, maximum over components.
inline Real nahm_residual_hamiltonian(const HamiltonianNahm& hn, const Vec3& pqr, Real h = 1e-3L) {
  const Vec3 F = hn.F(pqr);
  const Vec3 Fr = fd1([&](Real s) { Vec3 y = pqr; y(2) = s; return Vec3(hn.F(y)); }, pqr(2), h, 4);
  CMat3 B = hn.B ? hn.B(pqr(2)) : CMat3::Zero();
  Real m = 0;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    Complex res = Fr(i) - hn.a * F(i) - poisson(hn.F, j, k, pqr, h);
    for (int l = 0; l < 3; ++l) res -= B(i, l) * F(l);
    m = std::max(m, std::abs(res));
  }
  return m;
}

// ---------- spinor-vortex spaces ----------
//
// Conformal coordinate z = x + iy, representative metric e^{2 sigma}|dz|^2, a frame f of W^{-1}
// with |f|^2 = e^{2 rho} and holomorphic structure d/dzbar + b on W^{-1}. C and psi are the
// coefficients in the frames f^2 (x) d/dz and f. Normalized curvature s_L = 2 i F_L / vol_g,
// so that s_TN = s^g.

struct SpinorVortexSpace {
  std::string kind = "trivial";
  std::function<Real(Real, Real)> sigma = [](Real, Real) { return Real(0); };
  std::function<Real(Real, Real)> rho = [](Real, Real) { return Real(0); };
  std::function<Complex(Real, Real)> b = [](Real, Real) { return Complex(0); };
  std::function<Complex(Real, Real)> C = [](Real, Real) { return Complex(0); };
  std::function<Complex(Real, Real)> psi = [](Real, Real) { return Complex(0); };
  std::pair<Real, Real> xr{-1, 1}, yr{-1, 1};
};

namespace detail {
template <class F>
Complex dzbar(F&& f, Real x, Real y, Real h) {
  const Complex fx = fd1([&](Real s) { return Complex(f(s, y)); }, x, h, 4);
  const Complex fy = fd1([&](Real s) { return Complex(f(x, s)); }, y, h, 4);
  return Real(0.5) * (fx + kI * fy);
}
template <class F>
Complex dz(F&& f, Real x, Real y, Real h) {
  const Complex fx = fd1([&](Real s) { return Complex(f(s, y)); }, x, h, 4);
  const Complex fy = fd1([&](Real s) { return Complex(f(x, s)); }, y, h, 4);
  return Real(0.5) * (fx - kI * fy);
}
template <class F>
Real laplacian2(F&& f, Real x, Real y, Real h) {
  auto fx = [&](Real s) { return fd1([&](Real u) { return f(u, y); }, s, h, 4); };
  auto fy = [&](Real s) { return fd1([&](Real u) { return f(x, u); }, s, h, 4); };
  return fd1(fx, x, h, 4) + fd1(fy, y, h, 4);
}
}  // namespace detail

// Scalar curvature of e^{2 sigma}|dz|^2 via the product with a flat line.
inline Real surface_scalar_curvature(const SpinorVortexSpace& sv, Real x, Real y, const FDConfig& cfg) {
  const Real m = 4 * cfg.h;
  Chart ch = make_chart({"x", "y", "t"}, {{x - m, x + m}, {y - m, y + m}, {-m, m}});
  MetricField g{ch, [&](const Vec& p) {
                  Mat G = Mat::Zero(3, 3);
                  G(0, 0) = G(1, 1) = std::exp(2 * sv.sigma(p(0), p(1)));
                  G(2, 2) = 1;
                  return G;
                }, {3, 0}};
  return curvature(WeylStructure{g, {}}, make_vec({x, y, 0}), cfg).scal;
}

inline std::array<Real, 3> spinor_vortex_residual(const SpinorVortexSpace& sv, Real x, Real y,
                                                  const FDConfig& cfg = {}) {
  if (x < sv.xr.first || x > sv.xr.second || y < sv.yr.first || y > sv.yr.second)
    throw Error(Errc::OutOfDomain, "point outside surface chart");
  const Real h = cfg.h;
  const Complex b = sv.b(x, y), C = sv.C(x, y), psi = sv.psi(x, y);
  const Real e2s = std::exp(2 * sv.sigma(x, y)), e2r = std::exp(2 * sv.rho(x, y));
  std::array<Real, 3> res{};
  res[0] = std::abs(detail::dzbar(sv.C, x, y, h) + Real(2) * b * C);
  res[1] = std::abs(detail::dzbar(sv.psi, x, y, h) + b * psi +
                    Real(3) * C * std::conj(psi) * e2r * Real(0.5) * e2s);
  const Real re_bz = detail::dz(sv.b, x, y, h).real();
  const Real lap_rho = detail::laplacian2(sv.rho, x, y, h);
  const Real sg = surface_scalar_curvature(sv, x, y, cfg);
  const Real s = sg + 4 / e2s * (2 * re_bz - Real(0.5) * lap_rho);
  const Real rhs = std::norm(psi) * e2r - 2 * std::norm(C) * e2r * e2r * Real(0.5) * e2s;
  res[2] = std::abs(s - rhs);
  return res;
}

// ---------- Hitchin fields (Vect(S^1)-valued, coordinates (x, y, t)) ----------
//
// Phi d/dt is the dz-coefficient of the Higgs field; the connection enters the metric as
// dt + alpha dz + conj(alpha) dzbar and the gauge potential is its negative. Vector fields
// a d/dt, c d/dt bracket as {a, c} = a c_t - c a_t.

struct HitchinField {
  SpinorVortexSpace sv;
  std::string algebra = "vect_s1";  // "abelian", "aff" or "vect_s1"
  std::function<Complex(const Vec3&)> Phi;
  std::function<Complex(const Vec3&)> alpha = [](const Vec3&) { return Complex(0); };
};

namespace detail {
struct CJet {
  Complex v, x, y, t;
};
inline CJet cjet(const std::function<Complex(const Vec3&)>& f, const Vec3& p, Real h) {
  auto d = [&](int k) {
    return fd1([&](Real s) { Vec3 q = p; q(k) = s; return f(q); }, p(k), h, 4);
  };
  return {f(p), d(0), d(1), d(2)};
}
}  // namespace detail

inline std::pair<Real, Real> hitchin_residual(const HitchinField& hf, const Vec3& p, Real h = 1e-3L) {
  const auto& sv = hf.sv;
  if (p(0) < sv.xr.first || p(0) > sv.xr.second || p(1) < sv.yr.first || p(1) > sv.yr.second)
    throw Error(Errc::OutOfDomain, "point outside surface chart");
  auto conjf = [](const std::function<Complex(const Vec3&)>& f) {
    return [f](const Vec3& q) { return std::conj(f(q)); };
  };
  const detail::CJet P = detail::cjet(hf.Phi, p, h), Pb = detail::cjet(conjf(hf.Phi), p, h);
  const detail::CJet A = detail::cjet(hf.alpha, p, h), Ab = detail::cjet(conjf(hf.alpha), p, h);
  auto dzb = [](const detail::CJet& j) { return Real(0.5) * (j.x + kI * j.y); };
  auto dzz = [](const detail::CJet& j) { return Real(0.5) * (j.x - kI * j.y); };
  auto br = [](const detail::CJet& u, const detail::CJet& w) { return u.v * w.t - w.v * u.t; };
  const Complex psi = sv.psi(p(0), p(1)), C = sv.C(p(0), p(1)), b = sv.b(p(0), p(1));
  const Real e2s = std::exp(2 * sv.sigma(p(0), p(1))), e2r = std::exp(2 * sv.rho(p(0), p(1)));
  const Complex curv = dzb(A) - dzz(Ab) + br(A, Ab) - br(P, Pb) - (psi * Pb.v - std::conj(psi) * P.v);
  const Complex holo = dzb(P) + b * P.v - br(Ab, P) - C * Pb.v * e2r * Real(0.5) * e2s;
  return {std::abs(curv), std::abs(holo)};
}

// ---------- Bogomolny equation on a 3-dimensional Weyl structure ----------

struct BogomolnyField {
  WeylStructure weyl3;
  std::function<CMat(const Vec&)> Phi;
  std::function<std::array<CMat, 3>(const Vec&)> A;  // empty means A = 0
};

inline BogomolnyField abelian_monopole(const WeylStructure& w, std::function<Real(const Vec&)> phi,
                                       std::function<Vec(const Vec&)> A = {}) {
  BogomolnyField bf;
  bf.weyl3 = w;
  bf.Phi = [phi](const Vec& p) { CMat m(1, 1); m(0, 0) = phi(p); return m; };
  if (A)
    bf.A = [A](const Vec& p) {
      Vec a = A(p);
      std::array<CMat, 3> out;
      for (int i = 0; i < 3; ++i) { out[i] = CMat(1, 1); out[i](0, 0) = a(i); }
      return out;
    };
  return bf;
}

// |*(dPhi - omega Phi + [A, Phi]) - dA - [A ^ A]/2| in an orthonormal frame.
inline Real bogomolny_residual(const BogomolnyField& bf, const Vec& p, const FDConfig& cfg = {}) {
  const Chart& ch = bf.weyl3.metric.chart;
  detail::check_point(ch, p);
  const Mat g = bf.weyl3.metric.g(p);
  const CMat Phi = bf.Phi(p);
  const int d = static_cast<int>(Phi.rows());
  std::array<CMat, 3> A;
  for (auto& m : A) m = CMat::Zero(d, d);
  if (bf.A) A = bf.A(p);
  const Vec w = bf.weyl3.omega ? bf.weyl3.omega(p) : Vec(Vec::Zero(3));
  std::array<CMat, 3> cov;
  for (int a = 0; a < 3; ++a) {
    cov[a] = fd_partial([&](const Vec& q) { return CMat(bf.Phi(q)); }, p, a, cfg.h, cfg.order) - w(a) * Phi +
             MatrixAlgebra::bracket(A[a], Phi);
  }
  std::array<std::array<CMat, 3>, 3> F;
  std::array<std::array<CMat, 3>, 3> dA;
  for (int a = 0; a < 3; ++a) {
    auto comp = [&](const Vec& q) {
      std::array<CMat, 3> z;
      if (bf.A) z = bf.A(q);
      else for (auto& m : z) m = CMat::Zero(d, d);
      return z;
    };
    for (int b = 0; b < 3; ++b)
      dA[a][b] = fd_partial([&](const Vec& q) { return CMat(comp(q)[b]); }, p, a, cfg.h, cfg.order);
  }
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) F[a][b] = dA[a][b] - dA[b][a] + MatrixAlgebra::bracket(A[a], A[b]);
  // star of the covariant derivative: (*v)_{bc} = vol eps_{abc} v^a
  const Mat gi = detail::inverse_checked(g);
  const Real vol = std::sqrt(std::abs(g.determinant())) * kOrientation;
  const Frame fr = pseudo_orthonormal_frame(g);
  // residual 2-form R_{bc}, then frame components
  std::array<std::array<CMat, 3>, 3> R;
  for (int b = 0; b < 3; ++b)
    for (int c = 0; c < 3; ++c) {
      CMat acc = CMat::Zero(d, d);
      for (int a = 0; a < 3; ++a) {
        CMat up = CMat::Zero(d, d);
        for (int e = 0; e < 3; ++e) up += gi(a, e) * cov[e];
        acc += (vol * eps3(a, b, c)) * up;
      }
      R[b][c] = acc - F[b][c];
    }
  Real s = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      CMat acc = CMat::Zero(d, d);
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c) acc += (fr.E(b, i) * fr.E(c, j)) * R[b][c];
      s += acc.squaredNorm();
    }
  return std::sqrt(s);
}

}  // namespace ibg
