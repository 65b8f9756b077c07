#pragma once

#include "ibg/core.hpp"

#include <optional>

namespace ibg {

enum class RiccatiType { I, II, III, D, N, Zero };

inline const char* riccati_type_name(RiccatiType t) {
  switch (t) {
    case RiccatiType::I: return "I";
    case RiccatiType::II: return "II";
    case RiccatiType::III: return "III";
    case RiccatiType::D: return "D";
    case RiccatiType::N: return "N";
    case RiccatiType::Zero: return "0";
  }
  return "?";
}

inline constexpr Real kDiagTol = 1e-8L;
inline constexpr Real kBlowUp = 1e8L;

inline Real mat_norm(const CMat3& B) { return B.norm(); }

inline void validate_symmetric_traceless(const CMat3& B) {
  const Real scale = std::max<Real>(1, mat_norm(B));
  if ((B - B.transpose()).norm() > 1e-10L * scale) throw Error(Errc::NotSymmetric, "B not symmetric");
  if (std::abs(B.trace()) > 1e-10L * scale) throw Error(Errc::NotTraceless, "B not traceless");
}

inline CMat3 traceless_part(const CMat3& M) { return M - (M.trace() / Real(3)) * CMat3::Identity(); }

// B_r = 2 (B^2)_0
inline CMat3 riccati_rhs(const CMat3& B) {
  validate_symmetric_traceless(B);
  return 2 * traceless_part(B * B);
}

struct RiccatiInvariants {
  Complex x, y, disc, c2;
  RiccatiType type = RiccatiType::Zero;
};

inline RiccatiInvariants analyze(const CMat3& B) {
  validate_symmetric_traceless(B);
  RiccatiInvariants inv;
  const CMat3 B2 = B * B;
  inv.x = Real(2) / 3 * B2.trace();
  inv.y = Real(4) * B.determinant();
  inv.disc = inv.y * inv.y - inv.x * inv.x * inv.x;
  inv.c2 = Real(-4) * inv.disc / Real(27);
  const Real nb = mat_norm(B);
  if (nb <= 1e-300L) {
    inv.type = RiccatiType::Zero;
    return inv;
  }
  const Real s2 = nb * nb;
  const Real dscale = std::max(std::pow(std::abs(inv.x), 3), std::norm(inv.y));
  if (std::abs(inv.disc) > kDiagTol * std::max(dscale, s2 * s2 * s2 * 1e-8L)) {
    inv.type = RiccatiType::I;
    return inv;
  }
  if (std::abs(inv.x) > kDiagTol * s2) {
    // double root of 4l^3 - 3xl - y
    const Complex lam = -inv.y / (Real(2) * inv.x);
    const CMat3 M = B - lam * CMat3::Identity();
    Eigen::JacobiSVD<CMat3> svd(M);
    const auto sv = svd.singularValues();
    inv.type = sv(1) <= kDiagTol * nb ? RiccatiType::D : RiccatiType::II;
    return inv;
  }
  inv.type = B2.norm() <= kDiagTol * s2 ? RiccatiType::N : RiccatiType::III;
  return inv;
}

struct RiccatiSpace {
  enum class Repr { ClosedForm, Trajectory };
  Repr repr = Repr::ClosedForm;
  RiccatiType type = RiccatiType::Zero;
  Real param = 0;  // b for D/II, beta for N/III
  Real a = 0;      // gauge term; 0 in affine gauge
  bool projective = false;
  std::function<CMat3(Real)> closed;
  std::vector<Real> r;
  std::vector<CMat3> B;
  Real last_good_r = 0;

  CMat3 at(Real rr) const {
    if (repr == Repr::ClosedForm) return closed(rr);
    if (r.empty() || rr < r.front() - 1e-15L || rr > r.back() + 1e-15L)
      throw Error(Errc::OutOfRange, "r outside trajectory");
    auto it = std::lower_bound(r.begin(), r.end(), rr);
    size_t k = static_cast<size_t>(it - r.begin());
    if (k < r.size() && std::abs(r[k] - rr) < 1e-15L) return B[k];
    if (k == 0) return B[0];
    // cubic Hermite using the equation for the end-point slopes
    const size_t i = k - 1;
    const Real h = r[k] - r[i], s = (rr - r[i]) / h;
    const CMat3 d0 = rhs_gauge(B[i]) * h, d1 = rhs_gauge(B[k]) * h;
    const Real h00 = 2 * s * s * s - 3 * s * s + 1, h10 = s * s * s - 2 * s * s + s;
    const Real h01 = -2 * s * s * s + 3 * s * s, h11 = s * s * s - s * s;
    return h00 * B[i] + h10 * d0 + h01 * B[k] + h11 * d1;
  }
  CMat3 rhs_gauge(const CMat3& M) const { return 2 * traceless_part(M * M) + a * M; }
};

namespace detail {
inline CMat3 rk4_step(const CMat3& B, Real h, Real a) {
  auto f = [a](const CMat3& M) -> CMat3 { return 2 * traceless_part(M * M) + a * M; };
  const CMat3 k1 = f(B);
  const CMat3 k2 = f(B + (h / 2) * k1);
  const CMat3 k3 = f(B + (h / 2) * k2);
  const CMat3 k4 = f(B + h * k3);
  return B + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
}
}  // namespace detail

// Fixed-step RK4 in affine gauge.
inline RiccatiSpace solve(const CMat3& B0, std::pair<Real, Real> r_span, int steps) {
  validate_symmetric_traceless(B0);
  if (steps <= 0 || !(r_span.second > r_span.first)) throw Error(Errc::BadParams, "bad r_span/steps");
  RiccatiSpace rs;
  rs.repr = RiccatiSpace::Repr::Trajectory;
  rs.type = analyze(B0).type;
  const Real h = (r_span.second - r_span.first) / steps;
  rs.r.reserve(steps + 1);
  rs.B.reserve(steps + 1);
  rs.r.push_back(r_span.first);
  rs.B.push_back(B0);
  CMat3 B = B0;
  for (int k = 1; k <= steps; ++k) {
    B = detail::rk4_step(B, h, 0);
    const Real rr = r_span.first + k * h;
    if (!std::isfinite(mat_norm(B)) || mat_norm(B) > kBlowUp) {
      rs.last_good_r = rs.r.back();
      throw Error(Errc::BlowUp, "Riccati solution exceeds threshold after r = " +
                                    std::to_string(static_cast<double>(rs.last_good_r)));
    }
    rs.r.push_back(rr);
    rs.B.push_back(B);
  }
  rs.last_good_r = rs.r.back();
  return rs;
}

inline CMat3 shape_d2(Complex lam, Complex mu) {
  CMat3 B = CMat3::Zero();
  B(0, 0) = lam + mu;
  B(0, 1) = B(1, 0) = kI * mu;
  B(1, 1) = lam - mu;
  B(2, 2) = Real(-2) * lam;
  return B;
}

inline CMat3 shape_n3(Complex mu, Complex beta) {
  CMat3 B = CMat3::Zero();
  B(0, 0) = mu;
  B(0, 1) = B(1, 0) = kI * mu;
  B(1, 1) = -mu;
  B(0, 2) = B(2, 0) = beta;
  B(1, 2) = B(2, 1) = kI * beta;
  return B;
}

// Closed forms: D/II use lambda = 1/(2r), mu = b r^2; III uses mu = 2 beta^2 r; N is constant.
inline RiccatiSpace closed_form(RiccatiType t, Real param = 0) {
  RiccatiSpace rs;
  rs.repr = RiccatiSpace::Repr::ClosedForm;
  rs.type = t;
  rs.param = param;
  switch (t) {
    case RiccatiType::Zero:
      rs.closed = [](Real) { return CMat3::Zero().eval(); };
      break;
    case RiccatiType::D:
      rs.closed = [](Real r) { return shape_d2(1 / (2 * r), 0); };
      break;
    case RiccatiType::II:
      if (param == 0) throw Error(Errc::BadParams, "type II needs b != 0");
      rs.closed = [param](Real r) { return shape_d2(1 / (2 * r), param * r * r); };
      break;
    case RiccatiType::N:
      if (param == 0) throw Error(Errc::BadParams, "type N needs beta != 0");
      rs.closed = [param](Real) { return shape_d2(0, param); };
      break;
    case RiccatiType::III:
      if (param == 0) throw Error(Errc::BadParams, "type III needs beta != 0");
      rs.closed = [param](Real r) { return shape_n3(2 * param * param * r, param); };
      break;
    case RiccatiType::I:
      throw Error(Errc::TypeIUnsupported, "type I is only available through solve()");
  }
  return rs;
}

// Constant-a projective gauge: s = e^{a r}/a, B(r) = e^{a r} B_affine(s).
inline RiccatiSpace to_projective(const RiccatiSpace& affine, Real a) {
  if (a == 0) throw Error(Errc::BadParams, "projective gauge needs a != 0");
  RiccatiSpace rs;
  rs.repr = RiccatiSpace::Repr::ClosedForm;
  rs.type = affine.type;
  rs.param = affine.param;
  rs.a = a;
  rs.projective = true;
  rs.closed = [affine, a](Real r) {
    const Real lam = std::exp(a * r);
    return (lam * affine.at(lam / a)).eval();
  };
  return rs;
}

inline RiccatiSpace to_affine(const RiccatiSpace& proj) {
  if (!proj.projective || proj.a == 0) throw Error(Errc::BadParams, "input not in projective gauge");
  RiccatiSpace rs;
  rs.repr = RiccatiSpace::Repr::ClosedForm;
  rs.type = proj.type;
  rs.param = proj.param;
  const Real a = proj.a;
  rs.closed = [proj, a](Real s) {
    const Real r = std::log(a * s) / a;
    return (proj.at(r) / std::exp(a * r)).eval();
  };
  return rs;
}

// Residual of the gauge-aware equation B_r = 2(B^2)_0 + a B, by FD in r.
inline Real riccati_residual(const RiccatiSpace& rs, Real r, Real h = 1e-3L, int order = 6) {
  const CMat3 dB = fd1([&](Real s) { return rs.at(s); }, r, h, order);
  return (dB - rs.rhs_gauge(rs.at(r))).norm();
}

// ---- Darboux-Halphen / Chazy ----

struct Jet1 {
  std::function<Real(Real)> f;
  std::function<Real(Real)> d1, d2, d3;  // optional analytic derivatives
};

struct HalphenChazyResult {
  Real halphen = 0;
  Real chazy = 0;
  Real linkage = 0;
};

namespace detail {
inline Real jet_d(const Jet1& j, int k, Real t, Real h) {
  switch (k) {
    case 1:
      if (j.d1) return j.d1(t);
      return fd1(j.f, t, h, 6);
    case 2:
      if (j.d2) return j.d2(t);
      if (j.d1) return fd1(j.d1, t, h, 6);
      return fd1([&](Real s) { return fd1(j.f, s, h, 6); }, t, h, 6);
    default:
      if (j.d3) return j.d3(t);
      if (j.d2) return fd1(j.d2, t, h, 6);
      return fd1([&](Real s) { return jet_d(j, 2, s, h); }, t, h, 6);
  }
}
}  // namespace detail

// Max-norm residuals of Darboux-Halphen for (A_i), Chazy for a, and |a + (2/3) sum A_i|.
inline HalphenChazyResult halphen_chazy_residual(const std::array<Jet1, 3>& A, const Jet1& a,
                                                 const std::vector<Real>& ts, Real h = 2e-3L) {
  HalphenChazyResult res;
  for (Real t : ts) {
    std::array<Real, 3> v{}, dv{};
    for (int i = 0; i < 3; ++i) {
      v[i] = A[i].f(t);
      dv[i] = detail::jet_d(A[i], 1, t, h);
    }
    for (int i = 0; i < 3; ++i) {
      const int j = (i + 1) % 3, k = (i + 2) % 3;
      res.halphen = std::max(res.halphen, std::abs(dv[i] - (v[j] * v[k] - v[i] * (v[j] + v[k]))));
    }
    const Real a0 = a.f(t), a1 = detail::jet_d(a, 1, t, h), a2 = detail::jet_d(a, 2, t, h),
               a3 = detail::jet_d(a, 3, t, h);
    res.chazy = std::max(res.chazy, std::abs(a3 - (6 * a0 * a2 - 9 * a1 * a1)));
    res.linkage = std::max(res.linkage, std::abs(a0 + Real(2) / 3 * (v[0] + v[1] + v[2])));
  }
  return res;
}

// Exact derivatives of the quadratic Halphen flow at a state: returns {A, A', A'', A'''}.
inline std::array<Vec3, 4> halphen_jet(const Vec3& A) {
  auto f = [](const Vec3& x, int i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    return x(j) * x(k) - x(i) * (x(j) + x(k));
  };
  // bilinear form q(x,y)_i = (x_j y_k + x_k y_j)/2 - (x_i (y_j+y_k) + y_i (x_j+x_k))/2
  auto q = [](const Vec3& x, const Vec3& y, int i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    return (x(j) * y(k) + x(k) * y(j)) / 2 - (x(i) * (y(j) + y(k)) + y(i) * (x(j) + x(k))) / 2;
  };
  std::array<Vec3, 4> J;
  J[0] = A;
  for (int i = 0; i < 3; ++i) J[1](i) = f(A, i);
  for (int i = 0; i < 3; ++i) J[2](i) = 2 * q(A, J[1], i);
  for (int i = 0; i < 3; ++i) J[3](i) = 2 * q(J[1], J[1], i) + 2 * q(A, J[2], i);
  return J;
}

inline Vec3 halphen_rhs(const Vec3& A) { return halphen_jet(A)[1]; }

// Coupled (w, A) Bianchi IX system with A following Darboux-Halphen.
struct BianchiState {
  Vec3 w, A;
};

inline BianchiState bianchi_rhs(const BianchiState& s) {
  BianchiState d;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    d.w(i) = s.w(j) * s.w(k) - s.w(i) * (s.A(j) + s.A(k));
  }
  d.A = halphen_rhs(s.A);
  return d;
}

// RK4 with a fixed number of steps so the result is a smooth function of t.
inline BianchiState integrate_bianchi(BianchiState s, Real t0, Real t, int steps) {
  const Real h = (t - t0) / steps;
  auto axpy = [](const BianchiState& x, Real c, const BianchiState& y) {
    return BianchiState{x.w + c * y.w, x.A + c * y.A};
  };
  for (int k = 0; k < steps; ++k) {
    const BianchiState k1 = bianchi_rhs(s);
    const BianchiState k2 = bianchi_rhs(axpy(s, h / 2, k1));
    const BianchiState k3 = bianchi_rhs(axpy(s, h / 2, k2));
    const BianchiState k4 = bianchi_rhs(axpy(s, h, k3));
    s.w += (h / 6) * (k1.w + 2 * k2.w + 2 * k3.w + k4.w);
    s.A += (h / 6) * (k1.A + 2 * k2.A + 2 * k3.A + k4.A);
  }
  return s;
}

}  // namespace ibg
