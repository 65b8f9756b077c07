#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace ibg {

// long double keeps nested 4th-order stencils above round-off at h ~ 1e-3
using Real = long double;
using Complex = std::complex<Real>;

using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1, 0, 4, 1>;
using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;
using Vec3 = Eigen::Matrix<Real, 3, 1>;
using Mat3 = Eigen::Matrix<Real, 3, 3>;
using CVec3 = Eigen::Matrix<Complex, 3, 1>;
using CMat3 = Eigen::Matrix<Complex, 3, 3>;
using CMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr Real kPi = 3.141592653589793238462643383279502884L;
inline const Complex kI{0, 1};

enum class Errc {
  SingularMetric,
  OutOfDomain,
  StencilOverflow,
  NotSymmetric,
  NotTraceless,
  BlowUp,
  TypeIUnsupported,
  AlgebraMismatch,
  OutOfRange,
  NearPole,
  DegenerateHiggs,
  NullOrbit,
  SingularFrame,
  SingularFraming,
  NonSymmetrizable,
  NonOrthonormalFrame,
  UnknownEntry,
  BadParams,
  ConfigError,
  NonMonotone,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::SingularMetric: return "SingularMetric";
    case Errc::OutOfDomain: return "OutOfDomain";
    case Errc::StencilOverflow: return "StencilOverflow";
    case Errc::NotSymmetric: return "NotSymmetric";
    case Errc::NotTraceless: return "NotTraceless";
    case Errc::BlowUp: return "BlowUp";
    case Errc::TypeIUnsupported: return "TypeIUnsupported";
    case Errc::AlgebraMismatch: return "AlgebraMismatch";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::NearPole: return "NearPole";
    case Errc::DegenerateHiggs: return "DegenerateHiggs";
    case Errc::NullOrbit: return "NullOrbit";
    case Errc::SingularFrame: return "SingularFrame";
    case Errc::SingularFraming: return "SingularFraming";
    case Errc::NonSymmetrizable: return "NonSymmetrizable";
    case Errc::NonOrthonormalFrame: return "NonOrthonormalFrame";
    case Errc::UnknownEntry: return "UnknownEntry";
    case Errc::BadParams: return "BadParams";
    case Errc::ConfigError: return "ConfigError";
    case Errc::NonMonotone: return "NonMonotone";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc c, const std::string& what)
      : std::runtime_error(std::string(errc_name(c)) + ": " + what), code_(c) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

inline Vec make_vec(std::initializer_list<Real> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (Real x : xs) v(i++) = x;
  return v;
}

// Central first-derivative stencils, offsets -m..m with m = order/2.
struct Stencil {
  int half = 2;
  std::array<Real, 3> w{};  // weights for offsets +1..+m; offset -k has -w[k-1]
};

inline Stencil stencil_for(int order) {
  Stencil s;
  switch (order) {
    case 2: s.half = 1; s.w = {0.5L, 0, 0}; break;
    case 4: s.half = 2; s.w = {2.0L / 3.0L, -1.0L / 12.0L, 0}; break;
    case 6: s.half = 3; s.w = {0.75L, -0.15L, 1.0L / 60.0L}; break;
    default: throw Error(Errc::BadParams, "stencil order must be 2, 4 or 6");
  }
  return s;
}

// d/ds f(s) at s0 for any callable returning a vector-space value.
template <class F>
auto fd1(F&& f, Real s0, Real h, int order) {
  using T = std::decay_t<decltype(f(s0))>;
  const Stencil st = stencil_for(order);
  T acc = f(s0 + h) - f(s0 - h);
  acc = acc * st.w[0];
  for (int k = 2; k <= st.half; ++k) {
    T d = f(s0 + k * h) - f(s0 - k * h);
    acc = acc + d * st.w[k - 1];
  }
  T out = acc * (1 / h);
  return out;
}

// Partial derivative along coordinate k.
template <class F>
auto fd_partial(F&& f, const Vec& p, int k, Real h, int order) {
  return fd1(
      [&](Real s) {
        Vec q = p;
        q(k) = s;
        return f(q);
      },
      p(k), h, order);
}

}  // namespace ibg
