#pragma once

// Reference computations used by the tests, written independently of the
// library code paths they are compared against.

#include "ibg/models.hpp"

#include <functional>
#include <string>
#include <vector>

namespace ibg::oracle {

// Standard quadratic Lax matrix of the Nahm equation T_i' = [T_j, T_k]:
// L = (T1 + i T2) - 2i T3 z + (T1 - i T2) z^2, M = dL/dz / 2, with L' = [L, M].
inline CMat std_lax_L(const Triple& T, Complex z) {
  return (T[0] + kI * T[1]) - Real(2) * kI * z * T[2] + z * z * (T[0] - kI * T[1]);
}
inline CMat std_lax_M(const Triple& T, Complex z) { return -kI * T[2] + z * (T[0] - kI * T[1]); }

// Relabels (Phi_1, Phi_2, Phi_3) -> (T_1, T_2, T_3) = (Phi_1, -Phi_3, Phi_2), which keeps the
// cyclic brackets and matches the library's quadric parametrization.
inline Triple relabel(const Triple& P) { return {P[0], CMat(-P[2]), P[1]}; }

// Toda solution u = log z on (x, y, z) pulled back along (r, p, q) -> (p, q, e^r).
struct PulledBack {
  Mat g;
  Vec omega;
};

inline PulledBack toda_log_pullback(const Vec& rpq) {
  const Real z = std::exp(rpq(0));
  // h = e^u (dx^2 + dy^2) + dz^2 with e^u = z, so h = z (dp^2 + dq^2) + z^2 dr^2
  PulledBack out{Mat::Zero(3, 3), Vec::Zero(3)};
  out.g(0, 0) = z * z;
  out.g(1, 1) = out.g(2, 2) = z;
  // omega = -u_z dz = -dz / z = -dr
  out.omega(0) = -1;
  return out;
}

// Perturbation families x -> x + eps dx of the Toda hodograph data x = (p, q, e^t).
struct HodographFamily {
  std::string name;
  std::function<Vec3(const Vec3&)> dx;
};

inline std::vector<HodographFamily> hodograph_families() {
  return {
      {"p^2 in x", [](const Vec3& y) { return Vec3(y(0) * y(0), 0, 0); }},
      {"pq in y", [](const Vec3& y) { return Vec3(0, y(0) * y(1), 0); }},
      {"p in z", [](const Vec3& y) { return Vec3(0, 0, y(0)); }},
      {"sin q in x", [](const Vec3& y) { return Vec3(std::sin(y(1)), 0, 0); }},
      {"tp in x", [](const Vec3& y) { return Vec3(y(2) * y(0), 0, 0); }},
      {"e^t q^2 in z", [](const Vec3& y) { return Vec3(0, 0, std::exp(y(2)) * y(1) * y(1)); }},
      {"shear", [](const Vec3& y) { return Vec3(y(1), 0, 0); }},
      {"linear rotation", [](const Vec3& y) { return Vec3(-y(1), y(0), 0); }},
      {"scale x", [](const Vec3& y) { return Vec3(y(0), 0, 0); }},
      {"scale z", [](const Vec3& y) { return Vec3(0, 0, std::exp(y(2))); }},
      {"translation", [](const Vec3&) { return Vec3(1, 0.5L, 0); }},
      {"p^2 in y", [](const Vec3& y) { return Vec3(0, y(0) * y(0), 0); }},
  };
}

}  // namespace ibg::oracle
