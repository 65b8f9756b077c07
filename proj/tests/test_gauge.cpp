#include "ibg/models.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace ibg;
using namespace ibg::models;

namespace {

Triple generic_su2_initial() {
  const MatrixAlgebra su2 = su2_algebra();
  Triple p0;
  for (int i = 0; i < 3; ++i) p0[i] = su2.basis[i] * Real(0.3L + 0.2L * i) + su2.basis[(i + 1) % 3] * Real(0.1L);
  return p0;
}

}  // namespace

TEST(Algebra, StructureConstants) {
  for (const MatrixAlgebra& a : {su2_algebra(), so3_algebra(), abelian_algebra(), aff_algebra()}) {
    EXPECT_LT(antisymmetry_residual(a), 1e-12L) << a.name;
    EXPECT_LT(jacobi_residual(a), 1e-12L) << a.name;
  }
  EXPECT_THROW(algebra_by_name("e8"), Error);
}

TEST(Nahm, PoleSolution) {
  const NahmField nf = nahm_su2_pole();
  for (Real r : {Real(1.1L), Real(1.5L), Real(1.9L)}) EXPECT_LT(nahm_residual(nf, r), 1e-10L);
}

TEST(Nahm, AbelianConstant) {
  NahmField nf;
  nf.algebra = abelian_algebra();
  nf.riccati = closed_form(RiccatiType::Zero);
  const auto basis = nf.algebra.basis;
  nf.analytic = [basis](Real) { return Triple{basis[0] * Real(0.4L), basis[1] * Real(-1.2L), basis[2] * Real(0.7L)}; };
  EXPECT_LT(nahm_residual(nf, 1.3L), 1e-14L);
}

TEST(Nahm, EulerTopIntegrals) {
  const Vec3 f0(0.6L, 0.4L, 0.5L);
  const NahmField nf = solve_nahm(euler_top_initial(f0), closed_form(RiccatiType::Zero), su2_algebra(), {0, 1}, 1000);
  const Real i1 = f0(0) * f0(0) - f0(1) * f0(1), i2 = f0(1) * f0(1) - f0(2) * f0(2);
  for (size_t k = 0; k < nf.r.size(); k += 100) {
    const Vec3 f = euler_coefficients(nf.phi[k]);
    EXPECT_NEAR(static_cast<double>(f(0) * f(0) - f(1) * f(1)), static_cast<double>(i1), 1e-10);
    EXPECT_NEAR(static_cast<double>(f(1) * f(1) - f(2) * f(2)), static_cast<double>(i2), 1e-10);
  }
  EXPECT_LT(nahm_residual(nf, nf.r[500]), 1e-8L);
}

TEST(Nahm, TypeDBackground) {
  for (Real a : {Real(0), Real(1) / 3}) {
    const RiccatiSpace rs = a == 0 ? closed_form(RiccatiType::D) : to_projective(closed_form(RiccatiType::D), a);
    const NahmField nf = solve_nahm(generic_su2_initial(), rs, su2_algebra(), {1.0L, 1.5L}, 500);
    for (size_t k : {10u, 250u, 480u}) EXPECT_LT(nahm_residual(nf, nf.r[k]), 1e-8L);
  }
}

TEST(Nahm, AlgebraMismatch) {
  NahmField nf = nahm_su2_pole();
  nf.algebra = so3_algebra();
  try {
    nahm_residual(nf, 1.5L);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::AlgebraMismatch);
  }
}

TEST(Lax, RandomSamplesOnSolutions) {
  const NahmField nf = solve_nahm(generic_su2_initial(), closed_form(RiccatiType::D), su2_algebra(), {1.0L, 1.5L}, 500);
  NahmField bad = nf;
  for (auto& t : bad.phi) t[1] *= Real(1.01L);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  std::uniform_int_distribution<int> node(20, 480);
  int used = 0;
  Real worst = 0, best_bad = 1e300L;
  while (used < 20) {
    const Complex z(u(rng), u(rng));
    const Real r = nf.r[node(rng)];
    if (std::abs(lax_q(nf.riccati.at(r), z)) < 1e-2L) continue;
    ++used;
    worst = std::max(worst, lax_residual_at(nf, z, r));
    best_bad = std::min(best_bad, lax_residual_at(bad, z, r));
  }
  EXPECT_LT(worst, 1e-7L);
  EXPECT_GT(best_bad, 1e-4L);
}

TEST(Lax, PoleSolutionMatchesStandardPair) {
  const NahmField nf = nahm_su2_pole();
  for (Real r : {Real(1.2L), Real(1.7L)})
    for (Complex z : {Complex(0.3L, 0.4L), Complex(-0.8L, 0.2L)}) {
      EXPECT_LT(lax_residual_at(nf, z, r), 1e-9L);
      const Triple P = nf.at(r);
      const LaxGenerators g = lax_generators(CMat3::Zero(), P, z);
      const Triple T = oracle::relabel(P);
      EXPECT_LT((g.phi1 - Real(0.5L) * oracle::std_lax_L(T, -z)).norm(), 1e-14L);
      EXPECT_LT((g.phi2 + oracle::std_lax_M(T, -z)).norm(), 1e-14L);
    }
}

TEST(Lax, NearPoleRejected) {
  const NahmField nf = solve_nahm(generic_su2_initial(), closed_form(RiccatiType::D), su2_algebra(), {1.0L, 1.5L}, 500);
  // <B e, e> vanishes for B = diag(l, l, -2l) where the third component of e does, zeta = +-1
  const Real r = nf.r[250];
  try {
    lax_residual_at(nf, Complex(1, 0), r);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NearPole);
  }
}

TEST(HamiltonianNahm, CatalogFields) {
  for (const HamiltonianNahm& hn : {toda_hamiltonian(), tod_so3(), sdiff_rotation()})
    for (const Vec3& x : {Vec3(0.2L, -0.3L, 0.3L), Vec3(-0.4L, 0.5L, 0.35L)})
      EXPECT_LT(nahm_residual_hamiltonian(hn, x), 1e-7L);
  HamiltonianNahm wrong = toda_hamiltonian();
  wrong.a = 0;
  EXPECT_GT(nahm_residual_hamiltonian(wrong, Vec3(0.2L, -0.3L, 0.1L)), 1e-2L);
}

TEST(SpinorVortex, CanonicalInstances) {
  const std::vector<std::pair<SpinorVortexSpace, std::vector<std::pair<Real, Real>>>> cases = {
      {trivial_sv(), {{0.1L, 0.2L}, {-1, 0.5L}}},
      {spherical_sv(), {{0.3L, -0.4L}, {1.5L, 0.8L}}},
      {hyperbolic_sv(), {{0.1L, 0.2L}, {-0.3L, 0.35L}}}};
  for (const auto& [sv, pts] : cases)
    for (const auto& [x, y] : pts) {
      const auto r = spinor_vortex_residual(sv, x, y);
      for (Real v : r) EXPECT_LT(v, 1e-8L) << sv.kind;
    }
  SpinorVortexSpace broken = spherical_sv();
  broken.psi = [](Real, Real) { return Complex(1); };
  const auto r = spinor_vortex_residual(broken, 0.3L, 0.2L);
  EXPECT_GT(std::max({r[0], r[1], r[2]}), 1e-3L);
  EXPECT_THROW(spinor_vortex_residual(hyperbolic_sv(), 0.9L, 0), Error);
}

TEST(Hitchin, TrivialAndAffine) {
  HitchinField triv;
  triv.sv = trivial_sv();
  triv.Phi = [](const Vec3&) { return Complex(1); };
  const auto t = hitchin_residual(triv, Vec3(0.2L, 0.1L, 1.0L));
  EXPECT_LT(t.first, 1e-12L);
  EXPECT_LT(t.second, 1e-12L);
  const HitchinField aff = affine_hitchin();
  for (const Vec3& p : {Vec3(0.3L, -0.2L, 1.1L), Vec3(-0.6L, 0.4L, 2.0L)}) {
    const auto r = hitchin_residual(aff, p);
    EXPECT_LT(r.first, 1e-8L);
    EXPECT_LT(r.second, 1e-8L);
  }
  HitchinField bad = aff;
  bad.alpha = [](const Vec3&) { return Complex(0); };
  EXPECT_GT(hitchin_residual(bad, Vec3(0.3L, -0.2L, 1.1L)).first, 1e-3L);
}

TEST(Bogomolny, FlatExamples) {
  const WeylStructure w = flat3();
  const Vec p = vec3(0.2L, -0.4L, 0.3L);
  EXPECT_LT(bogomolny_residual(abelian_monopole(w, [](const Vec&) { return Real(1.5L); }), p), 1e-14L);
  const auto lin = abelian_monopole(w, [](const Vec& x) { return x(2); }, [](const Vec& x) { return vec3(0, x(0), 0); });
  EXPECT_LT(bogomolny_residual(lin, p), 1e-12L);
  const auto no_a = abelian_monopole(w, [](const Vec& x) { return x(2); });
  EXPECT_NEAR(static_cast<double>(bogomolny_residual(no_a, p)), 1.0, 1e-12);
}

TEST(Bogomolny, DiracMonopole) {
  const auto cs = gh_single();
  const Chart c = make_chart({"x", "y", "z"}, {{-2, 2}, {-2, 2}, {-2, 2}},
                             [cs](const Vec& x) { return near_gh_singularity(cs, x, 0.5L); });
  WeylStructure w = flat3(2);
  w.metric.chart = c;
  auto V = [cs](const Vec& x) { return gh_potential(cs, x); };
  auto A = [cs](const Vec& x) { return gh_connection(cs, x); };
  for (const Vec& p : {vec3(0.7L, 0.3L, 0.4L), vec3(-0.5L, 0.9L, -0.2L)})
    EXPECT_LT(bogomolny_residual(abelian_monopole(w, V, A), p), 1e-9L);
  // the same pair on the Einstein-Weyl base in its own gauge
  const WeylStructure base = gh_base(cs, c);
  EXPECT_LT(bogomolny_residual(to_bogomolny(base, gh_monopole(cs)), vec3(0.7L, 0.3L, 0.4L)), 1e-9L);
}
