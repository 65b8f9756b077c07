#include "ibg/models.hpp"

#include <gtest/gtest.h>

#include <cstdlib>

using namespace ibg;
using namespace ibg::models;

namespace {

std::vector<Vec> line_points(int n) {
  std::vector<Vec> pts;
  for (int k = 0; k < n; ++k) pts.push_back(vec3(k, 0, 0));
  return pts;
}

void expect_same(const VerificationReport& a, const VerificationReport& b) {
  EXPECT_EQ(a.max, b.max);
  EXPECT_EQ(a.rms, b.rms);
  EXPECT_EQ(a.worst_point, b.worst_point);
  EXPECT_EQ(a.points, b.points);
  EXPECT_EQ(a.pass, b.pass);
}

}  // namespace

TEST(Report, PassIffMaxWithinTolerance) {
  const GridSpec g{{3}};
  const auto at = make_report("x", g, 0.5L, line_points(3), {0.1L, 0.5L, 0.2L}, 0);
  EXPECT_TRUE(at.pass);
  EXPECT_EQ(at.max, 0.5);
  EXPECT_EQ(at.worst_point[0], 1.0);
  const auto over = make_report("x", g, 0.49L, line_points(3), {0.1L, 0.5L, 0.2L}, 0);
  EXPECT_FALSE(over.pass);
  const auto nan = make_report("x", g, 1, line_points(2), {0.1L, std::numeric_limits<Real>::quiet_NaN()}, 0);
  EXPECT_FALSE(nan.pass);
}

TEST(Grid, ExcludedPointsAreSkipped) {
  Chart c = make_chart({"x", "y", "z"}, {{-1, 1}, {-1, 1}, {-1, 1}}, [](const Vec& p) { return p(0) > 0; });
  int skipped = 0;
  const auto pts = grid_points(c, GridSpec{{4, 4, 4}}, FDConfig{}, &skipped);
  EXPECT_EQ(static_cast<int>(pts.size()) + skipped, 64);
  EXPECT_GT(skipped, 0);
  for (const Vec& p : pts) EXPECT_LE(p(0), 0);
}

TEST(Verify, DeterministicAndThreadIndependent) {
  const WeylStructure w = hcrtoda(Holomorphic{HolKind::Zeta});
  const GridSpec g{{3, 3, 3}};
  setenv("IBG_THREADS", "1", 1);
  const auto one = verify_geometry(GeometryKind::EinsteinWeyl, w, g, 1e-5L);
  setenv("IBG_THREADS", "5", 1);
  const auto five = verify_geometry(GeometryKind::EinsteinWeyl, w, g, 1e-5L);
  const auto again = verify_geometry(GeometryKind::EinsteinWeyl, w, g, 1e-5L);
  unsetenv("IBG_THREADS");
  expect_same(one, five);
  expect_same(five, again);
  EXPECT_TRUE(one.pass);
  EXPECT_EQ(one.points, 27);
}

TEST(Verify, DimensionChecks) {
  EXPECT_THROW(verify_geometry(GeometryKind::Selfdual, flat3().metric, GridSpec{{2, 2, 2}}, 1e-5L), Error);
  EXPECT_THROW(asd_weyl_norm(flat3().metric, vec3(0, 0, 0), FDConfig{}), Error);
}

TEST(Verify, BumpIsNotSelfdual) {
  const MetricField m = bump_flat(0.1L);
  EXPECT_GT(asd_weyl_norm(m, vec4(0, 0, 0, 0), FDConfig{}), 1e-3L);
  EXPECT_LT(asd_weyl_norm(flat4(), vec4(0.1L, 0.2L, 0.3L, 0.4L), FDConfig{}), 1e-10L);
}

TEST(Heavenly, FirstAndSecondEquations) {
  const Chart c = make_chart({"w", "z", "x", "y"}, {{-1, 1}, {-1, 1}, {-1, 1}, {-1, 1}});
  HeavenlyData h1{1, c, [](const Vec& p) { return p(2) * p(0) + p(3) * p(1); }};
  EXPECT_TRUE(pde_residual(h1, GridSpec{{3, 3, 3, 3}}, 1e-10L).pass);
  HeavenlyData h1bad{1, c, [](const Vec& p) { return p(2) * p(0); }};
  EXPECT_NEAR(static_cast<double>(heavenly_point_residual(h1bad, vec4(0.1L, 0.2L, 0.3L, 0.4L))), 1.0, 1e-10);
  HeavenlyData h2{2, c, [](const Vec&) { return Real(0); }};
  EXPECT_TRUE(pde_residual(h2, GridSpec{{3, 3, 3, 3}}, 1e-14L).pass);
}

TEST(Convergence, MeasuredOrders) {
  const WeylStructure w = ewgs(Holomorphic{HolKind::Zeta});
  const Vec p = vec3(1.1L, 0.3L, -0.2L);
  auto study = [&](int order) {
    return convergence_study([&](Real h) { return einstein_weyl_residual(w, p, FDConfig{h, order}); },
                             {4e-2L, 2e-2L, 1e-2L});
  };
  const auto c4 = study(4);
  EXPECT_GE(c4.order, 3.5L);
  EXPECT_FALSE(c4.non_monotone);
  const auto c2 = study(2);
  EXPECT_GE(c2.order, 1.5L);
  // on flat space the residual is round-off at every step
  const auto flat = convergence_study(
      [&](Real h) { return einstein_weyl_residual(flat3(), vec3(0.1L, 0.2L, 0.3L), FDConfig{h, 4}); }, {4e-2L, 2e-2L, 1e-2L});
  EXPECT_TRUE(flat.non_monotone);
  EXPECT_THROW(convergence_study([](Real) { return Real(1); }, {1e-2L, 2e-2L, 1e-3L}), Error);
}
