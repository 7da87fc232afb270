#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "heis/distance.hpp"
#include "heis/oracles.hpp"
#include "support.hpp"

using namespace heis;
constexpr double kPi = std::numbers::pi;

namespace {

void check_projection_invariants(const LevelSurface& S, const Point& p, const ProjectionResult& r) {
  EXPECT_LE(coord_gap(r.arc.base, r.foot), 0.0);
  EXPECT_LE(coord_gap(geodesic_point(r.arc), p), 1e-8);
  const SurfaceFrame F = frame_at(S, r.foot);
  EXPECT_LE((r.arc.dir.h - F.nu_h.h).norm(), 1e-8);
  EXPECT_NEAR(r.arc.curvature, F.lambda, 1e-8 * (1 + std::abs(F.lambda)));
  EXPECT_NEAR(r.arc.length, r.dist, 0.0);
}

}  // namespace

TEST(Distance, SimpleValues) {
  test::Rng rng(60);
  for (int n = 1; n <= kMaxN; ++n) {
    const Point p = rng.point(n);
    EXPECT_EQ(cc_distance(p, p), 0.0);
    for (double a : {0.1, 1.0, 7.0}) {
      Point q = Point::origin(n);
      q.z(0) = a;
      EXPECT_NEAR(cc_distance(Point::origin(n), q), a, 1e-14 * a);
    }
    for (double t : {0.1, 1.0, 4.0}) {
      Point q = Point::origin(n);
      q.t = t;
      EXPECT_NEAR(cc_distance(Point::origin(n), q), std::sqrt(2 * kPi * t), 1e-14);
      q.t = -t;
      EXPECT_NEAR(cc_distance(Point::origin(n), q), std::sqrt(2 * kPi * t), 1e-14);
    }
  }
}

TEST(Distance, InverseReproducesTarget) {
  test::Rng rng(61);
  for (int k = 0; k < 500; ++k) {
    const int n = rng.integer(1, kMaxN);
    const Point p = rng.point(n, 2.0);
    Point q = rng.point(n, 2.0);
    // mix in targets close to the vertical axis and to the horizontal plane
    if (k % 5 == 1) q = group_mul(p, Point(1e-4 * rng.hvec(n), rng.uniform(-2, 2)));
    if (k % 5 == 2) q = group_mul(p, Point(rng.hvec(n, 2.0), 0.0));
    const InverseGeodesic inv = cc_inverse(p, q);
    EXPECT_NEAR(inv.dir.norm(), 1.0, 1e-12);
    EXPECT_LE(std::abs(inv.curvature * inv.length), 2 * kPi * (1 + 1e-12));
    const Point back = geodesic_point(p, inv.dir, inv.curvature, inv.length);
    EXPECT_LE(coord_gap(back, q), 1e-9 * (1 + q.coords().norm()));
  }
}

TEST(Distance, AgreesWithBruteForce) {
  test::Rng rng(62);
  for (int k = 0; k < 12; ++k) {
    const int n = k < 8 ? 1 : 2;
    const Point p = rng.point(n, 1.5), q = rng.point(n, 1.5);
    EXPECT_NEAR(brute_distance(p, q), cc_distance(p, q), 1e-6);
  }
  EXPECT_NEAR(brute_distance(Point::origin(1), Point::from_list({0, 0, 1})), std::sqrt(2 * kPi), 1e-6);
  EXPECT_NEAR(brute_distance(Point::from_list({1, 2, 3}), Point::from_list({1.5, 2, 4})), 0.5, 1e-9);
}

TEST(Distance, MetricProperties) {
  test::Rng rng(63);
  for (int k = 0; k < 300; ++k) {
    const int n = rng.integer(1, kMaxN);
    const Point a = rng.point(n, 2.0), b = rng.point(n, 2.0), c = rng.point(n, 2.0), g = rng.point(n, 3.0);
    const double ab = cc_distance(a, b);
    EXPECT_NEAR(ab, cc_distance(b, a), 1e-9);
    EXPECT_NEAR(ab, cc_distance(group_mul(g, a), group_mul(g, b)), 1e-9);
    EXPECT_LE(cc_distance(a, c), ab + cc_distance(b, c) + 1e-9);
  }
}

TEST(Distance, ShortArcsMinimise) {
  test::Rng rng(64);
  for (int k = 0; k < 300; ++k) {
    const int n = rng.integer(1, kMaxN);
    const double s = rng.uniform(0.05, 3.0);
    const double lam = rng.uniform(-1, 1) * 0.999 * kPi / s;
    const GeodesicArc arc = GeodesicArc::make(rng.point(n), FrameVector(rng.unit(n)), lam, s);
    EXPECT_NEAR(cc_distance(arc.base, geodesic_point(arc)), s, 1e-8);
  }
}

TEST(Distance, GaugeIsComparable) {
  test::Rng rng(65);
  for (int k = 0; k < 200; ++k) {
    const int n = rng.integer(1, kMaxN);
    const Point a = rng.point(n, 2.0), b = rng.point(n, 2.0);
    const double ratio = cc_distance(a, b) / gauge_distance(a, b);
    EXPECT_GE(ratio, 0.8);
    EXPECT_LE(ratio, std::sqrt(kPi / 2) + 1e-12);
  }
}

TEST(Distance, ExpSBasics) {
  const LevelSurface S = plane_t(1);
  for (double r0 : {0.5, 1.0, 2.0}) {
    const double ang = 0.3 * r0;
    const Point q = Point::from_list({r0 * std::cos(ang), r0 * std::sin(ang), 0.0});
    EXPECT_EQ(coord_gap(exp_S(S, q, 0.0), q), 0.0);
    const Point hit = exp_S(S, q, kPi * r0 / 2);
    EXPECT_LE(coord_gap(hit, Point::from_list({0, 0, kPi * r0 * r0 / 4})), 1e-10);
    const double h = 1e-6;
    const FrameVector v = to_frame(q, (exp_S(S, q, h).coords() - exp_S(S, q, -h).coords()) / (2 * h));
    EXPECT_LE((v.h - frame_at(S, q).nu_h.h).norm(), 1e-8);
  }
  EXPECT_THROW(exp_S(S, Point::origin(1), 1.0), SingularPoint);
}

TEST(Distance, ProjectOntoVerticalPlane) {
  test::Rng rng(66);
  for (int n = 1; n <= 3; ++n) {
    const LevelSurface S = halfspace_x1(n);
    std::vector<Interval> b(2 * n, Interval{-3, 3});
    const auto seeds = box_patch(n, 0, b).grid(S, n == 1 ? 10 : 4);
    for (int k = 0; k < 20; ++k) {
      Point p = rng.point(n, 2.0);
      p.z(0) = rng.uniform(0.05, 1.5);
      const ProjectionResult r = project_unique(S, p, seeds);
      EXPECT_NEAR(r.dist, p.z(0), 1e-10);
      Point foot = p;
      foot.z(0) = 0.0;
      foot.t = p.t - p.z(0) * p.z(1);
      EXPECT_LE(coord_gap(r.foot, foot), 1e-10);
      EXPECT_EQ(r.multiplicity_hint, 1);
      check_projection_invariants(S, p, r);
    }
  }
}

TEST(Distance, ProjectOntoPlaneTFromAxis) {
  const LevelSurface S = plane_t(1);
  const auto seeds = annulus_patch(1, 0.01, 3.0).grid(S, 40);
  for (double t : {0.1, 1.0, 4.0}) {
    const ProjectionResult r = project_to_surface(S, Point::from_list({0, 0, t}), seeds);
    EXPECT_NEAR(r.dist, std::sqrt(kPi * t), 1e-8 * std::sqrt(kPi * t));
    EXPECT_TRUE(r.ambiguous);
    EXPECT_GE(r.multiplicity_hint, 2);
    EXPECT_THROW(project_unique(S, Point::from_list({0, 0, t}), seeds), AmbiguousProjection);
  }
}

TEST(Distance, ProjectOntoPlaneTOffAxis) {
  const LevelSurface S = plane_t(1);
  const auto seeds = annulus_patch(1, 0.3, 3.0).grid(S, 30);
  test::Rng rng(67);
  for (int k = 0; k < 20; ++k) {
    const double r0 = rng.uniform(1.0, 2.0), ang = rng.uniform(0, 2 * kPi), s = rng.uniform(0.05, 0.8) * r0;
    const Point q = Point::from_list({r0 * std::cos(ang), r0 * std::sin(ang), 0.0});
    const Point p = exp_S(S, q, s);
    const ProjectionResult r = project_unique(S, p, seeds);
    EXPECT_NEAR(r.dist, s, 1e-9);
    EXPECT_LE(coord_gap(r.foot, q), 1e-8);
    EXPECT_EQ(r.multiplicity_hint, 1);
    check_projection_invariants(S, p, r);
  }
}

TEST(Distance, SaddleCutPoints) {
  const LevelSurface S = saddle_t_xy(1);
  const auto seeds = box_patch(1, 2, {{-2, 2}, {-2, 2}}).grid(S, 40);
  for (double x0 : {0.4, 0.7, 1.1})
    for (double y0 : {-0.3, 0.3}) {
      const Point p = Point::from_list({0, y0 - x0, kPi / 2 * x0 * x0});
      const ProjectionResult r = project_to_surface(S, p, seeds);
      EXPECT_NEAR(r.dist, kPi / 2 * x0, 1e-8);
      EXPECT_TRUE(r.ambiguous);
      EXPECT_EQ(r.multiplicity_hint, 2);
    }
}

// Over the singular line the foot sits at distance sqrt(pi t / 2).
TEST(Distance, SaddleAxis) {
  const LevelSurface S = saddle_t_xy(1);
  const auto seeds = box_patch(1, 2, {{-2, 2}, {-2, 2}}).grid(S, 40);
  for (double t : {0.5, 1.0}) {
    const Point p = Point::from_list({0, 0, t});
    const double search = test::saddle_distance_by_search(p);
    const ProjectionResult r = project_to_surface(S, p, seeds);
    EXPECT_NEAR(r.dist, search, 1e-7);
    EXPECT_NEAR(r.dist, std::sqrt(kPi * t / 2), 1e-8);
  }
}

TEST(Distance, Reach) {
  const LevelSurface H = halfspace_x1(1);
  EXPECT_TRUE(reach_estimate(H, box_patch(1, 0, {{-1, 1}, {-1, 1}}).grid(H, 6)).unbounded());

  const LevelSurface S = plane_t(1);
  const auto grid = annulus_patch(1, 1.0, 2.0).grid(S, 12);
  double rmin = INFINITY;
  for (const auto& q : grid) rmin = std::min(rmin, q.z.norm());
  EXPECT_NEAR(reach_estimate(S, grid).value, kPi / 2 * rmin, 1e-6);

  double prev = INFINITY;
  for (double rho : {1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125}) {
    const double v = reach_estimate(S, annulus_patch(1, rho, 2 * rho).grid(S, 8)).value;
    EXPECT_LT(v, prev);
    prev = v;
  }
  EXPECT_LT(prev, 0.06);
}

TEST(Distance, ParallelSurfaces) {
  const LevelSurface H = halfspace_x1(1);
  const SurfacePatch UH = box_patch(1, 0, {{-1, 1}, {-1, 1}});
  for (const auto& p : parallel_surface_sample(H, UH, 6, 0.3)) EXPECT_NEAR(p.z(0), 0.3, 1e-15);

  const LevelSurface S = plane_t(1);
  const SurfacePatch U = annulus_patch(1, 1.0, 2.0);
  const auto grid = U.grid(S, 10);
  const auto same = parallel_surface_sample(S, U, 10, 0.0);
  ASSERT_EQ(same.size(), grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_EQ(coord_gap(same[i], grid[i]), 0.0);

  const auto shifted = parallel_surface_sample(S, U, 10, 0.1);
  ASSERT_EQ(shifted.size(), grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_NEAR(cc_distance(shifted[i], grid[i]), 0.1, 1e-10);
  EXPECT_THROW(parallel_surface_sample(S, U, 10, 2.0), ReachExceeded);
}
