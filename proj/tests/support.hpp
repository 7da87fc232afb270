#pragma once

#include <cmath>
#include <random>
#include <utility>

#include "heis/distance.hpp"
#include "heis/geodesic.hpp"
#include "heis/group.hpp"
#include "heis/surface.hpp"

namespace heis::test {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(g_); }
  double normal() { return std::normal_distribution<double>()(g_); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(g_); }

  HVec hvec(int n, double scale = 1.0) {
    HVec v(2 * n);
    for (int i = 0; i < 2 * n; ++i) v(i) = uniform(-scale, scale);
    return v;
  }
  HVec unit(int n) {
    HVec v(2 * n);
    for (int i = 0; i < 2 * n; ++i) v(i) = normal();
    return v.normalized();
  }
  Point point(int n, double scale = 1.0) { return Point(hvec(n, scale), uniform(-scale, scale)); }
  FrameVector frame_vector(int n, double scale = 1.0) { return FrameVector(hvec(n, scale), uniform(-scale, scale)); }

 private:
  std::mt19937_64 g_;
};

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// Variation of unit-speed geodesics: base p + eps*dp (coordinates), direction
// normalize(v + eps*a), curvature lam + eps*dlam. Returns d/deps at eps = 0 of
// the point at length s, in frame components at that point.
struct Family {
  Point p;
  HVec v;
  double lam = 0.0;
  CVec dp;
  HVec a;
  double dlam = 0.0;

  Point at(double eps, double s) const {
    const Point pe = Point::from_coords(p.coords() + eps * dp);
    const HVec ve = (v + eps * a).normalized();
    return geodesic_point(pe, ve, lam + eps * dlam, s);
  }
  FrameVector field(double s, double h = 1e-4) const {
    auto central = [&](double e) { return CVec((at(e, s).coords() - at(-e, s).coords()) / (2 * e)); };
    const CVec d = (4.0 * central(0.5 * h) - central(h)) / 3.0;
    return to_frame(at(0.0, s), d);
  }
  GeodesicArc arc(double s) const { return GeodesicArc::make(p, FrameVector(v), lam, s); }
  // U(0), horizontal part of U'(0), lam'
  FrameVector U0() const { return to_frame(p, dp); }
  HVec U0dot() const { return a - a.dot(v) * v; }
};

inline Family random_family(Rng& rng, int n, double lam_max = 3.0) {
  Family f;
  f.p = rng.point(n, 1.5);
  f.v = rng.unit(n);
  f.lam = rng.uniform(-lam_max, lam_max);
  f.dp = CVec(2 * n + 1);
  for (int i = 0; i <= 2 * n; ++i) f.dp(i) = rng.uniform(-1, 1);
  f.a = rng.hvec(n);
  f.dlam = rng.uniform(-1, 1);
  return f;
}

// t = P(z) with P a random cubic; every z gives a point on S
struct Graph {
  LevelSurface S;
  Polynomial P;
  Point at(const HVec& z) const {
    CVec c(z.size() + 1);
    c << z, 0.0;
    return Point(z, P.eval(c));
  }
};

inline Graph random_graph(Rng& rng, int n) {
  const int nv = 2 * n + 1;
  Polynomial P(nv);
  for (int k = 0; k < 3 * n + 3; ++k) {
    std::vector<int> e(nv, 0);
    int deg = rng.integer(1, 3);
    while (deg-- > 0) ++e[rng.integer(0, 2 * n - 1)];
    P.add_term(e, rng.uniform(-1, 1));
  }
  return Graph{LevelSurface(n, Polynomial::variable(nv, 2 * n) - P), P};
}

// a regular point: keep sampling until |N_h| is comfortably away from zero
inline Point regular_point(Rng& rng, const Graph& G, int n) {
  for (;;) {
    const Point q = G.at(rng.hvec(n, 1.2));
    const FrameGradient fg = frame_gradient(G.S, q);
    if (fg.Dh.norm() > 0.2 * std::hypot(fg.Dh.norm(), fg.Tg)) return q;
  }
}

// min over (x, y) of cc_distance(p, (x, y, xy)): grid search, then pattern refinement
inline double saddle_distance_by_search(const Point& p) {
  auto f = [&](double x, double y) { return cc_distance(p, Point::from_list({x, y, x * y})); };
  double bx = 0, by = 0, best = INFINITY;
  for (int i = -40; i <= 40; ++i)
    for (int j = -40; j <= 40; ++j) {
      const double x = 0.05 * i, y = 0.05 * j, v = f(x, y);
      if (v < best) best = v, bx = x, by = y;
    }
  for (double step = 0.05; step > 1e-10; step *= 0.5) {
    bool moved = true;
    while (moved) {
      moved = false;
      for (auto [dx, dy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
        const double v = f(bx + dx * step, by + dy * step);
        if (v < best) best = v, bx += dx * step, by += dy * step, moved = true;
      }
    }
  }
  return best;
}

}  // namespace heis::test
