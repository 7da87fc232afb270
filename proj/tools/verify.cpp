#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "cli.hpp"
#include "heis/distance.hpp"
#include "heis/fd.hpp"
#include "heis/jacobi.hpp"
#include "heis/oracles.hpp"
#include "heis/special.hpp"
#include "heis/steiner.hpp"

namespace heis::cli {

namespace {

constexpr double kPi = std::numbers::pi;

struct Rng {
  std::mt19937_64 g;
  explicit Rng(std::uint64_t s) : g(s) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(g); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(g); }
  HVec unit(int n) {
    HVec v(2 * n);
    std::normal_distribution<double> nd;
    for (int i = 0; i < 2 * n; ++i) v(i) = nd(g);
    return v.normalized();
  }
  Point point(int n, double scale) {
    CVec c(2 * n + 1);
    for (int i = 0; i <= 2 * n; ++i) c(i) = uniform(-scale, scale);
    return Point::from_coords(c);
  }
};

Check upper(std::string name, double err, double tol) { return {std::move(name), err, 0.0, tol, err <= tol}; }

Check against(std::string name, double value, double ref, double tol) {
  return {std::move(name), value, ref, tol, std::abs(value - ref) <= tol};
}

// Composite Gauss-Legendre on [a, b].
template <class F>
double integrate(F&& f, double a, double b) {
  std::vector<double> x, w;
  gauss_legendre(32, x, w);
  const int panels = 8;
  const double h = (b - a) / panels;
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (std::size_t i = 0; i < x.size(); ++i) acc += 0.5 * h * w[i] * f(mid + 0.5 * h * x[i]);
  }
  return acc;
}

}  // namespace

std::vector<Check> verify_suite(std::uint64_t seed, int threads) {
  std::vector<Check> out;
  Rng rng(seed);

  double e_id = 0.0, e_chain = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double lam = rng.uniform(-10, 10), s = rng.uniform(0, 5);
    const auto v = special::f_all(lam, s);
    e_id = std::max(e_id, std::abs(v.f1 * v.f1 - v.f0 * v.f2 - v.f2));
    e_chain = std::max(e_chain, std::abs(v.f2 - integrate([&](double u) { return special::f1(lam, u); }, 0, s)));
  }
  out.push_back(upper("special_identity", e_id, 1e-12));
  out.push_back(upper("special_integral_chain", e_chain, 1e-12));

  double e_rk4 = 0.0;
  for (int k = 0; k < 20; ++k) {
    const int n = rng.integer(1, 3);
    const auto a = GeodesicArc::make(rng.point(n, 2.0), FrameVector(rng.unit(n)), rng.uniform(-5, 5),
                                     rng.uniform(0, 3));
    e_rk4 = std::max(e_rk4, coord_gap(geodesic_point(a), geodesic_ode_oracle(a, 10000)));
  }
  out.push_back(upper("geodesic_vs_rk4", e_rk4, 1e-8));

  double e_brute = 0.0;
  for (int k = 0; k < 4; ++k) {
    const Point p = rng.point(1, 1.5), q = rng.point(1, 1.5);
    e_brute = std::max(e_brute, std::abs(cc_distance(p, q) - brute_distance(p, q)));
  }
  out.push_back(upper("distance_vs_brute_force", e_brute, 1e-6));

  double e_jac = 0.0;
  for (int k = 0; k < 10; ++k) {
    const int n = rng.integer(1, 3);
    const Point p = rng.point(n, 1.5);
    const HVec v = rng.unit(n);
    const double lam = rng.uniform(-3, 3), s = rng.uniform(0.1, 3.0);
    CVec dp(2 * n + 1);
    for (int i = 0; i <= 2 * n; ++i) dp(i) = rng.uniform(-1, 1);
    auto at = [&](double e) { return geodesic_point(Point::from_coords(p.coords() + e * dp), v, lam, s).coords(); };
    const double h = 1e-4;
    const CVec d1 = (at(h) - at(-h)) / (2 * h), d2 = (at(h / 2) - at(-h / 2)) / h;
    const FrameVector fd = to_frame(geodesic_point(p, v, lam, s), CVec((4 * d2 - d1) / 3));
    JacobiData jd;
    jd.U0 = to_frame(p, dp);
    jd.U0dot = FrameVector::zero(n);
    const FrameVector U = jacobi_field(jd, GeodesicArc::make(p, FrameVector(v), lam, s));
    e_jac = std::max(e_jac, (U.flat() - fd.flat()).norm() / std::max(1.0, fd.flat().norm()));
  }
  out.push_back(upper("jacobi_vs_finite_differences", e_jac, 1e-6));

  {
    const LevelSurface S = plane_t(1);
    const auto seeds = annulus_patch(1, 0.01, 3.0).grid(S, 40);
    const double d = project_to_surface(S, Point::from_list({0, 0, 1}), seeds).dist;
    out.push_back(against("plane_t_axis_distance", d, std::sqrt(kPi), 1e-8));
  }
  {
    const LevelSurface S = saddle_t_xy(1);
    const auto seeds = box_patch(1, 2, {{-4, 4}, {-4, 4}}).grid(S, 80);
    const ProjectionResult r = project_to_surface(S, Point::from_list({0, -0.7, kPi / 2 * 0.49}), seeds);
    out.push_back(against("saddle_cut_point_distance", r.dist, kPi / 2 * 0.7, 1e-8));
    out.push_back(against("saddle_cut_point_feet", r.multiplicity_hint, 2, 0));
  }

  {
    const LevelSurface S = paraboloid(1, 1.0);
    const Point q = Point::from_list({0.6, -0.3, 0.45});
    const SurfaceFrame F = frame_at(S, q);
    const double fd = fd_directional(S, q, F.basis[0], [&](const Point& x) { return frame_at(S, x).lambda; });
    out.push_back(against("lambda_derivative_vs_fd", F.dlam(0), fd, 1e-6));
    out.push_back(upper("nabla_E_nu_h_identity", nabla_E_nuh_check(saddle_t_xy(1), Point::from_list({1, 1, 1})), 1e-5));
  }

  TubeOptions topt;
  topt.threads = threads;
  {
    const LevelSurface S = plane_t(1);
    const SurfacePatch U = annulus_patch(1, 1.0, 2.0);
    const double a = tube_volume_h1(S, U, {0.1}, topt).volumes[0];
    const double b = tube_volume_hn(S, U, {0.1}, topt).volumes[0];
    out.push_back(against("h1_formula_vs_det_b", a, b, 1e-8 * b));

    MCOptions mo;
    mo.threads = threads;
    const MCEstimate mc = mc_tube_volume(S, U, tube_bounding_box(S, U, 0.2), 0.2, 20000, seed, mo);
    const double ref = tube_volume_h1(S, U, {0.2}, topt).volumes[0];
    out.push_back(against("monte_carlo_4_sigma", mc.value, ref, 4 * mc.std_error));
  }
  {
    TubeOptions light = topt;
    light.quad = {4, 2};
    const LevelSurface S = paraboloid(2, 1.0);
    const SurfacePatch U = default_patch(S);
    const double a = tube_volume_umbilic(S, U, {0.1}, light).volumes[0];
    const double b = tube_volume_hn(S, U, {0.1}, light).volumes[0];
    out.push_back(against("umbilic_formula_vs_det_b", a, b, 1e-8 * b));
  }
  return out;
}

}  // namespace heis::cli
