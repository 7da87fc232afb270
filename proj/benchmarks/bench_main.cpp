#include <benchmark/benchmark.h>

#include <random>

#include "heis/distance.hpp"
#include "heis/jacobi.hpp"
#include "heis/oracles.hpp"
#include "heis/special.hpp"
#include "heis/steiner.hpp"

using namespace heis;

namespace {

std::vector<Point> random_points(int n, int count, double scale = 2.0) {
  std::mt19937_64 g(42);
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<Point> out;
  for (int k = 0; k < count; ++k) {
    CVec c(2 * n + 1);
    for (int i = 0; i <= 2 * n; ++i) c(i) = u(g);
    out.push_back(Point::from_coords(c));
  }
  return out;
}

void BM_SpecialAll(benchmark::State& st) {
  double lam = 0.3, acc = 0.0;
  for (auto _ : st) {
    const auto v = special::f_all(lam, 1.7);
    acc += v.k;
    lam = lam > 9.0 ? -9.0 : lam + 0.37;
  }
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_SpecialAll);

void BM_GeodesicPoint(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto pts = random_points(n, 64);
  HVec w = HVec::Zero(2 * n);
  w(0) = 0.6;
  w(1) = 0.8;
  std::size_t i = 0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(geodesic_point(pts[i], w, 1.3, 2.1));
    i = (i + 1) % pts.size();
  }
}
BENCHMARK(BM_GeodesicPoint)->Arg(1)->Arg(2)->Arg(4);

void BM_CCDistance(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const auto pts = random_points(n, 128);
  std::size_t i = 0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(cc_distance(pts[i], pts[i + 1]));
    i = (i + 2) % pts.size();
  }
}
BENCHMARK(BM_CCDistance)->Arg(1)->Arg(2)->Arg(4);

void BM_JacobiField(benchmark::State& st) {
  const int n = 2;
  JacobiData d;
  CVec u(2 * n + 1);
  u << 0.1, -0.4, 0.3, 0.2, 0.7;
  d.U0 = FrameVector::from_flat(u);
  d.U0dot = FrameVector::X(n, 1);
  d.lambda_prime = 0.4;
  HVec v = HVec::Zero(2 * n);
  v(0) = 1.0;
  const GeodesicArc arc = GeodesicArc::make(Point::origin(n), FrameVector(v), 1.1, 2.3);
  for (auto _ : st) benchmark::DoNotOptimize(jacobi_field(d, arc));
}
BENCHMARK(BM_JacobiField);

void BM_ProjectPlaneT(benchmark::State& st) {
  const LevelSurface S = plane_t(1);
  const auto seeds = annulus_patch(1, 0.5, 2.5).grid(S, 24);
  std::mt19937_64 g(7);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (auto _ : st) {
    const Point p = Point::from_list({1.2 * u(g), 0.8 * u(g), 0.3 * u(g)});
    benchmark::DoNotOptimize(project_to_surface(S, p, seeds).dist);
  }
}
BENCHMARK(BM_ProjectPlaneT);

void BM_TubeH1(benchmark::State& st) {
  const LevelSurface S = plane_t(1);
  const SurfacePatch U = annulus_patch(1, 1.0, 2.0);
  TubeOptions o;
  o.threads = 1;
  for (auto _ : st) benchmark::DoNotOptimize(tube_volume_h1(S, U, {0.05, 0.1, 0.2}, o).volumes[2]);
}
BENCHMARK(BM_TubeH1)->Unit(benchmark::kMillisecond);

void BM_TubeHnParaboloid(benchmark::State& st) {
  const LevelSurface S = paraboloid(2, 1.0);
  const SurfacePatch U = default_patch(S);
  TubeOptions o;
  o.threads = 1;
  o.quad = {4, 2};
  for (auto _ : st) benchmark::DoNotOptimize(tube_volume_hn(S, U, {0.1}, o).volumes[0]);
}
BENCHMARK(BM_TubeHnParaboloid)->Unit(benchmark::kMillisecond);

void BM_MonteCarloPlaneT(benchmark::State& st) {
  const LevelSurface S = plane_t(1);
  const SurfacePatch U = annulus_patch(1, 1.0, 2.0);
  const Box box = tube_bounding_box(S, U, 0.2);
  MCOptions o;
  o.threads = 1;
  const auto samples = st.range(0);
  for (auto _ : st) benchmark::DoNotOptimize(mc_tube_volume(S, U, box, 0.2, samples, 1, o).value);
  st.SetItemsProcessed(st.iterations() * samples);
}
BENCHMARK(BM_MonteCarloPlaneT)->Arg(20000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
