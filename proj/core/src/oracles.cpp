#include "heis/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "damped_newton.hpp"
#include "heis/parallel.hpp"
#include "heis/special.hpp"

namespace heis {

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k) {
  constexpr std::uint64_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
  constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = M0 * c[0];
    const std::uint64_t p1 = M1 * c[2];
    c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
         static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
    k[0] += W0;
    k[1] += W1;
  }
  return c;
}

std::array<double, 2> philox_uniform2(std::uint64_t seed, std::uint64_t sample, std::uint32_t block) {
  const auto w = philox4x32({static_cast<std::uint32_t>(sample), static_cast<std::uint32_t>(sample >> 32), block, 0u},
                            {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
  auto to01 = [](std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t x = (static_cast<std::uint64_t>(hi) << 32) | lo;
    return static_cast<double>(x >> 11) * 0x1.0p-53;
  };
  return {to01(w[0], w[1]), to01(w[2], w[3])};
}

double Box::volume() const {
  double v = 1.0;
  for (Eigen::Index i = 0; i < lo.size(); ++i) v *= hi(i) - lo(i);
  return v;
}

Box tube_bounding_box(const LevelSurface& S, const SurfacePatch& U, double r, int per_dim, double margin) {
  const int m = 2 * S.n();
  Box b{CVec::Constant(m + 1, std::numeric_limits<double>::infinity()),
        CVec::Constant(m + 1, -std::numeric_limits<double>::infinity())};
  // include patch edges, not only cell centres
  const std::vector<Point> pts = [&] {
    std::vector<Point> out;
    // the polar angle needs many more samples than the other parameters
    std::vector<int> cnt(m, per_dim);
    if (U.polar) cnt[1] = std::max(per_dim, 96);
    std::vector<int> idx(m, 0);
    while (true) {
      HVec w(m);
      for (int k = 0; k < m; ++k) w(k) = U.box[k].lo + U.box[k].width() * idx[k] / cnt[k];
      if (auto q = U.point_at(S, w)) out.push_back(*q);
      int k = 0;
      while (k < m && ++idx[k] == cnt[k] + 1) idx[k++] = 0;
      if (k == m) break;
    }
    return out;
  }();
  for (const auto& q : pts)
    for (int j = 0; j <= 8; ++j) {
      const Point p = exp_S(S, q, r * j / 8.0);
      const CVec c = p.coords();
      b.lo = b.lo.cwiseMin(c);
      b.hi = b.hi.cwiseMax(c);
    }
  const CVec pad = (b.hi - b.lo) * margin + CVec::Constant(m + 1, 0.5 * r);
  b.lo -= pad;
  b.hi += pad;
  return b;
}

namespace {

SurfacePatch enlarged(const SurfacePatch& U, double frac) {
  SurfacePatch P = U;
  for (int k = 0; k < 2 * U.n; ++k) {
    if (U.polar && k == 1) continue;
    const double w = U.box[k].width() * frac;
    P.box[k].lo -= w;
    P.box[k].hi += w;
    if (U.polar && k == 0) P.box[k].lo = std::max(P.box[k].lo, 0.5 * U.box[k].lo);
  }
  return P;
}

// Parameter cells of roughly equal coordinate size, about budget of them.
struct CellGrid {
  std::vector<HVec> w;
  HVec half;
  double cell = 0.0;
};

CellGrid cell_grid(const SurfacePatch& P, int budget) {
  const int m = 2 * P.n;
  std::vector<double> ext(m);
  double vol = 1.0;
  for (int k = 0; k < m; ++k) {
    ext[k] = P.box[k].width() * ((P.polar && k == 1) ? P.box[0].hi : 1.0);
    vol *= ext[k];
  }
  CellGrid cg;
  cg.cell = std::pow(vol / budget, 1.0 / m);
  std::vector<int> cnt(m);
  cg.half.resize(m);
  for (int k = 0; k < m; ++k) {
    cnt[k] = std::max(1, static_cast<int>(std::ceil(ext[k] / cg.cell)));
    cg.half(k) = 0.5 * P.box[k].width() / cnt[k];
  }
  std::vector<int> idx(m, 0);
  while (true) {
    HVec w(m);
    for (int k = 0; k < m; ++k) w(k) = P.box[k].lo + (2 * idx[k] + 1) * cg.half(k);
    cg.w.push_back(w);
    int k = 0;
    while (k < m && ++idx[k] == cnt[k]) idx[k++] = 0;
    if (k == m) break;
  }
  return cg;
}

std::vector<Point> build_seeds(const LevelSurface& S, const SurfacePatch& U, int budget) {
  const SurfacePatch E = enlarged(U, 0.25);
  std::vector<Point> out;
  for (const HVec& w : cell_grid(E, budget).w)
    if (const auto q = E.point_at(S, w)) out.push_back(*q);
  return out;
}

}  // namespace

MCEstimate mc_tube_volume(const LevelSurface& S, const SurfacePatch& U, const Box& box, double r,
                          std::int64_t samples, std::uint64_t seed, const MCOptions& opt) {
  if (samples < 2) throw std::invalid_argument("mc_tube_volume: need at least two samples");
  const int m = 2 * S.n();
  const std::vector<Point> seeds = build_seeds(S, U, std::max(opt.seed_budget, 1));
  if (seeds.empty()) throw NoConvergence("mc_tube_volume: no seed points on the patch");
  ProjectionOptions po;
  po.cross_validate = false;
  po.max_seeds = opt.max_seeds;
  po.stop_beyond = 2.0 * r;

  // fixed chunking of the counter space, reduced in chunk order
  constexpr std::int64_t kChunk = 1 << 14;
  const std::size_t chunks = static_cast<std::size_t>((samples + kChunk - 1) / kChunk);
  struct Tally {
    std::int64_t hits = 0, ambiguous = 0, failures = 0;
  };
  std::vector<Tally> tally(chunks);
  const CVec span = box.hi - box.lo;
  parallel_for(chunks, opt.threads, [&](std::size_t c) {
    Tally t;
    const std::int64_t lo = static_cast<std::int64_t>(c) * kChunk;
    const std::int64_t hi = std::min(samples, lo + kChunk);
    CVec x(m + 1);
    for (std::int64_t i = lo; i < hi; ++i) {
      for (int j = 0; j <= m; j += 2) {
        const auto u = philox_uniform2(seed, static_cast<std::uint64_t>(i), static_cast<std::uint32_t>(j / 2));
        x(j) = box.lo(j) + span(j) * u[0];
        if (j + 1 <= m) x(j + 1) = box.lo(j + 1) + span(j + 1) * u[1];
      }
      const Point p = Point::from_coords(x);
      if (!(S.value(p) > 0.0)) continue;

      try {
        const ProjectionResult pr = project_to_surface(S, p, seeds, po);
        if (!(pr.dist < r)) continue;
        if (pr.ambiguous) {
          ++t.ambiguous;
          continue;
        }
        if (U.contains(S, pr.foot)) ++t.hits;
      } catch (const DomainError&) {
        ++t.failures;
      }
    }
    tally[c] = t;
  });
  MCEstimate est;
  est.samples = samples;
  est.seed = seed;
  for (const auto& t : tally) {
    est.hits += t.hits;
    est.ambiguous += t.ambiguous;
    est.projection_failures += t.failures;
  }
  const double V = box.volume();
  const double pr = static_cast<double>(est.hits) / static_cast<double>(samples);
  est.value = V * pr;
  // sample standard deviation of V * indicator
  const double var = pr * (1.0 - pr) * static_cast<double>(samples) / static_cast<double>(samples - 1);
  est.std_error = V * std::sqrt(var / static_cast<double>(samples));
  return est;
}

double brute_distance(const Point& p, const Point& q, const BruteGrid& grid) {
  if (p.n() != q.n()) throw DimensionMismatch("brute_distance: dimension mismatch");
  const Point r = group_mul(group_inv(p), q);
  const int m = 2 * r.n();
  const CVec target = r.coords();
  const double scale = 1.0 + target.norm();
  if (target.norm() == 0.0) return 0.0;
  const Point origin = Point::origin(r.n());
  constexpr double kTwoPi = 2.0 * std::numbers::pi;

  // unit directions: the circle for n = 1, Philox-Gaussian points otherwise
  std::vector<HVec> dirs;
  if (m == 2) {
    for (int k = 0; k < grid.directions; ++k) {
      const double a = kTwoPi * k / grid.directions;
      HVec v(2);
      v << std::cos(a), std::sin(a);
      dirs.push_back(v);
    }
  } else {
    const int count = grid.directions * grid.directions;
    for (int k = 0; k < count; ++k) {
      HVec v(m);
      for (int j = 0; j < m; j += 2) {
        const auto u = philox_uniform2(0x5eedu, static_cast<std::uint64_t>(k), static_cast<std::uint32_t>(j));
        const double rad = std::sqrt(-2.0 * std::log1p(-u[0]));
        v(j) = rad * std::cos(kTwoPi * u[1]);
        v(j + 1) = rad * std::sin(kTwoPi * u[1]);
      }
      dirs.push_back(v.normalized());
    }
  }

  // unknowns: velocity w (|w| = length) and phase phi = lambda * length
  auto residual = [&](const CVec& x, CVec& res) {
    const HVec w = x.head(m);
    res = geodesic_point(origin, w, x(m), 1.0).coords() - target;
    return res.allFinite();
  };
  const double zn = r.z.norm();
  double best = std::numeric_limits<double>::infinity();
  detail::DampedNewtonOptions opt;
  opt.abs_tol = 1e-14 * scale;
  opt.max_iter = 100;
  for (int k = 1; k < grid.phis; ++k) {
    const double phi = -kTwoPi + 2.0 * kTwoPi * k / grid.phis;
    const double F = special::F(phi), G = special::G(phi);
    double s0 = zn > 0.0 ? zn / std::hypot(F, G) : 0.0;
    if (s0 == 0.0 || !std::isfinite(s0)) s0 = std::sqrt(std::abs(r.t) / std::max(std::abs(special::H(phi)), 1e-3));
    for (const auto& v : dirs) {
      CVec x0(m + 1);
      x0.head(m) = s0 * v;
      x0(m) = phi;
      const auto res = detail::damped_newton(residual, x0, opt);
      if (!res.ok || res.norm > 1e-11 * scale) continue;
      if (std::abs(res.x(m)) > kTwoPi * (1.0 + 1e-9)) continue;
      best = std::min(best, res.x.head(m).norm());
    }
  }
  return best;
}

}  // namespace heis
