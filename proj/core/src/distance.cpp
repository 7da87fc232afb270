#include "heis/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/tools/roots.hpp>

#include "damped_newton.hpp"
#include "heis/special.hpp"
#include "heis/steiner.hpp"

namespace heis {

namespace {

constexpr double kPi = std::numbers::pi;

// t/|z|^2 as a function of phi = lambda s on [0, 2 pi), small-phi form.
double ratio_phi(double phi) { return phi * special::K(phi) / (2.0 * special::F2(phi)); }

// Same ratio written through delta = 2 pi - phi, accurate near the axis.
double ratio_delta(double d) {
  const double sh = std::sin(0.5 * d);
  return (2.0 * kPi - d + std::sin(d)) / (4.0 * sh * sh);
}

}  // namespace

InverseGeodesic cc_inverse(const Point& p, const Point& q) {
  if (p.n() != q.n()) throw DimensionMismatch("cc_distance: dimension mismatch");
  const Point r = group_mul(group_inv(p), q);
  const double zn = r.z.norm();
  const double at = std::abs(r.t);
  const double sg = r.t < 0.0 ? -1.0 : 1.0;
  InverseGeodesic out;
  if (zn == 0.0) {
    out.dir = HVec::Zero(r.z.size());
    out.dir(0) = 1.0;
    out.length = std::sqrt(2.0 * kPi * at);
    out.curvature = out.length > 0.0 ? sg * 2.0 * kPi / out.length : 0.0;
    out.on_axis = at > 0.0;
    return out;
  }
  const double rho = at / (zn * zn);
  double phi = 0.0, s = zn;
  const boost::math::tools::eps_tolerance<double> tol(52);
  if (rho == 0.0) {
    phi = 0.0;
    s = zn;
  } else if (rho <= 1.0) {
    boost::uintmax_t it = 200;
    auto f = [&](double x) { return ratio_phi(x) - rho; };
    const auto br = boost::math::tools::toms748_solve(f, 0.0, 4.5, -rho, ratio_phi(4.5) - rho, tol, it);
    phi = 0.5 * (br.first + br.second);
    s = zn / special::F(0.5 * phi);
  } else {
    double lo = 0.5 * std::sqrt(2.0 * kPi / rho);
    while (ratio_delta(lo) <= rho) lo *= 0.5;
    boost::uintmax_t it = 200;
    auto f = [&](double d) { return ratio_delta(d) - rho; };
    const auto br = boost::math::tools::toms748_solve(f, lo, kPi, tol, it);
    const double d = 0.5 * (br.first + br.second);
    phi = 2.0 * kPi - d;
    // |t| = s^2 H(phi)
    const double Hphi = (2.0 * kPi - d + std::sin(d)) / (phi * phi);
    s = std::sqrt(at / Hphi);
  }
  phi *= sg;
  const double F = special::F(phi), G = special::G(phi);
  out.length = s;
  out.curvature = phi / s;
  out.dir = (F * r.z + G * J(HVec(r.z))) / (s * (F * F + G * G));
  out.dir.normalize();
  return out;
}

double cc_distance(const Point& p, const Point& q) { return cc_inverse(p, q).length; }

double gauge_distance(const Point& p, const Point& q) {
  const Point r = group_mul(group_inv(p), q);
  const double z2 = r.z.squaredNorm();
  return std::pow(z2 * z2 + 16.0 * r.t * r.t, 0.25);
}

NormalData normal_data(const LevelSurface& S, const Point& q, double eps_sing) {
  double v = 0.0;
  CVec gr;
  S.g().eval_grad(q.coords(), v, gr);
  const int m = 2 * S.n();
  HVec Dh(m);
  for (int i = 0; i < m; i += 2) {
    Dh(i) = gr(i) + q.z(i + 1) * gr(m);
    Dh(i + 1) = gr(i + 1) - q.z(i) * gr(m);
  }
  const double dh = Dh.norm();
  const double gn = std::hypot(dh, gr(m));
  if (gn == 0.0) throw SingularPoint("gradient of g vanishes");
  if (std::abs(v) > 1e-8 * std::max(1.0, gn)) throw OffSurface("point is not on the surface");
  NormalData nd;
  nd.Nh_norm = dh / gn;
  if (nd.Nh_norm <= eps_sing) throw SingularPoint("|N_h| below the singular threshold");
  nd.nu_h = Dh / dh;
  nd.lambda = 2.0 * gr(m) / dh;
  return nd;
}

Point exp_S(const LevelSurface& S, const Point& q, double s) {
  const NormalData nd = normal_data(S, q);
  return geodesic_point(q, nd.nu_h, nd.lambda, s);
}

namespace {

struct Seeded {
  std::size_t index;
  double key;
};

int graph_axis_at(const LevelSurface& S, const Point& q) {
  double v = 0.0;
  CVec gr;
  S.g().eval_grad(q.coords(), v, gr);
  int ax = 0;
  gr.cwiseAbs().maxCoeff(&ax);
  return ax;
}

std::optional<ProjectionCandidate> shoot(const LevelSurface& S, const Point& p, const Point& seed, double s0,
                                         const ProjectionOptions& opt) {
  const int m = 2 * S.n();
  const int ax = graph_axis_at(S, seed);
  const CVec sc = seed.coords();
  double graph_val = sc(ax);
  auto lift = [&](const CVec& x) -> std::optional<Point> {
    CVec c(m + 1);
    for (int i = 0, j = 0; i <= m; ++i) c(i) = (i == ax) ? graph_val : x(j++);
    auto q = solve_on_axis(S, c, ax, 40);
    if (q) graph_val = q->coords()(ax);
    return q;
  };
  const CVec pc = p.coords();
  // the residual keeps what the Jacobian at the same x needs
  struct Cache {
    CVec x;
    Point q;
    FrameGradient fg;
    GeodesicJet jet;
  } cache;
  bool cached = false;
  auto residual = [&](const CVec& x, CVec& r) {
    cached = false;
    auto q = lift(x.head(m));
    if (!q) return false;
    FrameGradient fg = frame_gradient(S, *q);
    const double dh = fg.Dh.norm();
    const double gn = std::hypot(dh, fg.Tg);
    if (!(dh > opt.eps_sing * gn) || fg.grad(ax) == 0.0) return false;
    GeodesicJet jet = geodesic_point_jet(*q, fg.Dh / dh, 2.0 * fg.Tg / dh, x(m));
    r = jet.value - pc;
    if (!r.allFinite()) return false;
    cache = Cache{x, *q, std::move(fg), std::move(jet)};
    cached = true;
    return true;
  };
  CVec x0(m + 1);
  for (int i = 0, j = 0; i <= m; ++i)
    if (i != ax) x0(j++) = sc(i);
  x0(m) = s0;
  // chain rule through the graph lift, (nu_h, lambda) and the geodesic
  auto jacobian = [&](const CVec& x, const CVec&, CMat& Jm) {
    if (!cached || cache.x != x) {
      CVec r;
      if (!residual(x, r)) return false;
    }
    const FrameGradient& fg = cache.fg;
    const double dh = fg.Dh.norm();
    const HVec nu = fg.Dh / dh;
    const double lam = 2.0 * fg.Tg / dh;
    const JetMat& dE = cache.jet.jac;
    for (int i = 0, j = 0; i <= m; ++i) {
      if (i == ax) continue;
      CVec dc = CVec::Zero(m + 1);
      dc(i) = 1.0;
      dc(ax) = -fg.grad(i) / fg.grad(ax);
      const CVec d = fg.jac * dc;
      const HVec dD = d.head(m);
      const HVec dnu = (dD - nu * nu.dot(dD)) / dh;
      const double dlam = (2.0 * d(m) - lam * nu.dot(dD)) / dh;
      Jm.col(j++) = dE.leftCols(m + 1) * dc + dE.middleCols(m + 1, m) * dnu + dE.col(2 * m + 1) * dlam;
    }
    Jm.col(m) = dE.col(2 * m + 2);
    return true;
  };
  detail::DampedNewtonOptions dno;
  dno.abs_tol = 0.01 * opt.residual_tol * (1.0 + pc.norm());
  const auto res = detail::damped_newton(residual, jacobian, x0, dno);
  if (!res.ok || res.norm > opt.residual_tol * (1.0 + pc.norm())) return std::nullopt;
  const double s = res.x(m);
  if (!(s > 0.0)) return std::nullopt;
  auto q = lift(res.x.head(m));
  if (!q) return std::nullopt;
  NormalData nd;
  try {
    nd = normal_data(S, *q, opt.eps_sing);
  } catch (const DomainError&) {
    return std::nullopt;
  }
  // longer arcs stop minimising
  if (std::abs(nd.lambda * s) > 2.0 * kPi * (1.0 + 1e-9)) return std::nullopt;
  return ProjectionCandidate{*q, s, nd.lambda, nd.nu_h};
}

void add_candidate(std::vector<ProjectionCandidate>& cands, const ProjectionCandidate& c) {
  for (auto& o : cands)
    if (coord_gap(o.foot, c.foot) <= 1e-6 * (1.0 + o.foot.coords().norm())) {
      if (c.dist < o.dist) o = c;
      return;
    }
  cands.push_back(c);
}

}  // namespace

ProjectionResult project_to_surface(const LevelSurface& S, const Point& p, const std::vector<Point>& seeds,
                                    const ProjectionOptions& opt) {
  if (seeds.empty()) throw NoConvergence("projection needs at least one seed");
  if (p.n() != S.n()) throw DimensionMismatch("projection: dimension mismatch");
  if (!(S.value(p) > 0.0)) throw std::invalid_argument("projection: point must satisfy g(p) > 0");

  std::vector<Seeded> ranked;
  ranked.reserve(seeds.size());
  auto by_key = [](const Seeded& a, const Seeded& b) { return a.key < b.key; };
  std::size_t sorted_upto = seeds.size();
  if (opt.cross_validate) {
    for (std::size_t i = 0; i < seeds.size(); ++i) ranked.push_back({i, cc_distance(p, seeds[i])});
    std::sort(ranked.begin(), ranked.end(), by_key);
  } else {
    // gauge^4 ranks the same way and skips the group product and the root
    const int m = 2 * p.n();
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      const Point& q = seeds[i];
      double z2 = 0.0, t = q.t - p.t;
      for (int k = 0; k < m; k += 2) {
        const double dx = q.z(k) - p.z(k), dy = q.z(k + 1) - p.z(k + 1);
        z2 += dx * dx + dy * dy;
        t += p.z(k) * q.z(k + 1) - p.z(k + 1) * q.z(k);
      }
      ranked.push_back({i, z2 * z2 + 16.0 * t * t});
    }
    const std::size_t head = std::min<std::size_t>(ranked.size(), 16 * static_cast<std::size_t>(opt.max_seeds) + 16);
    std::partial_sort(ranked.begin(), ranked.begin() + head, ranked.end(), by_key);
    sorted_upto = head;
    for (std::size_t k = 0; k < head; ++k) ranked[k].key = std::sqrt(std::sqrt(ranked[k].key));
  }
  // the tail is only ordered if the first seeds all fail
  auto ensure_sorted = [&](std::size_t k) {
    if (k < sorted_upto) return;
    std::sort(ranked.begin() + sorted_upto, ranked.end(), by_key);
    for (std::size_t i = sorted_upto; i < ranked.size(); ++i) ranked[i].key = std::sqrt(std::sqrt(ranked[i].key));
    sorted_upto = ranked.size();
  };
  const double bound = opt.cross_validate ? ranked.front().key : std::numeric_limits<double>::infinity();

  std::vector<ProjectionCandidate> cands;
  std::vector<bool> used(ranked.size(), false);
  auto run_batch = [&](int budget) {
    // spread the batch: skip seeds crowding one already tried in this batch
    std::vector<const Point*> batch;
    for (std::size_t k = 0; k < ranked.size() && static_cast<int>(batch.size()) < budget; ++k) {
      if (used[k]) continue;
      ensure_sorted(k);
      const Point& sd = seeds[ranked[k].index];
      const double crowd = 0.25 * std::max(ranked[k].key, 1e-12);
      bool near = false;
      for (const Point* b : batch) near = near || coord_gap(*b, sd) < crowd;
      if (near) continue;
      used[k] = true;
      batch.push_back(&sd);
      const double s0 = ranked[k].key;
      if (auto c = shoot(S, p, sd, s0, opt)) {
        add_candidate(cands, *c);
        if (c->dist > opt.stop_beyond) break;
      }
    }
    return !batch.empty();
  };
  run_batch(opt.max_seeds);
  auto best = [&]() {
    double b = std::numeric_limits<double>::infinity();
    for (const auto& c : cands) b = std::min(b, c.dist);
    return b;
  };
  // certified bound: the true distance never exceeds the nearest seed
  while (best() > bound * (1.0 + 1e-9) + 1e-12)
    if (!run_batch(opt.max_seeds)) break;
  if (cands.empty()) throw NoConvergence("no seed converged to a foot point");
  if (best() > bound * (1.0 + 1e-9) + 1e-12)
    throw NoConvergence("converged feet are farther than a sampled surface point");

  std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) { return a.dist < b.dist; });
  ProjectionResult out;
  const auto& c0 = cands.front();
  out.foot = c0.foot;
  out.dist = c0.dist;
  out.arc = GeodesicArc{c0.foot, FrameVector(c0.dir, 0.0), c0.lambda, c0.dist};
  out.feet = cands;
  out.multiplicity_hint = 0;
  for (const auto& c : cands)
    if (c.dist <= c0.dist * (1.0 + opt.tie_rel)) ++out.multiplicity_hint;
  out.ambiguous = out.multiplicity_hint > 1;
  return out;
}

ProjectionResult project_unique(const LevelSurface& S, const Point& p, const std::vector<Point>& seeds,
                                const ProjectionOptions& opt) {
  ProjectionResult r = project_to_surface(S, p, seeds, opt);
  if (r.ambiguous)
    throw AmbiguousProjection(std::to_string(r.multiplicity_hint) + " feet at the same distance");
  return r;
}

namespace {

double collision_scan(const std::vector<Point>& K, const std::vector<NormalData>& nd,
                      double s_max) {
  const std::size_t N = K.size();
  if (N < 2 || !std::isfinite(s_max)) return std::numeric_limits<double>::infinity();
  constexpr int kSteps = 256;
  std::vector<std::vector<CVec>> path(N, std::vector<CVec>(kSteps + 1));
  for (std::size_t a = 0; a < N; ++a)
    for (int k = 0; k <= kSteps; ++k)
      path[a][k] = geodesic_point(K[a], nd[a].nu_h, nd[a].lambda, s_max * k / kSteps).coords();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = a + 1; b < N; ++b) {
      const double gap0 = (path[a][0] - path[b][0]).norm();
      if (gap0 == 0.0) continue;
      auto dist = [&](double s) {
        return coord_gap(geodesic_point(K[a], nd[a].nu_h, nd[a].lambda, s),
                         geodesic_point(K[b], nd[b].nu_h, nd[b].lambda, s));
      };
      std::vector<double> d(kSteps + 1);
      for (int k = 0; k <= kSteps; ++k) d[k] = (path[a][k] - path[b][k]).norm();
      for (int k = 1; k < kSteps; ++k) {
        if (s_max * (k - 1) / kSteps >= best) break;
        if (!(d[k] <= d[k - 1] && d[k] <= d[k + 1] && d[k] < 0.1 * gap0)) continue;
        // golden section on [s_{k-1}, s_{k+1}]
        double lo = s_max * (k - 1) / kSteps, hi = s_max * (k + 1) / kSteps;
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        double f1 = dist(x1), f2 = dist(x2);
        for (int it = 0; it < 100 && hi - lo > 1e-13 * (1.0 + hi); ++it) {
          if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = dist(x1);
          } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = dist(x2);
          }
        }
        const double sm = 0.5 * (lo + hi);
        if (dist(sm) <= 1e-6 * (1.0 + gap0)) {
          best = std::min(best, sm);
          break;
        }
      }
    }
  return best;
}

}  // namespace

ReachEstimate reach_estimate(const LevelSurface& S, const std::vector<Point>& K_grid) {
  if (K_grid.empty()) throw std::invalid_argument("reach_estimate: empty grid");
  const double inf = std::numeric_limits<double>::infinity();
  ReachEstimate est{inf, inf, inf, inf};
  std::vector<NormalData> nd;
  for (const auto& q : K_grid) {
    const SurfaceFrame F = frame_at(S, q);
    nd.push_back(NormalData{F.nu_h.h, F.lambda, F.Nh_norm});
    const double minimal = F.lambda != 0.0 ? 2.0 * kPi / std::abs(F.lambda) : inf;
    est.minimality = std::min(est.minimality, minimal);
    const double cap = std::min({minimal, kReachScanCap, est.conjugate});
    est.conjugate = std::min(est.conjugate, first_conjugate(detb_data(F), cap));
  }
  double scan = std::min(est.minimality, est.conjugate);
  if (!std::isfinite(scan)) {
    // nothing bounds the tube from the pointwise data; look for crossings
    // out to the cap and report unbounded if none turn up
    scan = kReachScanCap;
    est.collision = collision_scan(K_grid, nd, scan);
    est.value = std::isfinite(est.collision) ? est.collision : inf;
    return est;
  }
  est.collision = collision_scan(K_grid, nd, scan);
  est.value = std::min({est.minimality, est.conjugate, est.collision});
  return est;
}

std::vector<Point> parallel_surface_sample(const LevelSurface& S, const SurfacePatch& U, int per_dim, double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("parallel surface radius must be nonnegative");
  const std::vector<Point> grid = U.grid(S, per_dim);
  if (r == 0.0) return grid;
  const ReachEstimate reach = reach_estimate(S, grid);
  if (!(r < reach.value)) throw ReachExceeded("radius is not below the estimated reach");
  const double tol = U.spacing(per_dim);
  std::vector<Point> out;
  out.reserve(grid.size());
  for (const auto& q : grid) {
    const Point p = exp_S(S, q, r);
    ProjectionResult pr;
    try {
      pr = project_to_surface(S, p, grid);
    } catch (const NoConvergence&) {
      throw ReachExceeded("round-trip projection failed");
    }
    if (pr.ambiguous || coord_gap(pr.foot, q) > tol) throw ReachExceeded("round-trip projection moved the foot");
    out.push_back(p);
  }
  return out;
}

}  // namespace heis
