#include <cmath>

#include "damped_newton.hpp"
#include "heis/patch.hpp"

namespace heis {

namespace {

double nh_norm(const LevelSurface& S, const Point& q) {
  const FrameGradient fg = frame_gradient(S, q);
  const double dh = fg.Dh.norm();
  const double gn = std::hypot(dh, fg.Tg);
  return gn > 0.0 ? dh / gn : 0.0;
}

}  // namespace

std::vector<Point> singular_set_scan(const LevelSurface& S, const SurfacePatch& region, int grid,
                                     double eps_sing) {
  const int m = 2 * region.n;
  if (grid < 2) throw std::invalid_argument("singular_set_scan: grid must be >= 2");
  std::size_t total = 1;
  for (int k = 0; k < m; ++k) total *= static_cast<std::size_t>(grid);

  auto param = [&](const std::vector<int>& idx) {
    HVec w(m);
    for (int k = 0; k < m; ++k) w(k) = region.box[k].lo + (idx[k] + 0.5) * region.box[k].width() / grid;
    return w;
  };
  auto flat = [&](const std::vector<int>& idx) {
    std::size_t f = 0;
    for (int k = m - 1; k >= 0; --k) f = f * grid + idx[k];
    return f;
  };

  std::vector<double> val(total, INFINITY);
  std::vector<int> idx(m, 0);
  for (std::size_t f = 0; f < total; ++f) {
    if (auto q = region.point_at(S, param(idx))) val[flat(idx)] = nh_norm(S, *q);
    int k = 0;
    while (k < m && ++idx[k] == grid) idx[k++] = 0;
  }

  const double merge = 0.25 * region.spacing(grid);
  std::vector<Point> found;
  std::fill(idx.begin(), idx.end(), 0);
  for (std::size_t f = 0; f < total; ++f) {
    const double v = val[flat(idx)];
    bool local_min = std::isfinite(v);
    for (int k = 0; k < m && local_min; ++k)
      for (int d : {-1, 1}) {
        const int j = idx[k] + d;
        if (j < 0 || j >= grid) continue;
        auto nb = idx;
        nb[k] = j;
        if (val[flat(nb)] < v) local_min = false;
      }
    if (local_min) {
      auto residual = [&](const CVec& w, CVec& r) {
        auto q = region.point_at(S, w);
        if (!q) return false;
        const FrameGradient fg = frame_gradient(S, *q);
        r = fg.Dh / std::hypot(fg.Dh.norm(), fg.Tg);
        return r.allFinite();
      };
      detail::DampedNewtonOptions opt;
      opt.abs_tol = 1e-3 * eps_sing;
      const auto res = detail::damped_newton(residual, param(idx), opt);
      bool inside = res.ok && res.norm < eps_sing;
      for (int k = 0; k < m && inside; ++k) {
        const double tol = 1e-9 * (1.0 + region.box[k].width());
        inside = res.x(k) >= region.box[k].lo - tol && res.x(k) <= region.box[k].hi + tol;
      }
      if (inside) {
        const Point q = *region.point_at(S, res.x);
        bool dup = false;
        for (const auto& p : found) dup = dup || coord_gap(p, q) < merge;
        if (!dup) found.push_back(q);
      }
    }
    int k = 0;
    while (k < m && ++idx[k] == grid) idx[k++] = 0;
  }
  return found;
}

}  // namespace heis
