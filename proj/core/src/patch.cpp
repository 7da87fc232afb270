#include "heis/patch.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <nlohmann/json.hpp>

namespace heis {

std::vector<int> SurfacePatch::free_axes() const {
  std::vector<int> f;
  for (int i = 0; i <= 2 * n; ++i)
    if (i != graph_axis) f.push_back(i);
  return f;
}

CVec SurfacePatch::free_coords(const HVec& w) const {
  CVec c = w;
  if (polar) {
    c(0) = w(0) * std::cos(w(1));
    c(1) = w(0) * std::sin(w(1));
  }
  return c;
}

std::optional<Point> SurfacePatch::point_at(const LevelSurface& S, const HVec& w) const {
  const auto fa = free_axes();
  const CVec c = free_coords(w);
  CVec x(2 * n + 1);
  for (std::size_t j = 0; j < fa.size(); ++j) x(fa[j]) = c(static_cast<Eigen::Index>(j));
  x(graph_axis) = graph_guess;
  return solve_on_axis(S, x, graph_axis);
}

CMat SurfacePatch::tangents(const LevelSurface& S, const HVec& w, const Point& q) const {
  const int m = 2 * n;
  const auto fa = free_axes();
  CMat Fd = CMat::Identity(m, m);
  if (polar) {
    const double cs = std::cos(w(1)), sn = std::sin(w(1));
    Fd(0, 0) = cs;
    Fd(0, 1) = -w(0) * sn;
    Fd(1, 0) = sn;
    Fd(1, 1) = w(0) * cs;
  }
  double v = 0.0;
  CVec gr;
  S.g().eval_grad(q.coords(), v, gr);
  CMat V = CMat::Zero(m + 1, m);
  for (int k = 0; k < m; ++k) {
    double acc = 0.0;
    for (int j = 0; j < m; ++j) {
      V(fa[j], k) = Fd(j, k);
      acc += gr(fa[j]) * Fd(j, k);
    }
    V(graph_axis, k) = -acc / gr(graph_axis);
  }
  return V;
}

double SurfacePatch::area_density(const LevelSurface& S, const HVec& w, const Point& q) const {
  const int m = 2 * n;
  const CMat V = tangents(S, w, q);
  CMat M(m + 1, m);
  for (int k = 0; k < m; ++k) M.col(k) = to_frame(q, V.col(k)).flat();
  const CMat G = M.transpose() * M;
  return std::sqrt(std::max(0.0, G.determinant()));
}

HVec SurfacePatch::params_of(const Point& q) const {
  const auto fa = free_axes();
  const CVec c = q.coords();
  HVec w(2 * n);
  for (std::size_t j = 0; j < fa.size(); ++j) w(static_cast<Eigen::Index>(j)) = c(fa[j]);
  if (polar) {
    const double x = w(0), y = w(1);
    w(0) = std::hypot(x, y);
    double th = std::atan2(y, x);
    const double two_pi = 2.0 * std::numbers::pi;
    while (th < box[1].lo) th += two_pi;
    while (th >= box[1].lo + two_pi) th -= two_pi;
    w(1) = th;
  }
  return w;
}

bool SurfacePatch::contains(const LevelSurface& S, const Point& q, double tol) const {
  const HVec w = params_of(q);
  for (int k = 0; k < 2 * n; ++k)
    if (w(k) < box[k].lo - tol || w(k) > box[k].hi + tol) return false;
  const auto p = point_at(S, w);
  if (!p) return false;
  return coord_gap(*p, q) <= tol * (1.0 + q.coords().norm());
}

double SurfacePatch::parameter_volume() const {
  double v = 1.0;
  for (const auto& iv : box) v *= iv.width();
  return v;
}

double SurfacePatch::spacing(int per_dim) const {
  double s = 0.0;
  for (int k = 0; k < 2 * n; ++k) {
    double h = box[k].width() / per_dim;
    if (polar && k == 1) h *= box[0].hi;
    s = std::max(s, h);
  }
  return s;
}

std::vector<Point> SurfacePatch::grid(const LevelSurface& S, int per_dim) const {
  const int m = 2 * n;
  std::vector<Point> pts;
  std::vector<int> idx(m, 0);
  while (true) {
    HVec w(m);
    for (int k = 0; k < m; ++k) w(k) = box[k].lo + (idx[k] + 0.5) * box[k].width() / per_dim;
    if (auto q = point_at(S, w)) pts.push_back(*q);
    int k = 0;
    while (k < m && ++idx[k] == per_dim) idx[k++] = 0;
    if (k == m) break;
  }
  return pts;
}

SurfacePatch annulus_patch(int n, double r0, double r1, double extra_half_width) {
  check_dimension(n);
  if (!(0.0 <= r0 && r0 < r1)) throw std::invalid_argument("annulus needs 0 <= r0 < r1");
  SurfacePatch P;
  P.n = n;
  P.graph_axis = 2 * n;
  P.polar = true;
  P.box = {{r0, r1}, {0.0, 2.0 * std::numbers::pi}};
  for (int k = 2; k < 2 * n; ++k) P.box.push_back({-extra_half_width, extra_half_width});
  return P;
}

SurfacePatch box_patch(int n, int graph_axis, std::vector<Interval> box, double graph_guess) {
  check_dimension(n);
  if (static_cast<int>(box.size()) != 2 * n) throw DimensionMismatch("box patch needs 2n intervals");
  if (graph_axis < 0 || graph_axis > 2 * n) throw std::invalid_argument("bad graph axis");
  for (const auto& iv : box)
    if (!(iv.lo < iv.hi)) throw std::invalid_argument("empty patch interval");
  SurfacePatch P;
  P.n = n;
  P.graph_axis = graph_axis;
  P.box = std::move(box);
  P.graph_guess = graph_guess;
  return P;
}

SurfacePatch default_patch(const LevelSurface& S) {
  const int n = S.n();
  const std::string& L = S.label();
  if (L == "plane-t") return annulus_patch(n, 1.0, 2.0);
  if (L == "paraboloid") return annulus_patch(n, 0.5, 1.0);
  if (L == "halfspace-x1") {
    std::vector<Interval> b(2 * n, Interval{0.0, 1.0});
    return box_patch(n, 0, b);
  }
  if (L == "cylinder") {
    // x solved on the positive side; y in a band, t in [0, 1]
    double v = 0.0;
    CVec gr;
    S.g().eval_grad(CVec::Zero(2 * n + 1), v, gr);
    const double R = std::sqrt(std::max(-v, 1e-12));
    std::vector<Interval> b(2 * n - 1, Interval{-0.5 * R / std::sqrt(2.0 * n), 0.5 * R / std::sqrt(2.0 * n)});
    b.push_back({0.0, 1.0});
    return box_patch(n, 0, b, R);
  }
  std::vector<Interval> b(2 * n, Interval{0.5, 1.5});
  if (L == "saddle-t-xy") b[1] = {-0.5, 0.5};
  return box_patch(n, 2 * n, b);
}

SurfacePatch patch_from_json(const nlohmann::json& j) {
  for (const auto& [key, _] : j.items())
    if (key != "n" && key != "graph_axis" && key != "polar" && key != "box" && key != "graph_guess")
      throw std::invalid_argument("unknown patch key: " + key);
  SurfacePatch P;
  P.n = j.at("n").get<int>();
  check_dimension(P.n);
  P.graph_axis = j.at("graph_axis").get<int>();
  P.polar = j.value("polar", false);
  P.graph_guess = j.value("graph_guess", 0.0);
  for (const auto& iv : j.at("box")) P.box.push_back({iv.at(0).get<double>(), iv.at(1).get<double>()});
  if (static_cast<int>(P.box.size()) != 2 * P.n) throw DimensionMismatch("patch box needs 2n intervals");
  return P;
}

nlohmann::json patch_to_json(const SurfacePatch& P) {
  nlohmann::json box = nlohmann::json::array();
  for (const auto& iv : P.box) box.push_back({iv.lo, iv.hi});
  return {{"n", P.n}, {"graph_axis", P.graph_axis}, {"polar", P.polar}, {"box", box},
          {"graph_guess", P.graph_guess}};
}

namespace {

template <int N>
void fill_rule(std::vector<double>& x, std::vector<double>& w) {
  using Q = boost::math::quadrature::gauss<double, N>;
  const auto& a = Q::abscissa();
  const auto& b = Q::weights();
  x.clear();
  w.clear();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) {
      x.push_back(0.0);
      w.push_back(b[i]);
      continue;
    }
    x.push_back(-a[i]);
    w.push_back(b[i]);
    x.push_back(a[i]);
    w.push_back(b[i]);
  }
}

}  // namespace

void gauss_legendre(int order, std::vector<double>& x, std::vector<double>& w) {
  switch (order) {
    case 4: fill_rule<4>(x, w); break;
    case 8: fill_rule<8>(x, w); break;
    case 16: fill_rule<16>(x, w); break;
    case 32: fill_rule<32>(x, w); break;
    default: throw std::invalid_argument("Gauss-Legendre order must be 4, 8, 16 or 32");
  }
}

std::vector<SurfaceNode> surface_nodes(const LevelSurface& S, const SurfacePatch& P,
                                       const QuadratureSpec& spec) {
  std::vector<double> gx, gw;
  gauss_legendre(spec.order, gx, gw);
  const int m = 2 * P.n;
  const int per = spec.order * spec.cells;
  // 1-d node lists per parameter
  std::vector<std::vector<double>> xs(m), ws(m);
  for (int k = 0; k < m; ++k) {
    const double h = P.box[k].width() / spec.cells;
    for (int c = 0; c < spec.cells; ++c) {
      const double mid = P.box[k].lo + (c + 0.5) * h;
      for (std::size_t i = 0; i < gx.size(); ++i) {
        xs[k].push_back(mid + 0.5 * h * gx[i]);
        ws[k].push_back(0.5 * h * gw[i]);
      }
    }
  }
  std::vector<SurfaceNode> nodes;
  std::vector<int> idx(m, 0);
  while (true) {
    HVec w(m);
    double wt = 1.0;
    for (int k = 0; k < m; ++k) {
      w(k) = xs[k][idx[k]];
      wt *= ws[k][idx[k]];
    }
    auto q = P.point_at(S, w);
    if (!q) throw NoConvergence("patch parametrization failed to reach the surface");
    nodes.push_back(SurfaceNode{w, *q, wt * P.area_density(S, w, *q)});
    int k = 0;
    while (k < m && ++idx[k] == per) idx[k++] = 0;
    if (k == m) break;
  }
  return nodes;
}

}  // namespace heis
