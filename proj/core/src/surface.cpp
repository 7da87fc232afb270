#include "heis/surface.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "heis/fd.hpp"

namespace heis {

LevelSurface::LevelSurface(int n, Polynomial g, std::string label)
    : n_(n), g_(std::move(g)), label_(std::move(label)) {
  check_dimension(n);
  if (g_.nvars() != 2 * n + 1) throw DimensionMismatch("surface polynomial must have 2n+1 variables");
}

double LevelSurface::value(const Point& p) const {
  if (p.n() != n_) throw DimensionMismatch("surface/point dimension mismatch");
  return g_.eval(p.coords());
}

namespace {

Polynomial var(int n, int i) { return Polynomial::variable(2 * n + 1, i); }
Polynomial tvar(int n) { return var(n, 2 * n); }

Polynomial zsq(int n) {
  Polynomial r(2 * n + 1);
  for (int i = 0; i < 2 * n; ++i) r = r + var(n, i) * var(n, i);
  return r;
}

}  // namespace

LevelSurface halfspace_x1(int n) {
  check_dimension(n);
  return LevelSurface(n, var(n, 0), "halfspace-x1");
}

LevelSurface plane_t(int n) {
  check_dimension(n);
  return LevelSurface(n, tvar(n), "plane-t");
}

LevelSurface saddle_t_xy(int n) {
  check_dimension(n);
  return LevelSurface(n, tvar(n) - var(n, 0) * var(n, 1), "saddle-t-xy");
}

LevelSurface cylinder(int n, double R) {
  check_dimension(n);
  if (!(R > 0)) throw std::invalid_argument("cylinder radius must be positive");
  return LevelSurface(n, zsq(n) - Polynomial::constant(2 * n + 1, R * R), "cylinder");
}

LevelSurface paraboloid(int n, double a) {
  check_dimension(n);
  return LevelSurface(n, tvar(n) - zsq(n) * a, "paraboloid");
}

LevelSurface builtin_surface(const std::string& spec, int n) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  std::map<std::string, double> params;
  if (colon != std::string::npos) {
    std::stringstream ss(spec.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("bad surface parameter: " + item);
      params[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    }
  }
  auto take = [&](const std::string& key, double def) {
    auto it = params.find(key);
    if (it == params.end()) return def;
    const double v = it->second;
    params.erase(it);
    return v;
  };
  LevelSurface S;
  if (name == "halfspace-x1") S = halfspace_x1(n);
  else if (name == "plane-t") S = plane_t(n);
  else if (name == "saddle-t-xy") S = saddle_t_xy(n);
  else if (name == "cylinder") S = cylinder(n, take("R", 1.0));
  else if (name == "paraboloid") S = paraboloid(n, take("a", 1.0));
  else throw std::invalid_argument("unknown surface: " + name);
  if (!params.empty()) throw std::invalid_argument("unknown surface parameter: " + params.begin()->first);
  return S;
}

LevelSurface surface_from_json(const nlohmann::json& j) {
  for (const auto& [key, _] : j.items())
    if (key != "n" && key != "monomials") throw std::invalid_argument("unknown surface key: " + key);
  const int n = j.at("n").get<int>();
  check_dimension(n);
  Polynomial g(2 * n + 1);
  for (const auto& m : j.at("monomials")) {
    for (const auto& [key, _] : m.items())
      if (key != "exps" && key != "coef") throw std::invalid_argument("unknown monomial key: " + key);
    g.add_term(m.at("exps").get<std::vector<int>>(), m.at("coef").get<double>());
  }
  return LevelSurface(n, g, "json");
}

LevelSurface load_surface(const std::string& name_or_path, int n) {
  std::ifstream in(name_or_path);
  if (!in) return builtin_surface(name_or_path, n);
  nlohmann::json j;
  in >> j;
  LevelSurface S = surface_from_json(j);
  if (S.n() != n) throw DimensionMismatch("surface file dimension differs from --n");
  return LevelSurface(S.n(), S.g(), name_or_path);
}

nlohmann::json surface_to_json(const LevelSurface& S) {
  nlohmann::json mons = nlohmann::json::array();
  for (const auto& t : S.g().terms()) {
    std::vector<int> e(t.e.begin(), t.e.begin() + S.g().nvars());
    mons.push_back({{"exps", e}, {"coef", t.c}});
  }
  return {{"n", S.n()}, {"monomials", mons}};
}

LevelSurface left_translated(const LevelSurface& S, const Point& h) {
  const int n = S.n();
  const int nv = 2 * n + 1;
  // coordinates of h^-1 * x as polynomials in x
  std::vector<Polynomial> repl;
  Polynomial tt = tvar(n) - Polynomial::constant(nv, h.t);
  for (int i = 0; i < 2 * n; i += 2) {
    repl.push_back(var(n, i) - Polynomial::constant(nv, h.z(i)));
    repl.push_back(var(n, i + 1) - Polynomial::constant(nv, h.z(i + 1)));
    // (-y_h) x - (-x_h) y
    tt = tt + var(n, i) * (-h.z(i + 1)) + var(n, i + 1) * h.z(i);
  }
  repl.push_back(tt);
  return LevelSurface(n, S.g().substitute(repl), S.label() + "+translated");
}

FrameGradient frame_gradient(const LevelSurface& S, const Point& q) {
  const int m = 2 * S.n();
  CVec gr;
  CMat He;
  FrameGradient fg;
  S.g().eval_derivs(q.coords(), fg.g, gr, He);
  fg.grad = gr;
  fg.Dh.resize(m);
  fg.Tg = gr(m);
  fg.jac.resize(m + 1, m + 1);
  for (int i = 0; i < m; i += 2) {
    const double x = q.z(i), y = q.z(i + 1);
    fg.Dh(i) = gr(i) + y * gr(m);
    fg.Dh(i + 1) = gr(i + 1) - x * gr(m);
    fg.jac.row(i) = He.row(i) + y * He.row(m);
    fg.jac(i, i + 1) += gr(m);
    fg.jac.row(i + 1) = He.row(i + 1) - x * He.row(m);
    fg.jac(i + 1, i) -= gr(m);
  }
  fg.jac.row(m) = He.row(m);
  return fg;
}

HVec SurfaceFrame::nabla_nuh_along(const FrameVector& u) const {
  const int m = 2 * n();
  const CVec d = fg.jac * to_coords(q, u);
  const HVec dD = d.head(m);
  const double dh = fg.Dh.norm();
  return (dD - nu_h.h * nu_h.h.dot(dD)) / dh;
}

double SurfaceFrame::dlambda_along(const FrameVector& u) const {
  const int m = 2 * n();
  const CVec d = fg.jac * to_coords(q, u);
  const double dh = fg.Dh.norm();
  const double ddh = nu_h.h.dot(d.head(m));
  return 2.0 * (d(m) * dh - fg.Tg * ddh) / (dh * dh);
}

namespace {

// e3..e2n: Gram-Schmidt on X1, Y1, ... against a J-invariant span.
void complete_basis(SurfaceFrame& F) {
  const int n = F.n(), m = 2 * n;
  std::vector<HVec> span{F.nu_h.h, J(F.nu_h.h)};
  for (int c = 0; c < m && static_cast<int>(span.size()) < m; ++c) {
    HVec r = HVec::Zero(m);
    r(c) = 1.0;
    for (const auto& e : span) r -= e.dot(r) * e;
    for (const auto& e : span) r -= e.dot(r) * e;
    if (r.squaredNorm() < 0.5 / n) continue;
    r.normalize();
    span.push_back(r);
    span.push_back(J(r));
    F.basis.emplace_back(r, 0.0);
    F.basis.emplace_back(J(r), 0.0);
  }
  if (static_cast<int>(F.basis.size()) != m) throw std::logic_error("tangent basis completion failed");
}

Eigen::MatrixXd shape_matrix(const SurfaceFrame& F, const std::vector<FrameVector>& b,
                             const std::vector<HVec>& nab) {
  const int k = static_cast<int>(b.size());
  Eigen::MatrixXd A(k, k);
  for (int a = 0; a < k; ++a)
    for (int c = 0; c < k; ++c) A(a, c) = -nab[c].dot(b[a].h) - F.nu * J(b[c].h).dot(b[a].h);
  return A;
}

double sum_sq_eigen(const Eigen::MatrixXd& A) {
  const Eigen::MatrixXd S = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
  return es.eigenvalues().squaredNorm();
}

}  // namespace

SurfaceFrame frame_at(const LevelSurface& S, const Point& q, double eps_sing) {
  if (q.n() != S.n()) throw DimensionMismatch("frame_at: dimension mismatch");
  SurfaceFrame F;
  F.q = q;
  F.fg = frame_gradient(S, q);
  const double dh = F.fg.Dh.norm();
  const double gn = std::hypot(dh, F.fg.Tg);
  if (gn == 0.0) throw SingularPoint("gradient of g vanishes");
  if (std::abs(F.fg.g) > kOnSurfaceTol * std::max(1.0, gn)) throw OffSurface("point is not on the surface");
  F.grad_norm = gn;
  F.Nh_norm = dh / gn;
  if (F.Nh_norm <= eps_sing) throw SingularPoint("|N_h| below the singular threshold");
  F.N = FrameVector(F.fg.Dh / gn, F.fg.Tg / gn);
  F.nu_h = FrameVector(F.fg.Dh / dh, 0.0);
  F.lambda = 2.0 * F.fg.Tg / dh;
  F.nu = F.fg.Tg / dh;

  F.basis.clear();
  F.basis.emplace_back(J(F.nu_h.h), 0.0);
  F.basis.emplace_back(F.N.vert * F.nu_h.h, -F.Nh_norm);
  complete_basis(F);

  const int m = 2 * S.n();
  F.horizontal_tangent = {0};
  for (int i = 2; i < m; ++i) F.horizontal_tangent.push_back(i);

  F.nabla_nuh.resize(m);
  F.dlam.resize(m);
  for (int i = 0; i < m; ++i) {
    F.nabla_nuh[i] = F.nabla_nuh_along(F.basis[i]);
    F.dlam(i) = F.dlambda_along(F.basis[i]);
  }

  std::vector<FrameVector> hb;
  std::vector<HVec> nab;
  for (int i : F.horizontal_tangent) {
    hb.push_back(F.basis[i]);
    nab.push_back(F.nabla_nuh[i]);
  }
  F.A = shape_matrix(F, hb, nab);
  F.H = 0.0;
  for (std::size_t a = 0; a < hb.size(); ++a) F.H += nab[a].dot(hb[a].h);
  F.sigma2 = sum_sq_eigen(F.A);
  return F;
}

ShapeOperator shape_operator(const LevelSurface& S, const Point& q) {
  const SurfaceFrame F = frame_at(S, q);
  return ShapeOperator{F.A, F.H, F.sigma2};
}

ShapeOperator shape_operator_in_basis(const SurfaceFrame& F, const Eigen::MatrixXd& Q) {
  const int k = static_cast<int>(F.horizontal_tangent.size());
  std::vector<FrameVector> hb;
  std::vector<HVec> nab;
  for (int c = 0; c < k; ++c) {
    HVec v = HVec::Zero(2 * F.n());
    for (int a = 0; a < k; ++a) v += Q(a, c) * F.basis[F.horizontal_tangent[a]].h;
    hb.emplace_back(v, 0.0);
    nab.push_back(F.nabla_nuh_along(hb.back()));
  }
  ShapeOperator so;
  so.A = shape_matrix(F, hb, nab);
  for (int a = 0; a < k; ++a) so.H += nab[a].dot(hb[a].h);
  so.sigma2 = sum_sq_eigen(so.A);
  return so;
}

double nabla_E_nuh_check(const LevelSurface& S, const Point& q) {
  const SurfaceFrame F = frame_at(S, q);
  auto nuh_field = [&](const Point& p) -> HVec {
    const FrameGradient fg = frame_gradient(S, p);
    return fg.Dh / fg.Dh.norm();
  };
  const HVec lhs = -fd_directional(S, q, F.basis[1], nuh_field) / F.Nh_norm;
  HVec rhs = 2.0 * F.nu * F.nu * F.basis[0].h;
  for (int i : F.horizontal_tangent) rhs += F.dnu(i) * F.basis[i].h;
  return (lhs - rhs).norm();
}

namespace {

struct RhoMu {
  double rho;
  double mu;
  double spread;
};

RhoMu rho_mu(const SurfaceFrame& F) {
  const Eigen::MatrixXd& A = F.A;
  const int k = static_cast<int>(A.rows());
  RhoMu r{A(0, 0), std::numeric_limits<double>::quiet_NaN(), 0.0};
  if (k == 1) return r;
  const Eigen::MatrixXd B = A.bottomRightCorner(k - 1, k - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (B + B.transpose()), Eigen::EigenvaluesOnly);
  const auto ev = es.eigenvalues();
  r.mu = ev.mean();
  r.spread = (ev.maxCoeff() - ev.minCoeff()) + A.col(0).tail(k - 1).norm() + A.row(0).tail(k - 1).norm();
  return r;
}

}  // namespace

UmbilicReport umbilic_check(const LevelSurface& S, const Point& q, double tol) {
  const SurfaceFrame F = frame_at(S, q);
  UmbilicReport rep;
  const RhoMu rm = rho_mu(F);
  rep.rho = rm.rho;
  if (S.n() == 1) {
    rep.is_umbilic = true;
    return rep;
  }
  rep.mu = rm.mu;
  rep.spread = rm.spread;
  rep.is_umbilic = rm.spread <= tol * std::max(1.0, std::abs(rm.mu) + std::abs(rm.rho));
  if (!rep.is_umbilic) return rep;

  auto rm_field = [&](const Point& p) -> Eigen::Vector2d {
    const RhoMu x = rho_mu(frame_at(S, p));
    return Eigen::Vector2d(x.rho, x.mu);
  };
  const double mu = rm.mu, rho = rm.rho;
  rep.relation_residuals.push_back(F.dnu(0) + F.nu * F.nu - mu * (mu - rho));
  double vnu = 0.0, vmu = 0.0, vrho = 0.0;
  for (std::size_t a = 1; a < F.horizontal_tangent.size(); ++a) {
    const int i = F.horizontal_tangent[a];
    vnu = std::max(vnu, std::abs(F.dnu(i)));
    const Eigen::Vector2d d = fd_directional(S, q, F.basis[i], rm_field);
    vrho = std::max(vrho, std::abs(d(0)));
    vmu = std::max(vmu, std::abs(d(1)));
  }
  rep.relation_residuals.push_back(vnu);
  rep.relation_residuals.push_back(vmu);
  rep.relation_residuals.push_back(vrho);
  const Eigen::Vector2d dz = fd_directional(S, q, F.basis[0], rm_field);
  rep.relation_residuals.push_back(dz(1) - (rho - 2.0 * mu) * F.nu);
  return rep;
}

std::optional<Point> solve_on_axis(const LevelSurface& S, CVec x, int axis, int max_iter) {
  CVec gr;
  double v = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    S.g().eval_grad(x, v, gr);
    if (v == 0.0) return Point::from_coords(x);
    const double d = gr(axis);
    if (d == 0.0 || !std::isfinite(d)) return std::nullopt;
    const double step = v / d;
    x(axis) -= step;
    if (std::abs(step) <= 4e-16 * (1.0 + std::abs(x(axis)))) {
      S.g().eval_grad(x, v, gr);
      if (std::abs(v) <= 1e-12 * std::max(1.0, gr.norm())) return Point::from_coords(x);
      return std::nullopt;
    }
  }
  S.g().eval_grad(x, v, gr);
  if (std::abs(v) <= 1e-12 * std::max(1.0, gr.norm())) return Point::from_coords(x);
  return std::nullopt;
}

}  // namespace heis
