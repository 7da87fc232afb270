#include "heis/steiner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <numeric>

#include <boost/math/tools/roots.hpp>

#include "heis/jacobi.hpp"
#include "heis/parallel.hpp"
#include "heis/special.hpp"

namespace heis {

SteinerCoeffs steiner_coeffs_h1(const SurfaceFrame& F) {
  if (F.n() != 1) throw WrongDimension("H^1 Steiner coefficients need n = 1");
  const double nh = F.Nh_norm, H = F.H;
  const double e1nu = F.dnu(0), e2nu = F.dnu(1);
  SteinerCoeffs c;
  c.a = {nh, nh * H, -4.0 * nh * e1nu, -4.0 * e2nu, -4.0 * H * e2nu - 4.0 * nh * e1nu * e1nu};
  return c;
}

SteinerCoeffs steiner_coeffs_h1(const LevelSurface& S, const Point& q) {
  if (S.n() != 1) throw WrongDimension("H^1 Steiner coefficients need n = 1");
  return steiner_coeffs_h1(frame_at(S, q));
}

double h1_integrand(const SteinerCoeffs& c, double lam, double s) {
  const auto f = special::f_all(lam, s);
  return c.a[0] * f.f0 + c.a[1] * f.f1 + c.a[2] * f.f2 + c.a[3] * f.f3 + c.a[4] * f.f4;
}

DetBData detb_data(const SurfaceFrame& F) {
  const int n = F.n(), m = 2 * n;
  DetBData d;
  d.n = n;
  d.lambda = F.lambda;
  d.Nh_norm = F.Nh_norm;
  d.c0.resize(m);
  d.c0dot.resize(m);
  d.c0ddot.resize(m);
  d.lamp = F.dlam;
  d.X0.resize(m, m - 2);
  d.X1.resize(m, m - 2);
  d.X2.resize(m, m - 2);
  const HVec& e1 = F.basis[0].h;
  for (int i = 0; i < m; ++i) {
    const FrameVector& ei = F.basis[i];
    const HVec& nab = F.nabla_nuh[i];
    d.c0(i) = ei.vert;
    d.c0dot(i) = 2.0 * ei.h.dot(e1);
    d.c0ddot(i) = 2.0 * F.lambda * ei.h.dot(F.nu_h.h) + 2.0 * nab.dot(e1);
    const HVec Jnab = J(nab);
    for (int b = 2; b < m; ++b) {
      const HVec& eb = F.basis[b].h;
      d.X0(i, b - 2) = ei.h.dot(eb);
      d.X1(i, b - 2) = nab.dot(eb);
      d.X2(i, b - 2) = Jnab.dot(eb);
    }
  }
  return d;
}

Eigen::MatrixXd B_matrix(const DetBData& d, double s) {
  const int m = 2 * d.n;
  const double lam = d.lambda;
  const auto f = special::f_all(lam, s);
  Eigen::MatrixXd B(m, m);
  for (int i = 0; i < m; ++i) {
    B(i, 0) = 0.5 * (d.c0dot(i) * f.f0 + d.c0ddot(i) * f.f1 - 2.0 * d.lamp(i) * f.f2);
    B(i, 1) = d.c0(i) + d.c0dot(i) * f.f1 + d.c0ddot(i) * f.f2 - 2.0 * d.lamp(i) * f.k;
  }
  if (m > 2) B.rightCols(m - 2) = d.X0 + f.f1 * d.X1 - lam * f.f2 * d.X2;
  return B;
}

double det_B(const DetBData& d, double s) {
  if (d.n == 1) {
    const Eigen::MatrixXd B = B_matrix(d, s);
    return B(0, 0) * B(1, 1) - B(0, 1) * B(1, 0);
  }
  return B_matrix(d, s).partialPivLu().determinant();
}

double det_B(const LevelSurface& S, const Point& q, double s) { return det_B(detb_data(frame_at(S, q)), s); }

double first_conjugate(const DetBData& d, double s_max) {
  if (!(s_max > 0.0)) return std::numeric_limits<double>::infinity();
  constexpr int kSamples = 512;
  double prev = 0.0;
  for (int k = 1; k <= kSamples; ++k) {
    const double s = s_max * k / kSamples;
    if (det_B(d, s) >= 0.0) {
      auto f = [&](double x) { return det_B(d, x); };
      boost::uintmax_t iters = 200;
      const auto r = boost::math::tools::toms748_solve(f, prev, s, boost::math::tools::eps_tolerance<double>(50),
                                                       iters);
      return 0.5 * (r.first + r.second);
    }
    prev = s;
  }
  return std::numeric_limits<double>::infinity();
}

std::string to_string(TubeMethod m) {
  switch (m) {
    case TubeMethod::H1Closed: return "h1-closed";
    case TubeMethod::HnDet: return "hn-det";
    case TubeMethod::Umbilic: return "umbilic";
    case TubeMethod::MonteCarlo: return "montecarlo";
  }
  return "unknown";
}

double umbilic_det_D(double lambda, double mu, double s) {
  const auto f = special::f_all(lambda, s);
  const double d11 = 1.0 - mu * f.f1 - 0.5 * lambda * lambda * f.f2;
  const double d21 = 0.5 * lambda * f.f1 - lambda * mu * f.f2;
  return d11 * d11 + d21 * d21;
}

namespace {

using Integrand = std::function<double(double)>;

// Integral of a positive integrand over [a, b]; subintervals no longer than
// pi/(2|lambda|). A non-positive sample means the tube has folded.
double integrate_s(const Integrand& f, double lam, double a, double b, const std::vector<double>& gx,
                   const std::vector<double>& gw) {
  if (b <= a) return 0.0;
  const double L = b - a;
  int pieces = 1;
  if (lam != 0.0) pieces = std::max(1, static_cast<int>(std::ceil(L * std::abs(lam) / (0.5 * std::numbers::pi))));
  const double h = L / pieces;
  double acc = 0.0;
  for (int p = 0; p < pieces; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (std::size_t i = 0; i < gx.size(); ++i) {
      const double v = f(mid + 0.5 * h * gx[i]);
      if (!(v > 0.0)) throw ReachExceeded("normal Jacobian vanishes inside the tube: radius beyond reach");
      acc += 0.5 * h * gw[i] * v;
    }
  }
  if (!(f(b) > 0.0)) throw ReachExceeded("normal Jacobian vanishes at the tube radius: radius beyond reach");
  return acc;
}

struct NodeIntegrand {
  double lambda;
  Integrand f;
};

TubeResult tube_generic(const LevelSurface& S, const SurfacePatch& U, const std::vector<double>& radii,
                        const TubeOptions& opt, TubeMethod method,
                        const std::function<NodeIntegrand(const SurfaceFrame&)>& make) {
  for (double r : radii)
    if (!(r >= 0.0)) throw std::invalid_argument("tube radii must be nonnegative");
  const auto nodes = surface_nodes(S, U, opt.quad);
  std::vector<double> gx, gw;
  gauss_legendre(opt.s_order, gx, gw);

  std::vector<std::size_t> order(radii.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return radii[a] < radii[b]; });

  const std::size_t R = radii.size();
  std::vector<double> contrib(nodes.size() * R, 0.0);
  parallel_for(nodes.size(), opt.threads, [&](std::size_t k) {
    const SurfaceFrame F = frame_at(S, nodes[k].q);
    const NodeIntegrand ni = make(F);
    double acc = 0.0, prev = 0.0;
    for (std::size_t j : order) {
      acc += integrate_s(ni.f, ni.lambda, prev, radii[j], gx, gw);
      prev = std::max(prev, radii[j]);
      contrib[k * R + j] = nodes[k].weight * acc;
    }
  });

  TubeResult out;
  out.method = method;
  out.radii = radii;
  out.volumes.assign(R, 0.0);
  for (std::size_t k = 0; k < nodes.size(); ++k)
    for (std::size_t j = 0; j < R; ++j) out.volumes[j] += contrib[k * R + j];
  return out;
}

struct UmbilicData {
  double rho, mu, spread;
};

UmbilicData umbilic_data(const SurfaceFrame& F) {
  const int k = static_cast<int>(F.A.rows());
  const Eigen::MatrixXd B = F.A.bottomRightCorner(k - 1, k - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (B + B.transpose()), Eigen::EigenvaluesOnly);
  const auto ev = es.eigenvalues();
  const double spread =
      (ev.maxCoeff() - ev.minCoeff()) + F.A.col(0).tail(k - 1).norm() + F.A.row(0).tail(k - 1).norm();
  return {F.A(0, 0), ev.mean(), spread};
}

}  // namespace

TubeResult tube_volume_h1(const LevelSurface& S, const SurfacePatch& U, const std::vector<double>& radii,
                          const TubeOptions& opt) {
  if (S.n() != 1) throw WrongDimension("tube_volume_h1 needs n = 1");
  TubeResult out = tube_generic(S, U, radii, opt, TubeMethod::H1Closed, [](const SurfaceFrame& F) {
    const SteinerCoeffs c = steiner_coeffs_h1(F);
    const double lam = F.lambda;
    return NodeIntegrand{lam, [c, lam](double s) { return h1_integrand(c, lam, s); }};
  });
  out.series3 = series3_h1(S, U, opt);
  return out;
}

TubeResult tube_volume_hn(const LevelSurface& S, const SurfacePatch& U, const std::vector<double>& radii,
                          const TubeOptions& opt) {
  TubeResult out = tube_generic(S, U, radii, opt, TubeMethod::HnDet, [](const SurfaceFrame& F) {
    auto d = std::make_shared<DetBData>(detb_data(F));
    return NodeIntegrand{F.lambda, [d](double s) { return -det_B(*d, s); }};
  });
  out.series3 = series3_hn(S, U, opt);
  return out;
}

TubeResult tube_volume_umbilic(const LevelSurface& S, const SurfacePatch& U, const std::vector<double>& radii,
                               const TubeOptions& opt) {
  const int n = S.n();
  if (n < 2) throw WrongDimension("umbilic tube formula needs n >= 2");
  const double tol = opt.umbilic_tol;
  TubeResult out = tube_generic(S, U, radii, opt, TubeMethod::Umbilic, [n, tol](const SurfaceFrame& F) {
    const UmbilicData u = umbilic_data(F);
    if (u.spread > tol * std::max(1.0, std::abs(u.mu) + std::abs(u.rho)))
      throw NotUmbilic("surface is not umbilic at a quadrature node");
    const DetBData d = detb_data(F);
    // only the (c1, c2) rows enter; everything else is fixed by mu and lambda
    const double lam = F.lambda, mu = u.mu;
    const double c10 = d.c0(0), c1d = d.c0dot(0), c1dd = d.c0ddot(0), l1 = d.lamp(0);
    const double c20 = d.c0(1), c2d = d.c0dot(1), c2dd = d.c0ddot(1), l2 = d.lamp(1);
    return NodeIntegrand{lam, [=](double s) {
                           const double c1 = c_solution(c10, c1d, c1dd, lam, l1, s);
                           const double c2 = c_solution(c20, c2d, c2dd, lam, l2, s);
                           const double c1dot = c_derivative(c1d, c1dd, lam, l1, s);
                           const double c2dot = c_derivative(c2d, c2dd, lam, l2, s);
                           return 0.5 * (c1 * c2dot - c2 * c1dot) * std::pow(umbilic_det_D(lam, mu, s), n - 1);
                         }};
  });
  out.series3 = series3_hn(S, U, opt);
  return out;
}

Series3 series3_h1(const LevelSurface& S, const SurfacePatch& U, const TubeOptions& opt) {
  if (S.n() != 1) throw WrongDimension("series3_h1 needs n = 1");
  const auto nodes = surface_nodes(S, U, opt.quad);
  std::vector<std::array<double, 3>> part(nodes.size());
  parallel_for(nodes.size(), opt.threads, [&](std::size_t k) {
    const SurfaceFrame F = frame_at(S, nodes[k].q);
    const double dP = nodes[k].weight * F.Nh_norm;
    part[k] = {dP, 0.5 * F.H * dP, -(2.0 / 3.0) * (F.dnu(0) + F.nu * F.nu) * dP};
  });
  Series3 s;
  for (const auto& p : part) {
    s.c1 += p[0];
    s.c2 += p[1];
    s.c3 += p[2];
  }
  return s;
}

Series3 series3_hn(const LevelSurface& S, const SurfacePatch& U, const TubeOptions& opt) {
  const int n = S.n();
  const auto nodes = surface_nodes(S, U, opt.quad);
  std::vector<std::array<double, 3>> part(nodes.size());
  parallel_for(nodes.size(), opt.threads, [&](std::size_t k) {
    const SurfaceFrame F = frame_at(S, nodes[k].q);
    const double dP = nodes[k].weight * F.Nh_norm;
    const double nu = F.nu;
    const double third = 4.0 * F.dnu(0) + (2.0 * n + 2.0) * nu * nu + F.sigma2 - F.H * F.H;
    part[k] = {dP, 0.5 * F.H * dP, -third * dP / 6.0};
  });
  Series3 s;
  for (const auto& p : part) {
    s.c1 += p[0];
    s.c2 += p[1];
    s.c3 += p[2];
  }
  return s;
}

Series3 series3(const LevelSurface& S, const SurfacePatch& U, const TubeOptions& opt) {
  return S.n() == 1 ? series3_h1(S, U, opt) : series3_hn(S, U, opt);
}

PolynomialWitness polynomial_witness(const LevelSurface& S, const SurfacePatch& U, int degree_cap,
                                     const TubeOptions& opt, double r_max) {
  if (S.n() != 1) throw WrongDimension("polynomial_witness needs n = 1");
  if (degree_cap < 1) throw std::invalid_argument("degree_cap must be >= 1");
  const int m = std::max(12, degree_cap + 4);
  PolynomialWitness w;
  for (int k = 1; k <= m; ++k) w.radii.push_back(r_max * k / m);
  w.volumes = tube_volume_h1(S, U, w.radii, opt).volumes;

  Eigen::VectorXd y(m);
  for (int k = 0; k < m; ++k) y(k) = w.volumes[k];
  const double scale = y.cwiseAbs().maxCoeff();
  w.residual = std::numeric_limits<double>::infinity();
  for (int d = 1; d <= degree_cap; ++d) {
    // no constant term: the tube of radius 0 is empty
    Eigen::MatrixXd V(m, d);
    for (int k = 0; k < m; ++k)
      for (int j = 0; j < d; ++j) V(k, j) = std::pow(w.radii[k] / r_max, j + 1);
    const Eigen::VectorXd beta = V.colPivHouseholderQr().solve(y);
    const double res = (V * beta - y).cwiseAbs().maxCoeff() / scale;
    w.residual = res;
    if (res <= 1e-9) {
      w.is_polynomial = true;
      w.fitted_degree = d;
      return w;
    }
  }
  return w;
}

}  // namespace heis
