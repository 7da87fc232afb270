#include "heis/geodesic.hpp"

#include <cmath>
#include <stdexcept>

#include "heis/special.hpp"

namespace heis {

GeodesicArc GeodesicArc::make(const Point& base, const FrameVector& dir, double curvature,
                              double length) {
  GeodesicArc a{base, dir, curvature, length};
  a.validate();
  return a;
}

void GeodesicArc::validate() const {
  if (dir.h.size() != base.z.size()) throw DimensionMismatch("arc: dir/base dimension mismatch");
  if (dir.vert != 0.0) throw std::invalid_argument("arc: direction must be horizontal");
  if (std::abs(dir.h.norm() - 1.0) > 1e-12) throw std::invalid_argument("arc: direction must be unit");
  if (!(length >= 0.0)) throw std::invalid_argument("arc: length must be nonnegative");
  if (!std::isfinite(curvature)) throw std::invalid_argument("arc: curvature must be finite");
}

GeodesicArc GeodesicArc::at(double s) const {
  GeodesicArc a = *this;
  a.length = s;
  return a;
}

Point geodesic_point(const Point& p, const HVec& w, double lam, double s) {
  const double x = lam * s;
  // from the origin, then left-translate by p
  const HVec z0 = s * (special::F(x) * w - special::G(x) * J(w));
  const double t0 = w.squaredNorm() * s * s * special::H(x);
  return group_mul(p, Point(z0, t0));
}

GeodesicJet geodesic_point_jet(const Point& p, const HVec& w, double lam, double s) {
  const int m = static_cast<int>(w.size());
  if (p.z.size() != m) throw DimensionMismatch("geodesic: base/velocity dimension mismatch");
  const double x = lam * s;
  const double F = special::F(x), G = special::G(x), H = special::H(x);
  const double F2 = special::F2(x), K = special::K(x);
  const double dF = -x * special::F3(x);
  const double dG = F2 - x * x * special::F4(x);
  const double dH = F2 - 2.0 * K;
  const HVec Jw = J(w);
  const double w2 = w.squaredNorm();
  const HVec z0 = s * (F * w - G * Jw);
  const double t0 = w2 * s * s * H;

  // d(z0, t0) by w, lam, s
  JetMat d0 = JetMat::Zero(m + 1, m + 2);
  for (int k = 0; k < m; ++k) {
    HVec e = HVec::Zero(m);
    e(k) = 1.0;
    d0.col(k).head(m) = s * (F * e - G * J(e));
    d0(m, k) = 2.0 * s * s * H * w(k);
  }
  const HVec dphi = dF * w - dG * Jw;
  d0.col(m).head(m) = s * s * dphi;
  d0(m, m) = w2 * s * s * s * dH;
  d0.col(m + 1).head(m) = F * w - G * Jw + x * dphi;
  d0(m, m + 1) = w2 * (2.0 * s * H + s * x * dH);

  GeodesicJet out;
  out.value.resize(m + 1);
  out.value.head(m) = p.z + z0;
  double tw = 0.0;
  for (int i = 0; i < m; i += 2) tw += p.z(i + 1) * z0(i) - p.z(i) * z0(i + 1);
  out.value(m) = p.t + t0 + tw;

  // left translation by p: z = zp + z0, t = tp + t0 + sum(yp x0 - xp y0)
  out.jac = JetMat::Zero(m + 1, 2 * m + 3);
  for (int i = 0; i < m; i += 2) {
    out.jac(i, i) = 1.0;
    out.jac(i + 1, i + 1) = 1.0;
    out.jac(m, i) = -z0(i + 1);
    out.jac(m, i + 1) = z0(i);
  }
  out.jac(m, m) = 1.0;
  CMat Lz = CMat::Zero(m + 1, m + 1);  // d(z, t) / d(z0, t0)
  for (int i = 0; i < m; i += 2) {
    Lz(i, i) = 1.0;
    Lz(i + 1, i + 1) = 1.0;
    Lz(m, i) = p.z(i + 1);
    Lz(m, i + 1) = -p.z(i);
  }
  Lz(m, m) = 1.0;
  out.jac.rightCols(m + 2) = Lz * d0;
  return out;
}

Point geodesic_point(const GeodesicArc& arc) {
  return geodesic_point(arc.base, arc.dir.h, arc.curvature, arc.length);
}

HVec geodesic_velocity(const HVec& w, double lam, double s) {
  return std::cos(lam * s) * w - std::sin(lam * s) * J(w);
}

FrameVector geodesic_tangent(const GeodesicArc& arc) {
  return FrameVector(geodesic_velocity(arc.dir.h, arc.curvature, arc.length), 0.0);
}

namespace {

struct State {
  HVec z;
  double t;
  HVec w;
};

State rhs(const State& y, double lam) {
  return State{y.w, y.z.dot(J(y.w)), -lam * J(y.w)};
}

State axpy(const State& y, double a, const State& k) {
  return State{y.z + a * k.z, y.t + a * k.t, y.w + a * k.w};
}

}  // namespace

Point geodesic_ode_oracle(const GeodesicArc& arc, int steps) {
  if (steps < 1) throw std::invalid_argument("geodesic_ode_oracle: steps must be >= 1");
  const double dt = arc.length / steps;
  const double lam = arc.curvature;
  State y{arc.base.z, arc.base.t, arc.dir.h};
  for (int i = 0; i < steps; ++i) {
    const State k1 = rhs(y, lam);
    const State k2 = rhs(axpy(y, 0.5 * dt, k1), lam);
    const State k3 = rhs(axpy(y, 0.5 * dt, k2), lam);
    const State k4 = rhs(axpy(y, dt, k3), lam);
    y.z += dt / 6.0 * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z);
    y.t += dt / 6.0 * (k1.t + 2.0 * k2.t + 2.0 * k3.t + k4.t);
    y.w += dt / 6.0 * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w);
  }
  return Point(y.z, y.t);
}

}  // namespace heis
