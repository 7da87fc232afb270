#include "heis/jacobi.hpp"

#include "heis/special.hpp"

namespace heis {

FrameVector jacobi_horizontal(const JacobiData& data, const GeodesicArc& arc) {
  const double lam = arc.curvature, s = arc.length, lp = data.lambda_prime;
  const auto f = special::f_all(lam, s);
  const HVec& a = data.U0dot.h;
  const HVec gdot = geodesic_velocity(arc.dir.h, lam, s);
  // particular part driven by lam' is lam'(lam k - i f2) times the tangent
  HVec uh = data.U0.h + f.f1 * a - lam * f.f2 * J(a) + lp * (lam * f.k * gdot - f.f2 * J(gdot));
  return FrameVector(uh, 0.0);
}

double c_solution(double c0, double c0dot, double c0ddot, double lam, double lam_prime, double s) {
  const auto f = special::f_all(lam, s);
  return c0 + c0dot * f.f1 + c0ddot * f.f2 - 2.0 * lam_prime * f.k;
}

double c_derivative(double c0dot, double c0ddot, double lam, double lam_prime, double s) {
  const auto f = special::f_all(lam, s);
  return c0dot * f.f0 + c0ddot * f.f1 - 2.0 * lam_prime * f.f2;
}

VerticalData vertical_initial_data(const JacobiData& data, const GeodesicArc& arc) {
  const HVec& v = arc.dir.h;
  const HVec Jv = J(v);
  VerticalData d;
  d.c0 = data.U0.vert;
  d.c0dot = 2.0 * data.U0.h.dot(Jv);
  d.c0ddot = 2.0 * data.U0dot.h.dot(Jv) + 2.0 * arc.curvature * data.U0.h.dot(v);
  return d;
}

FrameVector jacobi_field(const JacobiData& data, const GeodesicArc& arc) {
  FrameVector U = jacobi_horizontal(data, arc);
  const VerticalData d = vertical_initial_data(data, arc);
  U.vert = c_solution(d.c0, d.c0dot, d.c0ddot, arc.curvature, data.lambda_prime, arc.length);
  return U;
}

double conserved_pairing(const FrameVector& U, const GeodesicArc& arc) {
  const HVec gdot = geodesic_velocity(arc.dir.h, arc.curvature, arc.length);
  return U.h.dot(gdot) + 0.5 * arc.curvature * U.vert;
}

}  // namespace heis
