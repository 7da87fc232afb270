#pragma once

#include "heis/surface.hpp"

namespace heis {

inline constexpr double kFdStep = 1e-5;

// Point at parameter tau on a curve in S through q with velocity u: a straight
// coordinate step followed by one Newton correction along grad g.
Point surface_curve_point(const LevelSurface& S, const Point& q, const FrameVector& u, double tau);

// Richardson-extrapolated central difference of field along that curve.
// field may return double or an Eigen vector.
template <class Field>
auto fd_directional(const LevelSurface& S, const Point& q, const FrameVector& u, Field&& field,
                    double h = kFdStep) {
  auto central = [&](double step) {
    auto fp = field(surface_curve_point(S, q, u, step));
    auto fm = field(surface_curve_point(S, q, u, -step));
    return decltype(fp)((fp - fm) / (2.0 * step));
  };
  auto d1 = central(h);
  auto d2 = central(0.5 * h);
  return decltype(d1)((4.0 * d2 - d1) / 3.0);
}

// Same along a straight line in ambient coordinates (no projection to S).
template <class Field>
auto fd_ambient(const Point& p, const CVec& dir, Field&& field, double h = kFdStep) {
  auto at = [&](double tau) { return field(Point::from_coords(p.coords() + tau * dir)); };
  auto central = [&](double step) {
    auto fp = at(step);
    auto fm = at(-step);
    return decltype(fp)((fp - fm) / (2.0 * step));
  };
  auto d1 = central(h);
  auto d2 = central(0.5 * h);
  return decltype(d1)((4.0 * d2 - d1) / 3.0);
}

}  // namespace heis
