#pragma once

#include "heis/group.hpp"

namespace heis {

struct GeodesicArc {
  Point base;
  FrameVector dir;  // unit, horizontal
  double curvature = 0.0;
  double length = 0.0;

  // Throws std::invalid_argument unless dir is unit and horizontal and length >= 0.
  static GeodesicArc make(const Point& base, const FrameVector& dir, double curvature,
                          double length);
  void validate() const;
  GeodesicArc at(double s) const;
};

// Closed form for an arbitrary horizontal initial velocity w (not normalised).
Point geodesic_point(const Point& p, const HVec& w, double lam, double s);
Point geodesic_point(const GeodesicArc& arc);

// Coordinates of geodesic_point and their derivatives; columns are the base
// coordinates, then w, lam and s.
struct GeodesicJet {
  CVec value;
  JetMat jac;
};
GeodesicJet geodesic_point_jet(const Point& p, const HVec& w, double lam, double s);

HVec geodesic_velocity(const HVec& w, double lam, double s);
FrameVector geodesic_tangent(const GeodesicArc& arc);

// Classical fixed-step RK4 on the coordinate system; used only as a check.
Point geodesic_ode_oracle(const GeodesicArc& arc, int steps);

}  // namespace heis
