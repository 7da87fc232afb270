#pragma once

#include "heis/geodesic.hpp"

namespace heis {

struct JacobiData {
  FrameVector U0;     // U(0)
  FrameVector U0dot;  // covariant derivative at 0; only the horizontal part is read
  double lambda_prime = 0.0;
};

// Horizontal part of U at s = arc.length, in frame components.
FrameVector jacobi_horizontal(const JacobiData& data, const GeodesicArc& arc);

double c_solution(double c0, double c0dot, double c0ddot, double lam, double lam_prime, double s);
double c_derivative(double c0dot, double c0ddot, double lam, double lam_prime, double s);

struct VerticalData {
  double c0 = 0.0, c0dot = 0.0, c0ddot = 0.0;
};

// c(0), c'(0), c''(0) implied by U(0) and the horizontal part of U'(0).
VerticalData vertical_initial_data(const JacobiData& data, const GeodesicArc& arc);

// Full field: horizontal part plus c(s) T.
FrameVector jacobi_field(const JacobiData& data, const GeodesicArc& arc);

// <U, gamma' + (lam/2) T>
double conserved_pairing(const FrameVector& U, const GeodesicArc& arc);

}  // namespace heis
