#pragma once

#include <Eigen/Dense>
#include <initializer_list>
#include <vector>

#include "heis/errors.hpp"

namespace heis {

// n is a runtime value, but storage is inline: no heap traffic in hot loops.
inline constexpr int kMaxN = 4;

using HVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 2 * kMaxN, 1>;
using CVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 2 * kMaxN + 1, 1>;
using CMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 2 * kMaxN + 1, 2 * kMaxN + 1>;
// coordinates by (base, velocity, curvature, length)
using JetMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 2 * kMaxN + 1, 4 * kMaxN + 3>;

[[noreturn]] void throw_bad_dimension(int n);
inline void check_dimension(int n) {
  if (n < 1 || n > kMaxN) throw_bad_dimension(n);
}

// z is laid out as (x1, y1, x2, y2, ...).
struct Point {
  HVec z;
  double t = 0.0;

  Point() = default;
  Point(const HVec& z_, double t_);

  static Point origin(int n);
  static Point from_coords(const CVec& c);
  static Point from_list(std::initializer_list<double> c);
  static Point from_vector(const std::vector<double>& c);

  int n() const { return static_cast<int>(z.size() / 2); }
  CVec coords() const;
};

// Components in X1, Y1, ..., Xn, Yn and T.
struct FrameVector {
  HVec h;
  double vert = 0.0;

  FrameVector() = default;
  FrameVector(const HVec& h_, double vert_ = 0.0) : h(h_), vert(vert_) {}

  static FrameVector zero(int n);
  static FrameVector X(int n, int i);
  static FrameVector Y(int n, int i);
  static FrameVector T(int n);

  int n() const { return static_cast<int>(h.size() / 2); }
  bool horizontal() const { return vert == 0.0; }
  CVec flat() const;
  static FrameVector from_flat(const CVec& c);
};

Point group_mul(const Point& p, const Point& q);
Point group_inv(const Point& p);

HVec J(const HVec& h);
FrameVector J(const FrameVector& v);

double inner(const FrameVector& u, const FrameVector& v);
double norm(const FrameVector& v);

// Columns are X1, Y1, ..., Xn, Yn, T at p written in coordinates.
CMat left_frame_at(const Point& p);

CVec to_coords(const Point& p, const FrameVector& v);
FrameVector to_frame(const Point& p, const CVec& v);

// theta = dt + sum(-y_i dx_i + x_i dy_i) applied to a coordinate vector at p.
double contact_form(const Point& p, const CVec& v);

// Euclidean norm of the coordinate difference; used for residuals, not geometry.
double coord_gap(const Point& p, const Point& q);

}  // namespace heis
