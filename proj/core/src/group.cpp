#include "heis/group.hpp"

#include <string>

namespace heis {

void throw_bad_dimension(int n) {
  throw DimensionMismatch("dimension n must be in [1, " + std::to_string(kMaxN) + "], got " +
                            std::to_string(n));
}

Point::Point(const HVec& z_, double t_) : z(z_), t(t_) {
  if (z.size() % 2 != 0) throw DimensionMismatch("z must have an even number of entries");
  check_dimension(static_cast<int>(z.size() / 2));
}

Point Point::origin(int n) {
  check_dimension(n);
  return Point(HVec::Zero(2 * n), 0.0);
}

Point Point::from_coords(const CVec& c) {
  if (c.size() < 3 || c.size() % 2 == 0)
    throw DimensionMismatch("coordinate vector must have 2n+1 entries");
  return Point(c.head(c.size() - 1), c(c.size() - 1));
}

Point Point::from_list(std::initializer_list<double> c) {
  return from_vector(std::vector<double>(c));
}

Point Point::from_vector(const std::vector<double>& c) {
  if (c.size() < 3 || c.size() % 2 == 0 || c.size() > 2 * kMaxN + 1)
    throw DimensionMismatch("point needs 2n+1 coordinates");
  CVec v(static_cast<Eigen::Index>(c.size()));
  for (std::size_t i = 0; i < c.size(); ++i) v(static_cast<Eigen::Index>(i)) = c[i];
  return from_coords(v);
}

CVec Point::coords() const {
  CVec c(z.size() + 1);
  c.head(z.size()) = z;
  c(z.size()) = t;
  return c;
}

FrameVector FrameVector::zero(int n) {
  check_dimension(n);
  return FrameVector(HVec::Zero(2 * n), 0.0);
}

FrameVector FrameVector::X(int n, int i) {
  FrameVector v = zero(n);
  v.h(2 * i) = 1.0;
  return v;
}

FrameVector FrameVector::Y(int n, int i) {
  FrameVector v = zero(n);
  v.h(2 * i + 1) = 1.0;
  return v;
}

FrameVector FrameVector::T(int n) {
  FrameVector v = zero(n);
  v.vert = 1.0;
  return v;
}

CVec FrameVector::flat() const {
  CVec c(h.size() + 1);
  c.head(h.size()) = h;
  c(h.size()) = vert;
  return c;
}

FrameVector FrameVector::from_flat(const CVec& c) {
  return FrameVector(c.head(c.size() - 1), c(c.size() - 1));
}

static double im_pairing(const HVec& a, const HVec& b) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.size(); i += 2) s += a(i + 1) * b(i) - a(i) * b(i + 1);
  return s;
}

Point group_mul(const Point& p, const Point& q) {
  if (p.z.size() != q.z.size()) throw DimensionMismatch("group_mul: dimension mismatch");
  return Point(p.z + q.z, p.t + q.t + im_pairing(p.z, q.z));
}

Point group_inv(const Point& p) { return Point(-p.z, -p.t); }

HVec J(const HVec& h) {
  HVec r(h.size());
  for (Eigen::Index i = 0; i < h.size(); i += 2) {
    r(i) = -h(i + 1);
    r(i + 1) = h(i);
  }
  return r;
}

FrameVector J(const FrameVector& v) { return FrameVector(J(v.h), 0.0); }

double inner(const FrameVector& u, const FrameVector& v) {
  if (u.h.size() != v.h.size()) throw DimensionMismatch("inner: dimension mismatch");
  return u.h.dot(v.h) + u.vert * v.vert;
}

double norm(const FrameVector& v) { return std::sqrt(inner(v, v)); }

CMat left_frame_at(const Point& p) {
  const Eigen::Index m = p.z.size();
  CMat B = CMat::Identity(m + 1, m + 1);
  for (Eigen::Index i = 0; i < m; i += 2) {
    B(m, i) = p.z(i + 1);   // X_i picks up y_i dt
    B(m, i + 1) = -p.z(i);  // Y_i picks up -x_i dt
  }
  return B;
}

CVec to_coords(const Point& p, const FrameVector& v) {
  if (p.z.size() != v.h.size()) throw DimensionMismatch("to_coords: dimension mismatch");
  CVec c(v.h.size() + 1);
  c.head(v.h.size()) = v.h;
  c(v.h.size()) = v.vert + im_pairing(p.z, v.h);
  return c;
}

FrameVector to_frame(const Point& p, const CVec& c) {
  const Eigen::Index m = p.z.size();
  if (c.size() != m + 1) throw DimensionMismatch("to_frame: dimension mismatch");
  HVec h = c.head(m);
  return FrameVector(h, c(m) - im_pairing(p.z, h));
}

double contact_form(const Point& p, const CVec& v) {
  const Eigen::Index m = p.z.size();
  double s = v(m);
  for (Eigen::Index i = 0; i < m; i += 2) s += -p.z(i + 1) * v(i) + p.z(i) * v(i + 1);
  return s;
}

double coord_gap(const Point& p, const Point& q) {
  return std::sqrt((p.z - q.z).squaredNorm() + (p.t - q.t) * (p.t - q.t));
}

}  // namespace heis
