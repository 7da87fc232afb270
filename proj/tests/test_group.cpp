#include <gtest/gtest.h>

#include "heis/group.hpp"
#include "support.hpp"

using namespace heis;

TEST(Group, FrameAtOriginIsCoordinateBasis) {
  for (int n = 1; n <= kMaxN; ++n) {
    const CMat B = left_frame_at(Point::origin(n));
    EXPECT_EQ((B - CMat::Identity(2 * n + 1, 2 * n + 1)).norm(), 0.0);
  }
}

TEST(Group, X1PicksUpDtWhenY1IsOne) {
  const Point p = Point::from_list({0.0, 1.0, 0.0});
  const CVec x1 = to_coords(p, FrameVector::X(1, 0));
  EXPECT_EQ(x1(0), 1.0);
  EXPECT_EQ(x1(1), 0.0);
  EXPECT_EQ(x1(2), 1.0);
  const CVec y1 = to_coords(Point::from_list({2.0, 0.0, 0.0}), FrameVector::Y(1, 0));
  EXPECT_EQ(y1(2), -2.0);
}

TEST(Group, FrameCoordinateRoundTrip) {
  test::Rng rng(1);
  for (int k = 0; k < 200; ++k) {
    const int n = rng.integer(1, kMaxN);
    const Point p = rng.point(n, 3.0);
    const FrameVector v = rng.frame_vector(n, 2.0);
    const FrameVector back = to_frame(p, to_coords(p, v));
    EXPECT_LE((back.flat() - v.flat()).cwiseAbs().maxCoeff(), 1e-15);
    // the matrix form agrees with the pointwise conversion
    EXPECT_LE((left_frame_at(p) * v.flat() - to_coords(p, v)).norm(), 1e-14);
  }
}

TEST(Group, Associativity) {
  test::Rng rng(2);
  for (int k = 0; k < 1000; ++k) {
    const int n = rng.integer(1, kMaxN);
    const Point a = rng.point(n, 2.0), b = rng.point(n, 2.0), c = rng.point(n, 2.0);
    EXPECT_LE(coord_gap(group_mul(group_mul(a, b), c), group_mul(a, group_mul(b, c))), 1e-13);
  }
}

TEST(Group, InverseAndIdentity) {
  test::Rng rng(3);
  for (int k = 0; k < 100; ++k) {
    const int n = rng.integer(1, kMaxN);
    const Point a = rng.point(n, 3.0);
    EXPECT_LE(coord_gap(group_mul(a, group_inv(a)), Point::origin(n)), 1e-15);
    EXPECT_LE(coord_gap(group_mul(group_inv(a), a), Point::origin(n)), 1e-15);
    EXPECT_EQ(coord_gap(group_mul(Point::origin(n), a), a), 0.0);
  }
}

TEST(Group, JIsSkewIsometry) {
  test::Rng rng(4);
  for (int k = 0; k < 200; ++k) {
    const int n = rng.integer(1, kMaxN);
    const FrameVector u(rng.hvec(n)), v(rng.hvec(n));
    EXPECT_NEAR(inner(J(u), v), -inner(u, J(v)), 1e-15);
    EXPECT_NEAR(norm(J(u)), norm(u), 1e-15);
    EXPECT_LE((J(J(u.h)) + u.h).norm(), 0.0 + 1e-300);
  }
}

TEST(Group, ContactFormKillsHorizontalFrame) {
  test::Rng rng(5);
  for (int k = 0; k < 100; ++k) {
    const int n = rng.integer(1, kMaxN);
    const Point p = rng.point(n, 2.0);
    for (int i = 0; i < n; ++i) {
      EXPECT_NEAR(contact_form(p, to_coords(p, FrameVector::X(n, i))), 0.0, 1e-15);
      EXPECT_NEAR(contact_form(p, to_coords(p, FrameVector::Y(n, i))), 0.0, 1e-15);
    }
    EXPECT_NEAR(contact_form(p, to_coords(p, FrameVector::T(n))), 1.0, 1e-15);
  }
}

// [X_i, Y_i] = -2T from coordinate derivatives of the frame fields.
TEST(Group, BracketOrientation) {
  test::Rng rng(6);
  const double h = 1e-5;
  for (int k = 0; k < 20; ++k) {
    const int n = rng.integer(1, 3);
    const Point p = rng.point(n, 1.5);
    const int m = 2 * n;
    for (int i = 0; i < n; ++i) {
      auto field = [&](const CVec& c, int col) { return CVec(left_frame_at(Point::from_coords(c)).col(col)); };
      auto deriv = [&](int along, int col) {
        const CVec dir = left_frame_at(p).col(along);
        return CVec((field(p.coords() + h * dir, col) - field(p.coords() - h * dir, col)) / (2 * h));
      };
      const CVec br = deriv(2 * i, 2 * i + 1) - deriv(2 * i + 1, 2 * i);
      CVec expect = CVec::Zero(m + 1);
      expect(m) = -2.0;
      EXPECT_LE((br - expect).norm(), 1e-9);
      if (n > 1) {
        const int j = (i + 1) % n;
        const CVec mixed = deriv(2 * i, 2 * j + 1) - deriv(2 * j + 1, 2 * i);
        EXPECT_LE(mixed.norm(), 1e-9);
      }
    }
  }
}

// Left translation pushes X_i at the origin to X_i at h.
TEST(Group, FrameIsLeftInvariant) {
  test::Rng rng(7);
  const double eps = 1e-6;
  for (int k = 0; k < 50; ++k) {
    const int n = rng.integer(1, kMaxN);
    const Point g = rng.point(n, 2.0);
    const Point o = Point::origin(n);
    for (int col = 0; col <= 2 * n; ++col) {
      const CVec e = left_frame_at(o).col(col);
      const CVec fp = group_mul(g, Point::from_coords(o.coords() + eps * e)).coords();
      const CVec fm = group_mul(g, Point::from_coords(o.coords() - eps * e)).coords();
      const CVec push = (fp - fm) / (2 * eps);
      EXPECT_LE((push - CVec(left_frame_at(g).col(col))).norm(), 1e-9);
    }
  }
}

TEST(Group, DimensionChecks) {
  EXPECT_THROW(Point::origin(0), DimensionMismatch);
  EXPECT_THROW(Point::origin(kMaxN + 1), DimensionMismatch);
  EXPECT_THROW(Point::from_list({1.0, 2.0}), DimensionMismatch);
  EXPECT_THROW(group_mul(Point::origin(1), Point::origin(2)), DimensionMismatch);
  EXPECT_THROW(inner(FrameVector::X(1, 0), FrameVector::X(2, 0)), DimensionMismatch);
}
