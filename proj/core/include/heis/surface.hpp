#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "heis/group.hpp"
#include "heis/polynomial.hpp"

namespace heis {

inline constexpr double kEpsSing = 1e-6;
inline constexpr double kOnSurfaceTol = 1e-10;

// S = {g = 0}, E = {g <= 0}; variables ordered (x1, y1, ..., xn, yn, t).
class LevelSurface {
 public:
  LevelSurface() = default;
  LevelSurface(int n, Polynomial g, std::string label = "custom");

  int n() const { return n_; }
  const Polynomial& g() const { return g_; }
  const std::string& label() const { return label_; }

  double value(const Point& p) const;

 private:
  int n_ = 0;
  Polynomial g_;
  std::string label_;
};

LevelSurface halfspace_x1(int n);
LevelSurface plane_t(int n);
LevelSurface saddle_t_xy(int n);
LevelSurface cylinder(int n, double R);
LevelSurface paraboloid(int n, double a);

// "cylinder", "cylinder:R=2", "paraboloid:a=0.5", ...
LevelSurface builtin_surface(const std::string& spec, int n);
LevelSurface surface_from_json(const nlohmann::json& j);
LevelSurface load_surface(const std::string& name_or_path, int n);
nlohmann::json surface_to_json(const LevelSurface& S);

// g o L_{h^-1}: the image of S under left translation by h.
LevelSurface left_translated(const LevelSurface& S, const Point& h);

// Horizontal and vertical frame derivatives of g together with their
// coordinate Jacobian; enough to differentiate N, nu_h, lambda along any vector.
struct FrameGradient {
  double g = 0.0;
  HVec Dh;        // X_i g, Y_i g
  double Tg = 0.0;
  CVec grad;      // coordinate gradient
  CMat jac;       // rows: (Dh, Tg), columns: coordinates
};

FrameGradient frame_gradient(const LevelSurface& S, const Point& q);

struct SurfaceFrame {
  Point q;
  FrameVector N;
  double grad_norm = 0.0;  // |grad g| in the left-invariant metric
  double Nh_norm = 0.0;
  FrameVector nu_h;
  double lambda = 0.0;
  double nu = 0.0;  // <N,T>/|N_h| = lambda/2
  std::vector<FrameVector> basis;       // e1..e2n
  std::vector<int> horizontal_tangent;  // positions of e1, e3, ..., e2n in basis
  Eigen::MatrixXd A;                    // shape operator on the horizontal tangent space
  // Divergence of nu_h over TS cap H, sum <nabla_{e_a} nu_h, e_a>. With the
  // sign of A above this equals -trace(A); it is the quantity the tube
  // formulas are written in.
  double H = 0.0;
  double sigma2 = 0.0;
  Eigen::VectorXd dlam;  // e_i(lambda)
  std::vector<HVec> nabla_nuh;  // nabla_{e_i} nu_h

  FrameGradient fg;

  int n() const { return q.n(); }
  HVec nabla_nuh_along(const FrameVector& u) const;
  double dlambda_along(const FrameVector& u) const;
  double dnu(int i) const { return 0.5 * dlam(i); }
};

SurfaceFrame frame_at(const LevelSurface& S, const Point& q, double eps_sing = kEpsSing);

struct ShapeOperator {
  Eigen::MatrixXd A;
  double H = 0.0;
  double sigma2 = 0.0;
};
ShapeOperator shape_operator(const LevelSurface& S, const Point& q);

// Recomputes A, H, sigma2 in another orthonormal basis of TS cap H given by
// columns of Q (frame components of the e1, e3, ... slots are rotated by Q).
ShapeOperator shape_operator_in_basis(const SurfaceFrame& F, const Eigen::MatrixXd& Q);

double nabla_E_nuh_check(const LevelSurface& S, const Point& q);

struct UmbilicReport {
  bool is_umbilic = false;
  double rho = 0.0;
  std::optional<double> mu;
  double spread = 0.0;           // eigen-spread on the complement of Z, plus |A(Z) - rho Z|
  std::vector<double> relation_residuals;  // Z(nu)+nu^2-mu(mu-rho), max|V(nu)|, max|V(mu)|, max|V(rho)|, Z(mu)-(rho-2mu)nu
};
UmbilicReport umbilic_check(const LevelSurface& S, const Point& q, double tol = 1e-8);

// Newton along one coordinate axis to land on g = 0.
std::optional<Point> solve_on_axis(const LevelSurface& S, CVec x, int axis, int max_iter = 60);

}  // namespace heis
