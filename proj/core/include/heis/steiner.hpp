#pragma once

#include <array>
#include <string>
#include <vector>

#include "heis/patch.hpp"
#include "heis/surface.hpp"

namespace heis {

struct SteinerCoeffs {
  std::array<double, 5> a{};
};

SteinerCoeffs steiner_coeffs_h1(const SurfaceFrame& F);
SteinerCoeffs steiner_coeffs_h1(const LevelSurface& S, const Point& q);

// sum a_i f_i(lambda, s); f_0 = cos(lambda s)
double h1_integrand(const SteinerCoeffs& c, double lam, double s);

// Initial data of the Jacobi fields E_i of a normal geodesic, enough to rebuild
// B(s) at any s.
struct DetBData {
  int n = 1;
  double lambda = 0.0;
  double Nh_norm = 0.0;
  Eigen::VectorXd c0, c0dot, c0ddot, lamp;
  Eigen::MatrixXd X0, X1, X2;  // <e_i, e_b>, <nabla_{e_i} nu_h, e_b>, <J nabla_{e_i} nu_h, e_b>, b >= 3
};

DetBData detb_data(const SurfaceFrame& F);
Eigen::MatrixXd B_matrix(const DetBData& d, double s);
double det_B(const DetBData& d, double s);
double det_B(const LevelSurface& S, const Point& q, double s);

// First s in (0, s_max] where det B vanishes; +inf if none.
double first_conjugate(const DetBData& d, double s_max);

enum class TubeMethod { H1Closed, HnDet, Umbilic, MonteCarlo };
std::string to_string(TubeMethod m);

struct Series3 {
  double c1 = 0.0, c2 = 0.0, c3 = 0.0;
  bool remainder_o_r4 = true;
};

struct TubeResult {
  std::vector<double> radii;
  std::vector<double> volumes;
  Series3 series3;
  TubeMethod method = TubeMethod::HnDet;
};

struct TubeOptions {
  QuadratureSpec quad;
  int s_order = 32;
  int threads = 0;
  double umbilic_tol = 1e-7;
};

// radii must be nonnegative; output volumes follow the input order.
TubeResult tube_volume_h1(const LevelSurface& S, const SurfacePatch& U, const std::vector<double>& radii,
                          const TubeOptions& opt = {});
TubeResult tube_volume_hn(const LevelSurface& S, const SurfacePatch& U, const std::vector<double>& radii,
                          const TubeOptions& opt = {});
TubeResult tube_volume_umbilic(const LevelSurface& S, const SurfacePatch& U, const std::vector<double>& radii,
                               const TubeOptions& opt = {});

// Coefficients of r, r^2, r^3. The H^1 variant needs n = 1.
Series3 series3_h1(const LevelSurface& S, const SurfacePatch& U, const TubeOptions& opt = {});
Series3 series3_hn(const LevelSurface& S, const SurfacePatch& U, const TubeOptions& opt = {});
Series3 series3(const LevelSurface& S, const SurfacePatch& U, const TubeOptions& opt = {});

// Umbilic tube integrand factor det(D(s)).
double umbilic_det_D(double lambda, double mu, double s);

struct PolynomialWitness {
  bool is_polynomial = false;
  int fitted_degree = -1;
  double residual = 0.0;  // relative, for the best degree tried
  std::vector<double> radii;
  std::vector<double> volumes;
};

PolynomialWitness polynomial_witness(const LevelSurface& S, const SurfacePatch& U, int degree_cap,
                                     const TubeOptions& opt = {}, double r_max = 0.5);

}  // namespace heis
