#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "heis/geodesic.hpp"
#include "heis/patch.hpp"
#include "heis/surface.hpp"

namespace heis {

struct InverseGeodesic {
  double length = 0.0;
  HVec dir;  // unit initial direction at p
  double curvature = 0.0;
  bool on_axis = false;  // q sits on the vertical axis through p: dir is one of many
};

// Minimising geodesic from p to q and its length.
InverseGeodesic cc_inverse(const Point& p, const Point& q);
double cc_distance(const Point& p, const Point& q);

// Korany gauge of p^-1 q; cheap proxy used to rank seeds.
double gauge_distance(const Point& p, const Point& q);

struct NormalData {
  HVec nu_h;
  double lambda = 0.0;
  double Nh_norm = 0.0;
};
NormalData normal_data(const LevelSurface& S, const Point& q, double eps_sing = kEpsSing);

Point exp_S(const LevelSurface& S, const Point& q, double s);

struct ProjectionCandidate {
  Point foot;
  double dist = 0.0;
  double lambda = 0.0;
  HVec dir;
};

struct ProjectionResult {
  Point foot;
  double dist = 0.0;
  GeodesicArc arc;
  int multiplicity_hint = 0;  // distinct feet tied at the minimal distance
  bool ambiguous = false;
  std::vector<ProjectionCandidate> feet;  // every distinct converged solution, by distance
};

struct ProjectionOptions {
  int max_seeds = 5;
  double tie_rel = 1e-6;
  bool cross_validate = true;  // rank seeds by exact distance and check the bound
  double residual_tol = 1e-11;
  double eps_sing = kEpsSing;
  // stop trying further seeds once a foot this far away is found; only for
  // callers that ask whether the distance is below a threshold
  double stop_beyond = std::numeric_limits<double>::infinity();
};

// Never throws on ties; ambiguous and feet describe them. Throws NoConvergence.
ProjectionResult project_to_surface(const LevelSurface& S, const Point& p, const std::vector<Point>& seeds,
                                    const ProjectionOptions& opt = {});

// As above but a tie raises AmbiguousProjection.
ProjectionResult project_unique(const LevelSurface& S, const Point& p, const std::vector<Point>& seeds,
                                const ProjectionOptions& opt = {});

struct ReachEstimate {
  double value = 0.0;
  double conjugate = 0.0;   // first root of det B
  double minimality = 0.0;  // 2 pi / |lambda|
  double collision = 0.0;   // first meeting of two normal geodesics
  bool unbounded() const { return std::isinf(value); }
};

// Scan length used when nothing bounds the search (lambda = 0 everywhere).
inline constexpr double kReachScanCap = 100.0;

ReachEstimate reach_estimate(const LevelSurface& S, const std::vector<Point>& K_grid);

std::vector<Point> parallel_surface_sample(const LevelSurface& S, const SurfacePatch& U, int per_dim,
                                           double r);

}  // namespace heis
