#pragma once

#include <functional>
#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "heis/surface.hpp"

namespace heis {

struct Interval {
  double lo = 0.0, hi = 0.0;
  double width() const { return hi - lo; }
};

// A region U of S written as a graph: the coordinate graph_axis is solved from
// g = 0, the other 2n coordinates come from a box of parameters. With polar set,
// the first two parameters are (radius, angle) for the first two free coordinates.
struct SurfacePatch {
  int n = 1;
  int graph_axis = 0;
  bool polar = false;
  std::vector<Interval> box;  // 2n intervals
  double graph_guess = 0.0;

  std::vector<int> free_axes() const;
  CVec free_coords(const HVec& w) const;
  std::optional<Point> point_at(const LevelSurface& S, const HVec& w) const;
  // Coordinate tangent vectors dP/dw_k as columns; q must be point_at(w).
  CMat tangents(const LevelSurface& S, const HVec& w, const Point& q) const;
  // Riemannian area density dS/dw
  double area_density(const LevelSurface& S, const HVec& w, const Point& q) const;
  HVec params_of(const Point& q) const;
  bool contains(const LevelSurface& S, const Point& q, double tol = 1e-7) const;
  double parameter_volume() const;
  // Largest spacing between grid nodes at the given resolution, in coordinate units.
  double spacing(int per_dim) const;

  // grid of points at cell centres, per_dim along every parameter
  std::vector<Point> grid(const LevelSurface& S, int per_dim) const;
};

// Built-in patches: polar annulus of radii [r0, r1] over the graph t = t(z)
// (extra coordinates for n >= 2 range over [-w, w]); and a coordinate box.
SurfacePatch annulus_patch(int n, double r0, double r1, double extra_half_width = 0.5);
SurfacePatch box_patch(int n, int graph_axis, std::vector<Interval> box, double graph_guess = 0.0);
SurfacePatch default_patch(const LevelSurface& S);

SurfacePatch patch_from_json(const nlohmann::json& j);
nlohmann::json patch_to_json(const SurfacePatch& P);

// Tensor Gauss-Legendre rule on the parameter box.
struct QuadratureSpec {
  int order = 8;   // nodes per cell and dimension; one of 4, 8, 16, 32
  int cells = 2;   // cells per dimension
};

struct SurfaceNode {
  HVec w;
  Point q;
  double weight = 0.0;  // Gauss weight times dS/dw
};

std::vector<SurfaceNode> surface_nodes(const LevelSurface& S, const SurfacePatch& P,
                                       const QuadratureSpec& spec);

// Points of S inside the patch where |N_h| < eps_sing. Local minima of |N_h|
// over the parameter grid are refined by damped Newton on the horizontal
// gradient and merged when closer than a quarter of the grid spacing.
std::vector<Point> singular_set_scan(const LevelSurface& S, const SurfacePatch& region, int grid,
                                     double eps_sing = kEpsSing);

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int order, std::vector<double>& x, std::vector<double>& w);

}  // namespace heis
