#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "heis/distance.hpp"
#include "heis/fd.hpp"
#include "heis/patch.hpp"

namespace heis {

// Philox4x32-10 (Salmon et al. 2011). Stateless: a 128-bit counter and a
// 64-bit key give four 32-bit words.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key);

// Uniform doubles in [0, 1) for sample i, stream seed; two doubles per call.
std::array<double, 2> philox_uniform2(std::uint64_t seed, std::uint64_t sample, std::uint32_t block);

struct Box {
  CVec lo, hi;
  double volume() const;
};

// Box enclosing U_r: exp_S over a grid of U at radii 0 and r, padded by margin
// (relative to the box size) plus r.
Box tube_bounding_box(const LevelSurface& S, const SurfacePatch& U, double r, int per_dim = 12,
                      double margin = 0.05);

struct MCEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  std::int64_t hits = 0;
  std::int64_t ambiguous = 0;        // rejected: tied feet
  std::int64_t projection_failures = 0;
};

struct MCOptions {
  int seed_budget = 512;  // projection seeds over a slightly enlarged U
  int max_seeds = 2;
  int threads = 0;
};

MCEstimate mc_tube_volume(const LevelSurface& S, const SurfacePatch& U, const Box& box, double r,
                          std::int64_t samples, std::uint64_t seed, const MCOptions& opt = {});

struct BruteGrid {
  int directions = 16;  // per angle of the unit sphere in the z-plane (n = 1: points on the circle)
  int phis = 24;        // values of lambda s in (-2 pi, 2 pi)
};

// Minimal s over forward shots E(v, lambda, s) = q refined by damped Newton from
// a grid of (v, phi) starts. Uses only the forward geodesic formula.
double brute_distance(const Point& p, const Point& q, const BruteGrid& grid = {});

}  // namespace heis
