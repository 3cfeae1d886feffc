#pragma once

// Shared helpers for the unit suites: small grids, seeded random fields, and
// index rolling for periodicity checks.

#include <cmath>
#include <numbers>
#include <random>

#include "manifold.hpp"

namespace kwtest {

inline constexpr double kPi = std::numbers::pi;

inline kw::GridPtr grid1d(int n, double period = 1.0) {
  kw::GridSpec spec;
  spec.dim = 1;
  spec.points[0] = n;
  spec.periods[0] = period;
  return kw::build_grid(spec);
}

inline kw::GridPtr grid2d(int nx, int ny, double lx = 1.0, double ly = 1.0) {
  kw::GridSpec spec;
  spec.dim = 2;
  spec.points = {nx, ny, 0};
  spec.periods = {lx, ly, 0.0};
  return kw::build_grid(spec);
}

inline kw::GridPtr grid3d(int n) {
  kw::GridSpec spec;
  spec.dim = 3;
  spec.points = {n, n, n};
  spec.periods = {1.0, 1.0, 1.0};
  return kw::build_grid(spec);
}

inline kw::ScalarField random_field(kw::GridPtr grid, unsigned seed,
                                    double lo = -1.0, double hi = 1.0) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(grid->node_count());
  for (double& x : v) x = dist(rng);
  return kw::ScalarField::from_values_unchecked(std::move(grid), std::move(v));
}

/// Field shifted by `offset` nodes along `axis` (periodic roll).
inline kw::ScalarField roll(const kw::ScalarField& u, int axis, int offset) {
  const kw::Grid& g = *u.grid();
  const int n = g.points(axis);
  const std::size_t stride = g.stride(axis);
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const int j = static_cast<int>((i / stride) % static_cast<std::size_t>(n));
    const int js = ((j + offset) % n + n) % n;
    const std::ptrdiff_t d = static_cast<std::ptrdiff_t>(js - j) *
                             static_cast<std::ptrdiff_t>(stride);
    out[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) + d)] = u[i];
  }
  return kw::ScalarField::from_values_unchecked(u.grid(), std::move(out));
}

}  // namespace kwtest
