#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "artout/core/dataset.hpp"
#include "artout/core/error.hpp"

namespace artout {

/**
 * Approximate minimal enclosing ball by the core-set Frank-Wolfe scheme with
 * away steps (Yildirim 2008). The weights u live on the simplex; the center
 * is sum u_i x_i and the dual objective sum u_i |x_i - c|^2 lower-bounds the
 * squared optimal radius. Iteration stops once the farthest point lies
 * within (1 + rel_tol) of that bound.
 *
 * The returned radius is the exact distance to the farthest row from the
 * returned center, so containment holds without slack and the radius is at
 * most (1 + rel_tol) times optimal.
 */
inline Ball minimal_enclosing_ball(const Dataset& data, double rel_tol = 1e-3) {
  require(!data.empty(), "minimal enclosing ball of an empty dataset");
  require(rel_tol > 0.0, "rel_tol must be positive");
  const std::size_t n = data.size();
  const std::size_t d = data.dim();

  auto farthest_from = [&](std::span<const double> p) {
    std::size_t best = 0;
    double best_d = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double s = squared_distance(p, data.row(i));
      if (s > best_d) {
        best_d = s;
        best = i;
      }
    }
    return best;
  };

  std::vector<double> u(n, 0.0);
  const std::size_t a = farthest_from(data.row(0));
  const std::size_t b = farthest_from(data.row(a));
  u[a] += 0.5;
  u[b] += 0.5;

  Instance center(d, 0.0);
  std::vector<double> dist2(n);
  const double bound = (1.0 + rel_tol) * (1.0 + rel_tol);
  const std::size_t max_iter = 100000 + 100 * n;

  for (std::size_t iter = 0;; ++iter) {
    std::fill(center.begin(), center.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (u[i] == 0.0) continue;
      auto r = data.row(i);
      for (std::size_t j = 0; j < d; ++j) center[j] += u[i] * r[j];
    }
    double dual = 0.0;
    std::size_t far = 0;
    std::size_t near = n;
    for (std::size_t i = 0; i < n; ++i) {
      dist2[i] = squared_distance(center, data.row(i));
      dual += u[i] * dist2[i];
      if (dist2[i] > dist2[far]) far = i;
      if (u[i] > 0.0 && (near == n || dist2[i] < dist2[near])) near = i;
    }
    if (dist2[far] == 0.0) break;                 // all rows coincide
    if (dist2[far] <= bound * dual) break;
    if (iter >= max_iter) break;                  // radius stays valid, only looser

    const double up = dist2[far] / dual - 1.0;    // forward gap
    const double down = 1.0 - dist2[near] / dual; // away gap
    if (up >= down || u[near] >= 1.0) {
      const double lambda = up / (2.0 * (1.0 + up));
      for (double& w : u) w *= (1.0 - lambda);
      u[far] += lambda;
    } else {
      const double lambda = std::min(down / (2.0 * (1.0 - down)), u[near] / (1.0 - u[near]));
      for (double& w : u) w *= (1.0 + lambda);
      u[near] -= lambda;
      if (u[near] < 1e-15) u[near] = 0.0;
    }
  }

  double r2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) r2 = std::max(r2, squared_distance(center, data.row(i)));
  return {center, std::sqrt(r2)};
}

}  // namespace artout
