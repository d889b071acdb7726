#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "artout/core.hpp"
#include "artout/generators/config.hpp"
#include "artout/generators/sampling.hpp"

namespace artout {

// exp(-|a - b|^2 / (2 r^2)); how much two detectors cover the same space.
inline double detector_match(std::span<const double> a, std::span<const double> b, double r) {
  return std::exp(-squared_distance(a, b) / (2.0 * r * r));
}

struct Detector {
  Instance position;
  std::size_t age = 0;
};

/**
 * Real-valued negative selection. Detectors start as a unifBox sample. In
 * iteration `iter` (0 <= iter < max_iter) with step eta0^(-iter/tau), each
 * detector in turn either
 *  - sits close to genuine data (median k-NN distance < r): it ages and
 *    moves away from its neighbors, or is replaced by a fresh random
 *    detector once older than t;
 *  - or is clear of the data: its age resets and it moves away from the
 *    other detectors, weighted by detector_match.
 * Updates are applied in place, so later detectors see earlier moves.
 * Final detector centers are the artificial outliers.
 */
inline Dataset gen_neg_select(const Dataset& data, const GeneratorConfig& cfg, RngStream rng) {
  require(!data.empty(), "negSelect needs at least one genuine instance");
  const auto& p = cfg.neg_select;
  require(p.radius > 0.0, "negSelect radius must be positive");
  require(p.k >= 1, "negSelect needs k >= 1");
  const std::size_t n_art = cfg.resolved_n_art(data.size());
  require(n_art >= 1, "negSelect needs n_art >= 1");
  const std::size_t d = data.dim();
  const std::size_t k = std::min(p.k, data.size());

  GeneratorConfig init_cfg = cfg;
  init_cfg.n_art = n_art;
  const Dataset init = gen_unif_box(data, init_cfg, rng);
  std::vector<Detector> det(n_art);
  for (std::size_t i = 0; i < n_art; ++i) det[i].position = init.instance(i);

  const auto box = sampling_box(data, cfg.bounds_expansion);
  RngStream fresh = rng.split("replace");
  auto new_detector = [&] {
    Instance x(d);
    for (std::size_t j = 0; j < d; ++j) x[j] = fresh.uniform(box[j].min, box[j].max);
    return x;
  };

  std::vector<double> nd(k);
  Instance dir(d);
  for (std::size_t iter = 0; iter < p.max_iter; ++iter) {
    const double eta = std::pow(p.eta0, -static_cast<double>(iter) / p.tau);
    for (auto& cur : det) {
      const auto nn = k_nearest_neighbors(data, cur.position, k);
      for (std::size_t m = 0; m < k; ++m) nd[m] = nn[m].distance;
      std::sort(nd.begin(), nd.end());
      const double med = k % 2 ? nd[k / 2] : 0.5 * (nd[k / 2 - 1] + nd[k / 2]);

      if (med < p.radius) {
        if (cur.age > p.max_age) {
          cur.position = new_detector();
          cur.age = 0;
          continue;
        }
        ++cur.age;
        std::fill(dir.begin(), dir.end(), 0.0);
        for (const auto& nb : nn) {
          auto r = data.row(nb.index);
          for (std::size_t j = 0; j < d; ++j) dir[j] += cur.position[j] - r[j];
        }
        for (std::size_t j = 0; j < d; ++j) cur.position[j] += eta * dir[j] / static_cast<double>(k);
      } else {
        cur.age = 0;
        std::fill(dir.begin(), dir.end(), 0.0);
        double weight = 0.0;
        for (const auto& other : det) {
          const double w = detector_match(cur.position, other.position, p.radius);
          weight += w;
          for (std::size_t j = 0; j < d; ++j) dir[j] += w * (cur.position[j] - other.position[j]);
        }
        for (std::size_t j = 0; j < d; ++j) cur.position[j] += eta * dir[j] / weight;
      }
    }
  }

  auto out = detail::artificial_like(data, n_art);
  for (const auto& dt : det) detail::add_artificial(out, dt.position);
  return out;
}

}  // namespace artout
