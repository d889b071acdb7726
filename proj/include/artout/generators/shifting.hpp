#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "artout/core.hpp"
#include "artout/generators/config.hpp"
#include "artout/generators/sampling.hpp"

// Approaches that perturb or shift genuine instances.

namespace artout {

// v^(i) = sd_i / sum_j sd_j. Throws if every attribute is constant.
inline std::vector<double> skew_weights(const Dataset& data) {
  const auto m = attribute_moments(data);
  double total = 0.0;
  for (double s : m.stddev) total += s;
  if (!(total > 0.0)) throw Error("skewBased needs at least one non-constant attribute");
  std::vector<double> v(m.stddev);
  for (double& x : v) x /= total;
  return v;
}

/**
 * alpha * (v_1 noise_1, ..., v_d noise_d) with noise_i = r_i / sum_j r_j and
 * r ~ N(0, I). Draws whose sum is within 1e-8 of zero are discarded.
 */
inline std::vector<double> skew_offset(std::span<const double> weights, double alpha, RngStream& rng) {
  std::vector<double> r(weights.size());
  double sum = 0.0;
  do {
    sum = 0.0;
    for (double& x : r) {
      x = rng.normal();
      sum += x;
    }
  } while (std::abs(sum) < 1e-8);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = alpha * weights[i] * (r[i] / sum);
  return r;
}

inline Dataset gen_skew_based(const Dataset& data, const GeneratorConfig& cfg, RngStream rng) {
  require(data.size() >= 2, "skewBased needs at least two genuine instances");
  const auto weights = skew_weights(data);
  const std::size_t n_art = cfg.resolved_n_art(data.size());
  auto out = detail::artificial_like(data, n_art);
  std::vector<double> x(data.dim());
  for (std::size_t i = 0; i < n_art; ++i) {
    auto base = data.row(rng.index(data.size()));
    const auto off = skew_offset(weights, cfg.alpha, rng);
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = base[j] + off[j];
    detail::add_artificial(out, x);
  }
  return out;
}

/**
 * Uniform noise around a random genuine instance x: attribute i is drawn from
 * [x_i - eps * x_i, x_i + eps * (1 - x_i)]. Data must lie in [0, 1]^d.
 */
inline Dataset gen_sur_reg(const Dataset& data, const GeneratorConfig& cfg, RngStream rng) {
  require(!data.empty(), "surReg needs at least one genuine instance");
  require(cfg.epsilon >= 0.0 && cfg.epsilon <= 1.0, "surReg epsilon must lie in [0,1]");
  for (double v : data.values()) {
    if (v < 0.0 || v > 1.0) throw Error("surReg requires unit-box data");
  }
  const std::size_t n_art = cfg.resolved_n_art(data.size());
  auto out = detail::artificial_like(data, n_art);
  std::vector<double> x(data.dim());
  const double eps = cfg.epsilon;
  for (std::size_t i = 0; i < n_art; ++i) {
    auto base = data.row(rng.index(data.size()));
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double lo = base[j] - eps * base[j];
      const double hi = base[j] + eps * (1.0 - base[j]);
      x[j] = std::clamp(lo + (hi - lo) * rng.uniform(), 0.0, 1.0);
    }
    detail::add_artificial(out, x);
  }
  return out;
}

// Median over rows of the distance to the nearest other row; 0 for n < 2.
inline double median_nearest_neighbor_distance(const Dataset& data) {
  if (data.size() < 2) return 0.0;
  std::vector<double> d(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) d[i] = k_nearest_neighbors_of_row(data, i, 1)[0].distance;
  std::sort(d.begin(), d.end());
  const std::size_t h = d.size() / 2;
  return d.size() % 2 ? d[h] : 0.5 * (d[h - 1] + d[h]);
}

/**
 * Gaussian perturbation with a distance filter. The first sweep perturbs each
 * genuine instance once; afterwards accepted artificial outliers are
 * perturbed again until n_art are accepted. A proposal is accepted when its
 * distance to the closest genuine instance is at least epsilon.
 */
inline Dataset gen_infeas_exam(const Dataset& data, const GeneratorConfig& cfg, RngStream rng) {
  require(!data.empty(), "infeasExam needs at least one genuine instance");
  const double eps = cfg.infeas_epsilon ? *cfg.infeas_epsilon : median_nearest_neighbor_distance(data);
  require(eps >= 0.0, "infeasExam epsilon must be nonnegative");
  const std::size_t n_art = cfg.resolved_n_art(data.size());
  const std::size_t d = data.dim();

  auto out = detail::artificial_like(data, n_art);
  std::vector<double> x(d);
  std::size_t proposals = 0;

  auto propose_from = [&](std::span<const double> base) {
    if (++proposals > cfg.infeas_max_proposals) throw Error("infeasExam did not converge");
    for (std::size_t j = 0; j < d; ++j) x[j] = base[j] + rng.normal(cfg.infeas_mu, cfg.infeas_sigma) * cfg.infeas_alpha;
    if (nearest_distance(data, x) >= eps) detail::add_artificial(out, x);
  };

  for (std::size_t i = 0; i < data.size() && out.size() < n_art; ++i) propose_from(data.row(i));
  // Nothing accepted yet: keep sweeping over the genuine instances.
  for (std::size_t i = 0; out.empty() && n_art > 0; i = (i + 1) % data.size()) propose_from(data.row(i));
  while (out.size() < n_art) {
    const Instance base = out.instance(rng.index(out.size()));
    propose_from(base);
  }
  return out;
}

// k = ceil(5 log10 n), at most n - 1. The small offset keeps exact powers of
// ten (n = 1000 -> 15) from rounding up.
inline std::size_t beps_neighbor_count(std::size_t n) {
  const auto k = static_cast<std::size_t>(std::ceil(5.0 * std::log10(static_cast<double>(n)) - 1e-9));
  return std::clamp<std::size_t>(k, 1, n > 1 ? n - 1 : 1);
}

inline constexpr double kBepsThreshold = 0.1;

struct BoundaryInstances {
  std::size_t k = 0;
  std::vector<std::size_t> rows;
  std::vector<Instance> norms;              // sum of unit vectors pointing away from neighbors
  std::vector<double> mean_neighbor_distance;
};

/**
 * Border-edge pattern selection. For each instance, v_i are unit vectors
 * from its k neighbors towards it and norm = sum v_i; the instance is on the
 * boundary when at least (1 - 0.1) of the v_i have a nonnegative projection
 * onto norm. Instances with a zero norm vector are never boundary.
 */
inline BoundaryInstances detect_boundary_beps(const Dataset& data) {
  require(data.size() >= 2, "BEPS needs at least two instances");
  const std::size_t n = data.size();
  const std::size_t d = data.dim();
  BoundaryInstances out;
  out.k = beps_neighbor_count(n);

  std::vector<Instance> v(out.k, Instance(d));
  Instance norm(d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto nn = k_nearest_neighbors_of_row(data, i, out.k);
    auto x = data.row(i);
    std::fill(norm.begin(), norm.end(), 0.0);
    double dist_sum = 0.0;
    for (std::size_t m = 0; m < out.k; ++m) {
      auto nb = data.row(nn[m].index);
      dist_sum += nn[m].distance;
      for (std::size_t j = 0; j < d; ++j)
        v[m][j] = nn[m].distance > 0.0 ? (x[j] - nb[j]) / nn[m].distance : 0.0;
      for (std::size_t j = 0; j < d; ++j) norm[j] += v[m][j];
    }
    double norm2 = 0.0;
    for (double t : norm) norm2 += t * t;
    if (norm2 == 0.0) continue;

    std::size_t nonneg = 0;
    for (std::size_t m = 0; m < out.k; ++m) {
      double theta = 0.0;
      for (std::size_t j = 0; j < d; ++j) theta += v[m][j] * norm[j];
      if (theta >= 0.0) ++nonneg;
    }
    const double l = static_cast<double>(nonneg) / static_cast<double>(out.k);
    if (l >= 1.0 - kBepsThreshold) {
      out.rows.push_back(i);
      out.norms.push_back(norm);
      out.mean_neighbor_distance.push_back(dist_sum / static_cast<double>(out.k));
    }
  }
  return out;
}

/**
 * Shifts each boundary instance along its unit norm vector by `scale`, the
 * mean distance between boundary instances and their BEPS neighbors.
 */
inline Dataset gen_neg_shift(const Dataset& data, const GeneratorConfig& /*cfg*/, RngStream /*rng*/) {
  const auto bounds = detect_boundary_beps(data);
  if (bounds.rows.empty()) throw Error("negShift found no boundary instances");
  double scale = 0.0;
  for (double m : bounds.mean_neighbor_distance) scale += m;
  scale /= static_cast<double>(bounds.rows.size());

  auto out = detail::artificial_like(data, bounds.rows.size());
  std::vector<double> x(data.dim());
  for (std::size_t b = 0; b < bounds.rows.size(); ++b) {
    auto base = data.row(bounds.rows[b]);
    const auto& norm = bounds.norms[b];
    double len = 0.0;
    for (double t : norm) len += t * t;
    len = std::sqrt(len);
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = base[j] + norm[j] / len * scale;
    detail::add_artificial(out, x);
  }
  return out;
}

}  // namespace artout
