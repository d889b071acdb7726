#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "artout/core.hpp"
#include "artout/generators/config.hpp"

// Approaches that sample from a distribution fitted to (or around) the
// genuine instances.

namespace artout {

namespace detail {

inline Dataset artificial_like(const Dataset& data, std::size_t reserve = 0) {
  Dataset out = data.empty_like();
  out.reserve(reserve);
  return out;
}

inline void add_artificial(Dataset& out, std::span<const double> row) {
  out.add_row(row, Label::outlier, Provenance::artificial);
}

}  // namespace detail

// Data bounding box widened by `expansion` times the range on each side.
inline std::vector<AttributeRange> sampling_box(const Dataset& data, double expansion) {
  auto box = attribute_ranges(data);
  for (auto& r : box) {
    const double pad = expansion * r.width();
    r.min -= pad;
    r.max += pad;
  }
  return box;
}

inline Dataset gen_unif_box(const Dataset& data, const GeneratorConfig& cfg, RngStream rng) {
  require(!data.empty(), "unifBox needs at least one genuine instance");
  require(cfg.bounds_expansion >= 0.0, "bounds expansion must be nonnegative");
  const auto box = sampling_box(data, cfg.bounds_expansion);
  const std::size_t n_art = cfg.resolved_n_art(data.size());
  auto out = detail::artificial_like(data, n_art);
  std::vector<double> x(data.dim());
  for (std::size_t i = 0; i < n_art; ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = std::min(rng.uniform(box[j].min, box[j].max), box[j].max);
    detail::add_artificial(out, x);
  }
  return out;
}

/**
 * Latin hypercube design over the unifBox sampling box: each attribute's
 * range is cut into n_art equal strata, an independent random permutation
 * assigns strata to points, and each point is uniform inside its cell.
 */
inline Dataset gen_lhs(const Dataset& data, const GeneratorConfig& cfg, RngStream rng) {
  require(!data.empty(), "lhs needs at least one genuine instance");
  const auto box = sampling_box(data, cfg.bounds_expansion);
  const std::size_t n_art = cfg.resolved_n_art(data.size());
  require(n_art >= 1, "lhs needs n_art >= 1");
  const std::size_t d = data.dim();

  std::vector<std::vector<std::size_t>> strata(d);
  for (auto& s : strata) s = rng.permutation(n_art);

  auto out = detail::artificial_like(data, n_art);
  std::vector<double> x(d);
  const auto m = static_cast<double>(n_art);
  for (std::size_t i = 0; i < n_art; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double lo = box[j].min + box[j].width() * (static_cast<double>(strata[j][i]) / m);
      const double hi = box[j].min + box[j].width() * (static_cast<double>(strata[j][i] + 1) / m);
      x[j] = std::clamp(lo + (hi - lo) * rng.uniform(), lo, hi);
    }
    detail::add_artificial(out, x);
  }
  return out;
}

// Uniform in the (approximate) minimal enclosing ball: a normalized Gaussian
// direction scaled by radius * U^(1/d).
inline Dataset gen_unif_sphere(const Dataset& data, const GeneratorConfig& cfg, RngStream rng) {
  require(!data.empty(), "unifSphere needs at least one genuine instance");
  const Ball ball = minimal_enclosing_ball(data, cfg.enclosing_ball_tol);
  const std::size_t n_art = cfg.resolved_n_art(data.size());
  const std::size_t d = data.dim();
  auto out = detail::artificial_like(data, n_art);
  std::vector<double> x(d);
  for (std::size_t i = 0; i < n_art; ++i) {
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (double& v : x) {
        v = rng.normal();
        norm2 += v * v;
      }
    } while (norm2 == 0.0);
    const double scale = ball.radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(d)) / std::sqrt(norm2);
    for (std::size_t j = 0; j < d; ++j) x[j] = ball.center[j] + scale * x[j];
    detail::add_artificial(out, x);
  }
  return out;
}

// Mean distance from each row to its k nearest other rows.
inline std::vector<double> average_neighbor_distances(const Dataset& data, std::size_t k) {
  std::vector<double> avg(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto nn = k_nearest_neighbors_of_row(data, i, k);
    double s = 0.0;
    for (const auto& nb : nn) s += nb.distance;
    avg[i] = s / static_cast<double>(k);
  }
  return avg;
}

/**
 * Union of balls around each genuine instance with radius equal to its
 * average k-NN distance. A center is drawn uniformly, then a point uniformly
 * inside its ball.
 */
inline Dataset gen_mani_samp(const Dataset& data, const GeneratorConfig& cfg, RngStream rng) {
  require(cfg.k >= 1, "maniSamp needs k >= 1");
  if (data.size() <= cfg.k)
    throw Error("maniSamp needs more than k=" + std::to_string(cfg.k) + " instances, got " +
                std::to_string(data.size()));
  const auto radius = average_neighbor_distances(data, cfg.k);
  const std::size_t n_art = cfg.resolved_n_art(data.size());
  const std::size_t d = data.dim();
  auto out = detail::artificial_like(data, n_art);
  std::vector<double> x(d);
  for (std::size_t i = 0; i < n_art; ++i) {
    const std::size_t c = rng.index(data.size());
    auto center = data.row(c);
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (double& v : x) {
        v = rng.normal();
        norm2 += v * v;
      }
    } while (norm2 == 0.0);
    const double scale = radius[c] * std::pow(rng.uniform(), 1.0 / static_cast<double>(d)) / std::sqrt(norm2);
    for (std::size_t j = 0; j < d; ++j) x[j] = center[j] + scale * x[j];
    detail::add_artificial(out, x);
  }
  return out;
}

inline constexpr double kStddevFloor = 1e-9;

// Moments with the standard deviation floored, shared by densAprox and
// gaussTail.
inline AttributeMoments floored_moments(const Dataset& data) {
  auto m = attribute_moments(data);
  for (double& s : m.stddev) s = std::max(s, kStddevFloor);
  return m;
}

// Independent per-attribute Gaussians (diagonal covariance).
inline Dataset gen_dens_aprox(const Dataset& data, const GeneratorConfig& cfg, RngStream rng) {
  require(data.size() >= 2, "densAprox needs at least two genuine instances");
  const auto m = floored_moments(data);
  const std::size_t n_art = cfg.resolved_n_art(data.size());
  auto out = detail::artificial_like(data, n_art);
  std::vector<double> x(data.dim());
  for (std::size_t i = 0; i < n_art; ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = rng.normal(m.mean[j], m.stddev[j]);
    detail::add_artificial(out, x);
  }
  return out;
}

/**
 * Per attribute: a Gaussian with the band mean +- 3 sd removed. A fair coin
 * picks the tail, then inverse-CDF sampling draws from the Gaussian
 * conditioned on that tail.
 */
inline Dataset gen_gauss_tail(const Dataset& data, const GeneratorConfig& cfg, RngStream rng) {
  require(data.size() >= 2, "gaussTail needs at least two genuine instances");
  const auto m = floored_moments(data);
  const double tail_mass = normal_cdf(-3.0);
  const std::size_t n_art = cfg.resolved_n_art(data.size());
  auto out = detail::artificial_like(data, n_art);
  std::vector<double> x(data.dim());
  for (std::size_t i = 0; i < n_art; ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double mu = m.mean[j];
      const double sd = m.stddev[j];
      // The conditional draw can round onto the band edge; redraw then.
      for (;;) {
        const bool right = rng.bernoulli(0.5);
        const double z = -normal_quantile(rng.uniform_open() * tail_mass);  // z > 3
        const double v = right ? mu + sd * z : mu - sd * z;
        if (std::abs(v - mu) > 3.0 * sd) {
          x[j] = v;
          break;
        }
      }
    }
    detail::add_artificial(out, x);
  }
  return out;
}

/**
 * Equi-width d-dimensional histogram over fixed bounds. Cell weights are
 * 1 - count / max_count, i.e. the inverse of the max-normalized histogram.
 */
class InverseHistogram {
 public:
  static constexpr double kMaxCells = 1e7;

  InverseHistogram(const Dataset& data, std::vector<AttributeRange> bounds, std::size_t bins)
      : bounds_(std::move(bounds)), bins_(bins) {
    require(bins >= 1, "invHist needs at least one bin");
    require(bounds_.size() == data.dim(), "bounds do not match the data");
    if (std::pow(static_cast<double>(bins), static_cast<double>(data.dim())) > kMaxCells)
      throw Error("dimensionality too high for invHist: " + std::to_string(bins) + "^" +
                  std::to_string(data.dim()) + " cells");
    std::size_t cells = 1;
    for (std::size_t j = 0; j < data.dim(); ++j) cells *= bins;
    counts_.assign(cells, 0);
    for (std::size_t i = 0; i < data.size(); ++i) ++counts_[cell_of(data.row(i))];

    const std::size_t max_count = *std::max_element(counts_.begin(), counts_.end());
    weights_.resize(cells);
    for (std::size_t c = 0; c < cells; ++c)
      weights_[c] = max_count == 0 ? 1.0 : 1.0 - static_cast<double>(counts_[c]) / static_cast<double>(max_count);
    // Every cell equally full: no cell is preferred.
    if (std::all_of(weights_.begin(), weights_.end(), [](double w) { return w == 0.0; }))
      std::fill(weights_.begin(), weights_.end(), 1.0);

    cumulative_.resize(cells);
    std::partial_sum(weights_.begin(), weights_.end(), cumulative_.begin());
  }

  std::size_t cell_count() const { return counts_.size(); }
  const std::vector<std::size_t>& counts() const { return counts_; }

  std::vector<double> cell_probabilities() const {
    std::vector<double> p(weights_);
    for (double& v : p) v /= cumulative_.back();
    return p;
  }

  std::size_t cell_of(std::span<const double> x) const {
    std::size_t idx = 0;
    for (std::size_t j = 0; j < bounds_.size(); ++j) {
      std::size_t b = 0;
      const double w = bounds_[j].width();
      if (w > 0.0) {
        const double t = (x[j] - bounds_[j].min) / w * static_cast<double>(bins_);
        b = t <= 0.0 ? 0 : std::min(bins_ - 1, static_cast<std::size_t>(t));
      }
      idx = idx * bins_ + b;
    }
    return idx;
  }

  // Bin of attribute j for a flat cell index.
  std::size_t bin(std::size_t cell, std::size_t j) const {
    for (std::size_t k = bounds_.size() - 1; k > j; --k) cell /= bins_;
    return cell % bins_;
  }

  void sample(RngStream& rng, std::vector<double>& x) const {
    const double u = rng.uniform() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    std::size_t cell = static_cast<std::size_t>(it - cumulative_.begin());
    cell = std::min(cell, cumulative_.size() - 1);
    for (std::size_t j = 0; j < bounds_.size(); ++j) {
      const double w = bounds_[j].width() / static_cast<double>(bins_);
      const double lo = bounds_[j].min + w * static_cast<double>(bin(cell, j));
      x[j] = lo + w * rng.uniform();
    }
  }

 private:
  std::vector<AttributeRange> bounds_;
  std::size_t bins_;
  std::vector<std::size_t> counts_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
};

inline Dataset gen_inv_hist(const Dataset& data, const GeneratorConfig& cfg, RngStream rng) {
  require(!data.empty(), "invHist needs at least one genuine instance");
  const InverseHistogram hist(data, sampling_box(data, cfg.hist_expansion), cfg.hist_bins);
  const std::size_t n_art = cfg.resolved_n_art(data.size());
  auto out = detail::artificial_like(data, n_art);
  std::vector<double> x(data.dim());
  for (std::size_t i = 0; i < n_art; ++i) {
    hist.sample(rng, x);
    detail::add_artificial(out, x);
  }
  return out;
}

}  // namespace artout
