#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "artout/classifiers.hpp"
#include "artout/core.hpp"
#include "artout/generators.hpp"

namespace artout {

enum class FilterKind { classifier_loop, committee, thinning, kdmax, distance };
enum class KeepMode { keep_outlier, keep_normal };

inline std::string_view to_string(FilterKind k) {
  switch (k) {
    case FilterKind::classifier_loop: return "classifierLoop";
    case FilterKind::committee: return "committee";
    case FilterKind::thinning: return "thinning";
    case FilterKind::kdmax: return "kdmax";
    case FilterKind::distance: return "distance";
  }
  return "?";
}

inline FilterKind parse_filter_kind(std::string_view s) {
  for (auto k : {FilterKind::classifier_loop, FilterKind::committee, FilterKind::thinning, FilterKind::kdmax,
                 FilterKind::distance})
    if (to_string(k) == s) return k;
  throw Error("unknown filter kind '" + std::string(s) + "'");
}

inline std::string_view to_string(KeepMode m) {
  return m == KeepMode::keep_outlier ? "keep-outlier" : "keep-normal";
}

inline KeepMode parse_keep_mode(std::string_view s) {
  if (s == "keep-outlier") return KeepMode::keep_outlier;
  if (s == "keep-normal") return KeepMode::keep_normal;
  throw Error("unknown keep mode '" + std::string(s) + "'");
}

struct FilterConfig {
  FilterKind kind = FilterKind::distance;
  std::size_t max_rem = 0;
  std::size_t committee_size = 5;
  double subsample_fraction = 0.5;
  std::size_t target_count = 1;
  std::size_t k = 1;
  double dmax = 0.1;
  KeepMode keep_mode = KeepMode::keep_outlier;
  double epsilon = 0.1;
  std::size_t max_loops = 50;
};

struct ClassifierLoopTrace {
  std::vector<std::size_t> removed;  // per loop
};

/**
 * `train(genuine, arts)` returns a model with predict(row); `supply(count)`
 * returns fresh artificial instances. Repeatedly trains on data vs. arts and
 * replaces every artificial instance the model calls normal, until at most
 * max_rem are replaced in a loop or max_loops loops have run.
 */
template <typename TrainFn, typename SupplyFn>
  requires std::invocable<TrainFn&, const Dataset&, const Dataset&>
Dataset filter_classifier_loop(const Dataset& data, Dataset arts, TrainFn&& train, SupplyFn&& supply,
                               const FilterConfig& cfg, ClassifierLoopTrace* trace = nullptr) {
  require(cfg.max_loops >= 1, "maxLoops must be positive");
  for (std::size_t loop = 0; loop < cfg.max_loops; ++loop) {
    const auto model = train(data, arts);
    std::vector<std::size_t> flagged;
    for (std::size_t i = 0; i < arts.size(); ++i)
      if (model.predict(arts.row(i)) == Label::normal) flagged.push_back(i);
    if (trace) trace->removed.push_back(flagged.size());
    if (!flagged.empty()) {
      Dataset fresh = supply(flagged.size());
      require(fresh.size() >= flagged.size() && fresh.dim() == arts.dim(),
              "generator could not resupply " + std::to_string(flagged.size()) + " instances");
      for (std::size_t r = 0; r < flagged.size(); ++r)
        for (std::size_t j = 0; j < arts.dim(); ++j) arts.set_value(flagged[r], j, fresh.at(r, j));
    }
    if (flagged.size() <= cfg.max_rem) break;
  }
  return arts;
}

inline Dataset filter_classifier_loop(const Dataset& data, const Dataset& arts, const GeneratorConfig& generator,
                                      const ClassifierSpec& spec, const FilterConfig& cfg, RngStream rng,
                                      ClassifierLoopTrace* trace = nullptr) {
  std::uint64_t batch = 0;
  auto supply = [&](std::size_t count) {
    GeneratorConfig g = generator;
    g.n_art = count;
    return generate(data, g, rng.split(batch++));
  };
  auto train = [&](const Dataset& genuine, const Dataset& a) { return train_classifier(spec, genuine, a); };
  return filter_classifier_loop(data, arts, train, supply, cfg, trace);
}

// Probability of keeping an instance whose committee margin is `margin`.
inline double committee_keep_probability(double margin, std::size_t m) {
  require(m >= 1, "committee size must be positive");
  return normal_sf(margin / std::sqrt(static_cast<double>(m)));
}

inline Dataset subsample(const Dataset& d, double fraction, RngStream& rng) {
  auto k = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(d.size())));
  k = std::clamp<std::size_t>(k, std::min<std::size_t>(d.size(), 2), d.size());
  const auto idx = rng.sample_without_replacement(d.size(), k);
  return d.select(idx);
}

/**
 * Query-by-committee filter. m members are trained in turn, each on a random
 * subsample of the genuine and the artificial instances; an instance is kept
 * with probability 1 - Phi(margin / sqrt(m)), margin = sum of
 * (P(outlier) - P(normal)) over the members.
 */
template <typename TrainFn>
  requires std::invocable<TrainFn&, const Dataset&, const Dataset&>
Dataset filter_query_by_committee(const Dataset& data, const Dataset& arts, TrainFn&& train, const FilterConfig& cfg,
                                  RngStream rng) {
  require(cfg.committee_size >= 2, "committee needs at least two members");
  std::vector<double> margin(arts.size(), 0.0);
  for (std::size_t c = 0; c < cfg.committee_size; ++c) {
    auto sub_rng = rng.split(c);
    const Dataset g = subsample(data, cfg.subsample_fraction, sub_rng);
    const Dataset a = subsample(arts, cfg.subsample_fraction, sub_rng);
    const auto model = train(g, a);
    for (std::size_t i = 0; i < arts.size(); ++i) {
      const double p_out = model.outlier_probability(arts.row(i));
      margin[i] += p_out - (1.0 - p_out);
    }
  }
  auto keep_rng = rng.split("keep");
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < arts.size(); ++i)
    if (keep_rng.bernoulli(committee_keep_probability(margin[i], cfg.committee_size))) keep.push_back(i);
  return arts.select(keep);
}

inline Dataset filter_query_by_committee(const Dataset& data, const Dataset& arts, const ClassifierSpec& spec,
                                         const FilterConfig& cfg, RngStream rng) {
  auto train = [&](const Dataset& genuine, const Dataset& a) { return train_classifier(spec, genuine, a); };
  return filter_query_by_committee(data, arts, train, cfg, rng);
}

/**
 * Thinning: while more than target_count instances remain, take the closest
 * pair and drop the member nearer to its own nearest neighbor. Ties go to the
 * lower row index, both for the pair and for the member removed.
 */
inline Dataset filter_thinning(const Dataset& arts, std::size_t target_count) {
  require(target_count >= 1, "thinning target must be positive");
  require(target_count <= arts.size(), "thinning target exceeds the number of instances");
  const std::size_t n = arts.size();
  std::vector<bool> alive(n, true);
  std::vector<double> nn_d2(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> nn(n, n);

  auto refresh = [&](std::size_t i) {
    nn_d2[i] = std::numeric_limits<double>::infinity();
    nn[i] = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || !alive[j]) continue;
      const double d = squared_distance(arts.row(i), arts.row(j));
      if (d < nn_d2[i]) {
        nn_d2[i] = d;
        nn[i] = j;
      }
    }
  };
  for (std::size_t i = 0; i < n; ++i) refresh(i);

  for (std::size_t remaining = n; remaining > target_count; --remaining) {
    std::size_t i = n;
    for (std::size_t t = 0; t < n; ++t)
      if (alive[t] && (i == n || nn_d2[t] < nn_d2[i])) i = t;
    const std::size_t j = nn[i];
    std::size_t victim;
    if (nn_d2[i] < nn_d2[j]) victim = i;
    else if (nn_d2[j] < nn_d2[i]) victim = j;
    else victim = std::min(i, j);
    alive[victim] = false;
    for (std::size_t t = 0; t < n; ++t)
      if (alive[t] && nn[t] == victim) refresh(t);
  }
  std::vector<std::size_t> keep;
  for (std::size_t t = 0; t < n; ++t)
    if (alive[t]) keep.push_back(t);
  return arts.select(keep);
}

// Genuine instances strictly closer than dmax.
inline std::size_t count_within(const Dataset& data, std::span<const double> x, double dmax) {
  std::size_t c = 0;
  const double r2 = dmax * dmax;
  for (std::size_t i = 0; i < data.size(); ++i) c += squared_distance(data.row(i), x) < r2;
  return c;
}

// (k, dmax) rule: an artificial instance is an outlier iff at most k genuine
// instances lie within dmax.
inline Dataset filter_unsupervised_kdmax(const Dataset& data, const Dataset& arts, const FilterConfig& cfg) {
  require(cfg.dmax > 0.0, "dmax must be positive");
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < arts.size(); ++i) {
    const bool outlier = count_within(data, arts.row(i), cfg.dmax) <= cfg.k;
    if (outlier == (cfg.keep_mode == KeepMode::keep_outlier)) keep.push_back(i);
  }
  return arts.select(keep);
}

inline Dataset filter_distance_threshold(const Dataset& normals, const Dataset& arts, double epsilon) {
  require(epsilon >= 0.0, "epsilon must be nonnegative");
  if (epsilon == 0.0) return arts;
  require(!normals.empty(), "distance filter needs genuine instances");
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < arts.size(); ++i)
    if (nearest_distance(normals, arts.row(i)) >= epsilon) keep.push_back(i);
  return arts.select(keep);
}

}  // namespace artout
