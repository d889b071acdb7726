#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "artout/core.hpp"
#include "artout/generators/config.hpp"
#include "artout/generators/sampling.hpp"

// Approaches that recombine observed attribute values.

namespace artout {

// Each attribute independently resampled from its observed values.
inline Dataset gen_margin_sample(const Dataset& data, const GeneratorConfig& cfg, RngStream rng) {
  require(!data.empty(), "marginSample needs at least one genuine instance");
  const std::size_t n_art = cfg.resolved_n_art(data.size());
  auto out = detail::artificial_like(data, n_art);
  std::vector<double> x(data.dim());
  for (std::size_t i = 0; i < n_art; ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = data.at(rng.index(data.size()), j);
    detail::add_artificial(out, x);
  }
  return out;
}

/// Bookkeeping for distBased: one entry per (run, attribute, unique value).
struct DistBasedTrace {
  std::size_t run;
  std::size_t attribute;
  double value;
  std::size_t attempted;  // countFreq - countVal + 1
  std::size_t skipped;    // attempts whose replacement pool was empty
};

struct GenerationLog {
  std::vector<DistBasedTrace> dist_based;
  std::size_t skipped() const {
    std::size_t s = 0;
    for (const auto& t : dist_based) s += t.skipped;
    return s;
  }
};

/**
 * For every attribute and each of its unique values `val`, draws
 * countFreq - countVal + 1 random genuine rows (countFreq: count of the
 * most frequent value) and replaces the attribute with a random other
 * unique value, excluding both `val` and the row's own value. Attempts with
 * an empty pool are skipped and logged. Repeated `dist_based_runs` times.
 */
inline Dataset gen_dist_based(const Dataset& data, const GeneratorConfig& cfg, RngStream rng,
                              GenerationLog* log = nullptr) {
  require(!data.empty(), "distBased needs at least one genuine instance");
  require(cfg.dist_based_runs >= 1, "distBased needs at least one run");
  auto out = detail::artificial_like(data);
  const std::size_t d = data.dim();

  std::vector<std::vector<double>> uniq(d);
  std::vector<std::vector<std::size_t>> counts(d);
  std::vector<std::size_t> count_freq(d, 0);
  for (std::size_t j = 0; j < d; ++j) {
    std::map<double, std::size_t> freq;
    for (std::size_t i = 0; i < data.size(); ++i) ++freq[data.at(i, j)];
    for (const auto& [v, c] : freq) {
      uniq[j].push_back(v);
      counts[j].push_back(c);
      count_freq[j] = std::max(count_freq[j], c);
    }
  }

  std::vector<double> x(d);
  for (std::size_t run = 0; run < cfg.dist_based_runs; ++run) {
    for (std::size_t j = 0; j < d; ++j) {
      const auto& u = uniq[j];
      for (std::size_t vi = 0; vi < u.size(); ++vi) {
        DistBasedTrace trace{run, j, u[vi], count_freq[j] - counts[j][vi] + 1, 0};
        for (std::size_t rep = counts[j][vi]; rep <= count_freq[j]; ++rep) {
          const std::size_t src = rng.index(data.size());
          auto row = data.row(src);
          const std::size_t own = static_cast<std::size_t>(
              std::lower_bound(u.begin(), u.end(), row[j]) - u.begin());
          std::size_t lo = std::min(vi, own);
          std::size_t hi = std::max(vi, own);
          const std::size_t pool = u.size() - (lo == hi ? 1 : 2);
          if (pool == 0) {
            ++trace.skipped;
            continue;
          }
          // Uniform pick among unique indices with lo and hi left out.
          std::size_t pick = rng.index(pool);
          if (pick >= lo) ++pick;
          if (lo != hi && pick >= hi) ++pick;
          std::copy(row.begin(), row.end(), x.begin());
          x[j] = u[pick];
          detail::add_artificial(out, x);
        }
        if (log) log->dist_based.push_back(trace);
      }
    }
  }
  return out;
}

/**
 * A random genuine row with two distinct random attributes (one when d = 2)
 * set to that attribute's minimum or maximum by fair coin.
 */
inline Dataset gen_bound_val(const Dataset& data, const GeneratorConfig& cfg, RngStream rng) {
  require(!data.empty(), "boundVal needs at least one genuine instance");
  const std::size_t d = data.dim();
  if (d < 2) throw Error("boundVal needs at least two attributes");
  const auto range = attribute_ranges(data);
  const std::size_t n_art = cfg.resolved_n_art(data.size());
  auto out = detail::artificial_like(data, n_art);
  std::vector<double> x(d);
  for (std::size_t i = 0; i < n_art; ++i) {
    const std::size_t a = rng.index(d);
    std::size_t b = a;
    if (d > 2) {
      b = rng.index(d - 1);
      if (b >= a) ++b;
    }
    const double new_a = rng.bernoulli(0.5) ? range[a].max : range[a].min;
    const double new_b = rng.bernoulli(0.5) ? range[b].max : range[b].min;
    auto row = data.row(rng.index(data.size()));
    std::copy(row.begin(), row.end(), x.begin());
    x[a] = new_a;
    if (b != a) x[b] = new_b;
    detail::add_artificial(out, x);
  }
  return out;
}

}  // namespace artout
