#pragma once

#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "artout/core.hpp"
#include "artout/csv.hpp"

namespace artout {

inline Dataset load_csv(const std::string& path, const std::string& label_column,
                        const std::string& outlier_value) {
  return csv::load(path, label_column, outlier_value);
}

struct Normalized {
  Dataset data;
  std::vector<AttributeRange> bounds;  // per attribute, before scaling
};

/**
 * Affine map of every attribute onto [0, 1]. Constant attributes map to 0.
 * The column minimum lands exactly on 0 and the maximum exactly on 1, so
 * applying the map twice changes nothing.
 */
inline Normalized normalize_unit_box(const Dataset& data) {
  require(!data.empty(), "cannot normalize an empty dataset");
  auto bounds = attribute_ranges(data);
  Dataset out = data.empty_like();
  out.reserve(data.size());
  std::vector<double> row(data.dim());
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t j = 0; j < data.dim(); ++j) {
      const double w = bounds[j].width();
      row[j] = w > 0.0 ? (data.at(i, j) - bounds[j].min) / w : 0.0;
    }
    out.add_row(row, data.label(i), data.provenance(i));
  }
  return {std::move(out), std::move(bounds)};
}

// Keeps the first occurrence of every distinct value vector; labels are not
// part of the comparison.
inline Dataset remove_duplicates(const Dataset& data) {
  std::set<std::vector<double>> seen;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (seen.insert(data.instance(i)).second) keep.push_back(i);
  }
  return data.select(keep);
}

/**
 * Subsamples to `cap` rows while keeping the outlier/normal ratio: the
 * outlier count is round(n_out * cap / n). Selected rows keep their
 * original order.
 */
inline Dataset downsample_preserving_ratio(const Dataset& data, std::size_t cap, RngStream rng) {
  require(cap >= 2, "downsampling cap must be at least 2");
  if (data.size() <= cap) return data;

  std::vector<std::size_t> outs;
  std::vector<std::size_t> norms;
  for (std::size_t i = 0; i < data.size(); ++i)
    (data.label(i) == Label::outlier ? outs : norms).push_back(i);

  auto target_out = static_cast<std::size_t>(
      std::llround(static_cast<double>(outs.size()) * static_cast<double>(cap) /
                   static_cast<double>(data.size())));
  target_out = std::min(target_out, outs.size());
  std::size_t target_norm = cap - target_out;
  if (target_norm > norms.size()) {
    target_norm = norms.size();
    target_out = cap - target_norm;
  }

  std::vector<std::size_t> keep;
  for (std::size_t k : rng.sample_without_replacement(outs.size(), target_out)) keep.push_back(outs[k]);
  for (std::size_t k : rng.sample_without_replacement(norms.size(), target_norm)) keep.push_back(norms[k]);
  std::sort(keep.begin(), keep.end());
  return data.select(keep);
}

struct TrainTestSplit {
  Dataset train;
  Dataset test;
};

// |train| = round(fraction * n), clamped so both halves are nonempty.
inline TrainTestSplit split_train_test(const Dataset& norms, double train_fraction, RngStream rng) {
  require(norms.size() >= 2, "train/test split needs at least two instances");
  require(train_fraction > 0.0 && train_fraction < 1.0, "train fraction must lie in (0,1)");
  const std::size_t n = norms.size();
  auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
  n_train = std::clamp<std::size_t>(n_train, 1, n - 1);

  const auto train_idx = rng.sample_without_replacement(n, n_train);
  std::vector<std::size_t> test_idx;
  std::size_t t = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (t < train_idx.size() && train_idx[t] == i) {
      ++t;
    } else {
      test_idx.push_back(i);
    }
  }
  return {norms.select(train_idx), norms.select(test_idx)};
}

struct SplitResult {
  Dataset train_norms;
  Dataset test_norms;
  Dataset outs;
};

// Separates genuine outliers, then splits the normal instances.
inline SplitResult split_genuine(const Dataset& data, double train_fraction, RngStream rng) {
  auto split = split_train_test(data.with_label(Label::normal), train_fraction, rng);
  return {std::move(split.train), std::move(split.test), data.with_label(Label::outlier)};
}

struct PreprocessOptions {
  std::size_t cap = 1000;
};

// load -> dedup -> downsample -> normalize.
inline Dataset preprocess(const Dataset& raw, const PreprocessOptions& opts, RngStream rng) {
  return normalize_unit_box(downsample_preserving_ratio(remove_duplicates(raw), opts.cap, rng)).data;
}

}  // namespace artout
