#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "artout/core/dataset.hpp"
#include "artout/core/error.hpp"

namespace artout {

struct Neighbor {
  std::size_t index;
  double distance;
  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/**
 * Brute-force Euclidean k-nearest neighbors of `query` among the rows of
 * `data`, ascending by distance with ties going to the lower row index.
 * `exclude` removes one row from consideration, which is how a data row asks
 * for its neighbors without finding itself.
 */
inline std::vector<Neighbor> k_nearest_neighbors(const Dataset& data, std::span<const double> query,
                                                 std::size_t k,
                                                 std::optional<std::size_t> exclude = std::nullopt) {
  require(k >= 1, "k must be positive");
  require(query.size() == data.dim(), "query dimensionality does not match the data");
  const std::size_t eligible = data.size() - (exclude && *exclude < data.size() ? 1 : 0);
  if (k > eligible) throw Error("insufficient neighbors: k=" + std::to_string(k) + " but only " +
                                std::to_string(eligible) + " eligible rows");

  std::vector<std::pair<double, std::size_t>> d;
  d.reserve(eligible);
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (exclude && *exclude == i) continue;
    d.emplace_back(squared_distance(query, data.row(i)), i);
  }
  std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k), d.end());

  std::vector<Neighbor> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = {d[i].second, std::sqrt(d[i].first)};
  return out;
}

inline std::vector<Neighbor> k_nearest_neighbors_of_row(const Dataset& data, std::size_t row,
                                                        std::size_t k) {
  return k_nearest_neighbors(data, data.row(row), k, row);
}

// Distance from `query` to its closest row in `data`.
inline double nearest_distance(const Dataset& data, std::span<const double> query) {
  require(!data.empty(), "nearest distance to an empty dataset");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < data.size(); ++i)
    best = std::min(best, squared_distance(query, data.row(i)));
  return std::sqrt(best);
}

}  // namespace artout
