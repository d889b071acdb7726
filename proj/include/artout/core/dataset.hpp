#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "artout/core/error.hpp"

namespace artout {

enum class Label : std::uint8_t { normal, outlier };
enum class Provenance : std::uint8_t { genuine, artificial };

inline std::string_view to_string(Label l) {
  return l == Label::normal ? "normal" : "outlier";
}

inline std::string_view to_string(Provenance p) {
  return p == Provenance::genuine ? "genuine" : "artificial";
}

using Instance = std::vector<double>;

/**
 * Row-major n x d table of finite reals with per-row class label and
 * provenance. Rows are stored contiguously; row(i) hands out a view.
 */
class Dataset {
 public:
  Dataset() = default;

  explicit Dataset(std::size_t dim) : dim_(dim) {
    names_.reserve(dim);
    for (std::size_t j = 0; j < dim; ++j) names_.push_back("x" + std::to_string(j + 1));
  }

  explicit Dataset(std::vector<std::string> attribute_names)
      : dim_(attribute_names.size()), names_(std::move(attribute_names)) {}

  // Same attribute names, no rows.
  Dataset empty_like() const { return Dataset(names_); }

  std::size_t size() const { return labels_.size(); }
  std::size_t dim() const { return dim_; }
  bool empty() const { return labels_.empty(); }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * dim_, dim_};
  }
  Instance instance(std::size_t i) const {
    auto r = row(i);
    return {r.begin(), r.end()};
  }
  double at(std::size_t i, std::size_t j) const { return values_[i * dim_ + j]; }

  Label label(std::size_t i) const { return labels_[i]; }
  Provenance provenance(std::size_t i) const { return provenance_[i]; }
  const std::vector<Label>& labels() const { return labels_; }
  const std::vector<Provenance>& provenances() const { return provenance_; }
  const std::vector<std::string>& attribute_names() const { return names_; }
  std::span<const double> values() const { return values_; }

  void reserve(std::size_t rows) {
    values_.reserve(rows * dim_);
    labels_.reserve(rows);
    provenance_.reserve(rows);
  }

  void add_row(std::span<const double> values, Label label = Label::normal,
               Provenance provenance = Provenance::genuine) {
    if (values.size() != dim_) {
      throw Error("row has " + std::to_string(values.size()) + " values, dataset has " +
                  std::to_string(dim_) + " attributes");
    }
    for (double v : values) {
      if (!std::isfinite(v)) throw DomainError("non-finite attribute value in row " +
                                               std::to_string(size()));
    }
    values_.insert(values_.end(), values.begin(), values.end());
    labels_.push_back(label);
    provenance_.push_back(provenance);
  }

  void add_row(std::initializer_list<double> values, Label label = Label::normal,
               Provenance provenance = Provenance::genuine) {
    add_row(std::span<const double>(values.begin(), values.size()), label, provenance);
  }

  void set_value(std::size_t i, std::size_t j, double v) {
    if (!std::isfinite(v)) throw DomainError("non-finite attribute value");
    values_[i * dim_ + j] = v;
  }

  void set_label(std::size_t i, Label l) { labels_[i] = l; }

  void append(const Dataset& other) {
    if (other.dim_ != dim_) throw Error("cannot append datasets of different dimensionality");
    values_.insert(values_.end(), other.values_.begin(), other.values_.end());
    labels_.insert(labels_.end(), other.labels_.begin(), other.labels_.end());
    provenance_.insert(provenance_.end(), other.provenance_.begin(), other.provenance_.end());
  }

  Dataset select(std::span<const std::size_t> indices) const {
    Dataset out(names_);
    out.reserve(indices.size());
    for (std::size_t i : indices) out.add_row(row(i), labels_[i], provenance_[i]);
    return out;
  }

  Dataset with_label(Label l) const {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < size(); ++i)
      if (labels_[i] == l) idx.push_back(i);
    return select(idx);
  }

  std::size_t count(Label l) const {
    return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), l));
  }

  std::vector<double> column(std::size_t j) const {
    std::vector<double> c(size());
    for (std::size_t i = 0; i < size(); ++i) c[i] = at(i, j);
    return c;
  }

  // Relabels every row; used when a generator's output is tagged as
  // artificial outliers.
  void mark_all(Label l, Provenance p) {
    std::fill(labels_.begin(), labels_.end(), l);
    std::fill(provenance_.begin(), provenance_.end(), p);
  }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> values_;
  std::vector<std::string> names_;
  std::vector<Label> labels_;
  std::vector<Provenance> provenance_;
};

/// Enclosing hypersphere.
struct Ball {
  Instance center;
  double radius = 0.0;
};

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return s;
}

inline double distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_distance(a, b));
}

struct AttributeRange {
  double min = 0.0;
  double max = 0.0;
  double width() const { return max - min; }
};

inline std::vector<AttributeRange> attribute_ranges(const Dataset& data) {
  require(!data.empty(), "attribute ranges of an empty dataset");
  std::vector<AttributeRange> r(data.dim());
  for (std::size_t j = 0; j < data.dim(); ++j) r[j] = {data.at(0, j), data.at(0, j)};
  for (std::size_t i = 1; i < data.size(); ++i) {
    for (std::size_t j = 0; j < data.dim(); ++j) {
      r[j].min = std::min(r[j].min, data.at(i, j));
      r[j].max = std::max(r[j].max, data.at(i, j));
    }
  }
  return r;
}

// Per-attribute mean and sample standard deviation (n - 1 denominator).
struct AttributeMoments {
  std::vector<double> mean;
  std::vector<double> stddev;
};

inline AttributeMoments attribute_moments(const Dataset& data) {
  require(data.size() >= 2, "moment estimation needs at least two instances");
  const std::size_t n = data.size();
  AttributeMoments m{std::vector<double>(data.dim(), 0.0), std::vector<double>(data.dim(), 0.0)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < data.dim(); ++j) m.mean[j] += data.at(i, j);
  for (double& v : m.mean) v /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < data.dim(); ++j) {
      const double t = data.at(i, j) - m.mean[j];
      m.stddev[j] += t * t;
    }
  }
  for (double& v : m.stddev) v = std::sqrt(v / static_cast<double>(n - 1));
  return m;
}

}  // namespace artout
