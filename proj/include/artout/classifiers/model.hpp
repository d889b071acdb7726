#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "artout/core.hpp"

namespace artout {

enum class ClassifierKind { binary, binary_grid, one_class };

inline std::string_view to_string(ClassifierKind k) {
  switch (k) {
    case ClassifierKind::binary: return "binary";
    case ClassifierKind::binary_grid: return "binaryGrid";
    case ClassifierKind::one_class: return "one-class";
  }
  return "?";
}

inline ClassifierKind parse_classifier_kind(std::string_view s) {
  if (s == "binary") return ClassifierKind::binary;
  if (s == "binaryGrid") return ClassifierKind::binary_grid;
  if (s == "one-class") return ClassifierKind::one_class;
  throw Error("unknown classifier kind '" + std::string(s) + "'");
}

struct TuningGrids {
  std::vector<double> nu_range{0.001, 0.05, 0.1};
  std::vector<double> s_range{1e-4, 1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3, 1e4};
  std::vector<double> lambda_range{0.01, 0.1, 1.0, 10.0};
};

struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::binary;
  std::optional<double> kernel_width;  // s; binary defaults to 1/d
  double lambda = 1.0;
  double nu = 0.1;
  TuningGrids grids;
};

// Gaussian kernel exp(-|a - b|^2 / (2 s^2)).
inline double gaussian_kernel(std::span<const double> a, std::span<const double> b, double s) {
  return std::exp(-squared_distance(a, b) / (2.0 * s * s));
}

// log(sum_i exp(v_i)) without overflow; -inf for an empty input.
inline double log_sum_exp(std::span<const double> v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

/**
 * Immutable kernel decision function. decision(x) > 0 favors normal:
 *  - one-class: log Parzen density minus the log threshold;
 *  - binary: kernel ridge output fitted to +1 genuine / -1 artificial.
 * An instance is an outlier iff decision(x) < 0.
 */
class TrainedModel {
 public:
  static TrainedModel one_class(Dataset support, double s, double nu, double log_threshold) {
    TrainedModel m;
    m.kind_ = ClassifierKind::one_class;
    m.support_ = std::move(support);
    m.s_ = s;
    m.nu_ = nu;
    m.threshold_ = log_threshold;
    return m;
  }

  static TrainedModel kernel_ridge(ClassifierKind kind, Dataset support, std::vector<double> coef,
                                   double s, double lambda) {
    TrainedModel m;
    m.kind_ = kind;
    m.support_ = std::move(support);
    m.coef_ = std::move(coef);
    m.s_ = s;
    m.lambda_ = lambda;
    return m;
  }

  ClassifierKind kind() const { return kind_; }
  const Dataset& support() const { return support_; }
  const std::vector<double>& coefficients() const { return coef_; }
  double kernel_width() const { return s_; }
  double lambda() const { return lambda_; }
  double nu() const { return nu_; }
  double threshold() const { return threshold_; }

  // Mean-kernel log density; only meaningful for one-class models.
  double log_score(std::span<const double> x) const {
    std::vector<double> e(support_.size());
    const double denom = 2.0 * s_ * s_;
    for (std::size_t i = 0; i < support_.size(); ++i) e[i] = -squared_distance(x, support_.row(i)) / denom;
    return log_sum_exp(e) - std::log(static_cast<double>(support_.size()));
  }

  double decision(std::span<const double> x) const {
    if (kind_ == ClassifierKind::one_class) return log_score(x) - threshold_;
    double f = 0.0;
    for (std::size_t i = 0; i < support_.size(); ++i) f += coef_[i] * gaussian_kernel(x, support_.row(i), s_);
    return f;
  }

  Label predict(std::span<const double> x) const {
    return decision(x) < 0.0 ? Label::outlier : Label::normal;
  }

  // Logistic map of the decision value.
  double outlier_probability(std::span<const double> x) const {
    return score_to_probability(decision(x));
  }

  static double score_to_probability(double signed_score) {
    if (signed_score >= 0.0) {
      const double e = std::exp(-signed_score);
      return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(signed_score));
  }

 private:
  TrainedModel() = default;

  ClassifierKind kind_ = ClassifierKind::binary;
  Dataset support_;
  std::vector<double> coef_;
  double s_ = 1.0;
  double lambda_ = 0.0;
  double nu_ = 0.0;
  double threshold_ = 0.0;
};

}  // namespace artout
