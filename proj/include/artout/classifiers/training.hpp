#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "artout/classifiers/model.hpp"
#include "artout/core.hpp"

namespace artout {

// Squared pairwise distances between the rows of `data`.
inline Eigen::MatrixXd squared_distance_matrix(const Dataset& data) {
  const auto n = static_cast<Eigen::Index>(data.size());
  Eigen::MatrixXd d2(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d2(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = squared_distance(data.row(static_cast<std::size_t>(i)), data.row(static_cast<std::size_t>(j)));
      d2(i, j) = v;
      d2(j, i) = v;
    }
  }
  return d2;
}

// Leave-one-out log Parzen scores: row i scored against the other rows.
inline std::vector<double> leave_one_out_log_scores(const Eigen::MatrixXd& d2, double s) {
  const auto n = d2.rows();
  std::vector<double> out(static_cast<std::size_t>(n));
  std::vector<double> e;
  e.reserve(static_cast<std::size_t>(n));
  const double denom = 2.0 * s * s;
  const double log_m = std::log(static_cast<double>(n - 1));
  for (Eigen::Index i = 0; i < n; ++i) {
    e.clear();
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i) e.push_back(-d2(i, j) / denom);
    out[static_cast<std::size_t>(i)] = log_sum_exp(e) - log_m;
  }
  return out;
}

// Lower empirical nu-quantile: at most floor(nu * n) scores fall strictly below.
inline double nu_quantile(std::vector<double> scores, double nu) {
  std::sort(scores.begin(), scores.end());
  auto idx = static_cast<std::size_t>(std::floor(nu * static_cast<double>(scores.size())));
  idx = std::min(idx, scores.size() - 1);
  return scores[idx];
}

/**
 * Parzen one-class model. Training instances are scored leave-one-out and
 * the threshold is the nu-quantile of those scores, so at most a fraction nu
 * of the training normals falls below it.
 */
inline TrainedModel train_one_class(const Dataset& train_norms, double nu, double s) {
  require(train_norms.size() >= 2, "one-class training needs at least two instances");
  require(nu > 0.0 && nu <= 1.0, "nu must lie in (0,1]");
  require(s > 0.0, "kernel width must be positive");
  const auto loo = leave_one_out_log_scores(squared_distance_matrix(train_norms), s);
  return TrainedModel::one_class(train_norms, s, nu, nu_quantile(loo, nu));
}

inline Eigen::MatrixXd gaussian_gram(const Eigen::MatrixXd& d2, double s) {
  return (-d2.array() / (2.0 * s * s)).exp().matrix();
}

struct LabeledUnion {
  Dataset rows;
  Eigen::VectorXd y;  // +1 genuine, -1 artificial
};

inline LabeledUnion label_union(const Dataset& genuine, const Dataset& arts) {
  LabeledUnion u{genuine, Eigen::VectorXd(static_cast<Eigen::Index>(genuine.size() + arts.size()))};
  u.rows.append(arts);
  for (std::size_t i = 0; i < genuine.size(); ++i) u.y(static_cast<Eigen::Index>(i)) = 1.0;
  for (std::size_t i = 0; i < arts.size(); ++i) u.y(static_cast<Eigen::Index>(genuine.size() + i)) = -1.0;
  return u;
}

/**
 * Kernel regularized least squares on +1 (genuine) / -1 (artificial):
 * solves (K + lambda n I) c = y by Cholesky factorization.
 */
inline TrainedModel train_binary(const Dataset& train_norms, const Dataset& arts, double lambda, double s,
                                 ClassifierKind kind = ClassifierKind::binary) {
  require(!train_norms.empty() && !arts.empty(), "binary training needs both classes");
  require(lambda > 0.0, "lambda must be positive");
  require(s > 0.0, "kernel width must be positive");
  auto u = label_union(train_norms, arts);
  const auto n = static_cast<double>(u.rows.size());
  Eigen::MatrixXd a = gaussian_gram(squared_distance_matrix(u.rows), s);
  a.diagonal().array() += lambda * n;
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) throw Error("kernel system is not positive definite");
  const Eigen::VectorXd c = llt.solve(u.y);
  return TrainedModel::kernel_ridge(kind, std::move(u.rows), std::vector<double>(c.data(), c.data() + c.size()),
                                    s, lambda);
}

inline double default_kernel_width(std::size_t dim) { return 1.0 / static_cast<double>(std::max<std::size_t>(dim, 1)); }

}  // namespace artout
