#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Eigenvalues>

#include "artout/classifiers/model.hpp"
#include "artout/classifiers/training.hpp"

namespace artout {

struct GridEvaluation {
  double capacity;  // nu for one-class, lambda for binaryGrid
  double s;
  double err_art;
  double err_genu;
  double err;
};

struct TuningResult {
  TrainedModel model;
  double capacity;
  double s;
  double err;
  std::vector<GridEvaluation> evaluations;  // grid order
};

namespace detail {

inline TuningResult pick_best(std::vector<GridEvaluation> evals, auto&& retrain) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < evals.size(); ++i)
    if (evals[i].err < evals[best].err) best = i;
  const auto& b = evals[best];
  return {retrain(b.capacity, b.s), b.capacity, b.s, b.err, std::move(evals)};
}

// One-class: err_genu is the leave-one-out flag rate of the training normals,
// err_art the fraction of artificial outliers accepted as normal.
inline TuningResult tune_one_class(const Dataset& train_norms, const Dataset& arts, const TuningGrids& grids) {
  require(train_norms.size() >= 2, "one-class tuning needs at least two normals");
  require(!arts.empty(), "tuning needs artificial outliers");
  const auto d2 = squared_distance_matrix(train_norms);
  std::vector<GridEvaluation> evals(grids.nu_range.size() * grids.s_range.size());

  for (std::size_t si = 0; si < grids.s_range.size(); ++si) {
    const double s = grids.s_range[si];
    const auto loo = leave_one_out_log_scores(d2, s);
    // Threshold-free part of the model, reused for every nu.
    const auto probe = TrainedModel::one_class(train_norms, s, 1.0, 0.0);
    std::vector<double> art_scores(arts.size());
    for (std::size_t i = 0; i < arts.size(); ++i) art_scores[i] = probe.log_score(arts.row(i));

    for (std::size_t ni = 0; ni < grids.nu_range.size(); ++ni) {
      const double nu = grids.nu_range[ni];
      const double thr = nu_quantile(loo, nu);
      std::size_t genu_wrong = 0;
      for (double v : loo) genu_wrong += v < thr;
      std::size_t art_wrong = 0;
      for (double v : art_scores) art_wrong += !(v < thr);
      const double ea = static_cast<double>(art_wrong) / static_cast<double>(arts.size());
      const double eg = static_cast<double>(genu_wrong) / static_cast<double>(loo.size());
      evals[ni * grids.s_range.size() + si] = {nu, s, ea, eg, 0.5 * ea + 0.5 * eg};
    }
  }
  return pick_best(std::move(evals), [&](double nu, double s) { return train_one_class(train_norms, nu, s); });
}

/**
 * binaryGrid: kernel ridge errors from closed-form leave-one-out predictions
 * f_-i(x_i) = y_i - c_i / [(K + lambda n I)^-1]_ii, one eigendecomposition of
 * K per kernel width.
 */
inline TuningResult tune_binary(const Dataset& train_norms, const Dataset& arts, const TuningGrids& grids) {
  require(!train_norms.empty() && !arts.empty(), "binary tuning needs both classes");
  const auto u = label_union(train_norms, arts);
  const auto d2 = squared_distance_matrix(u.rows);
  const auto n = static_cast<double>(u.rows.size());
  const Eigen::Index m = d2.rows();
  std::vector<GridEvaluation> evals(grids.lambda_range.size() * grids.s_range.size());

  for (std::size_t si = 0; si < grids.s_range.size(); ++si) {
    const double s = grids.s_range[si];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gaussian_gram(d2, s));
    const Eigen::MatrixXd& v = eig.eigenvectors();
    const Eigen::VectorXd vty = v.transpose() * u.y;
    const Eigen::MatrixXd v2 = v.array().square().matrix();

    for (std::size_t li = 0; li < grids.lambda_range.size(); ++li) {
      const double lambda = grids.lambda_range[li];
      const Eigen::VectorXd inv =
          (eig.eigenvalues().array().max(0.0) + lambda * n).inverse().matrix();
      const Eigen::VectorXd c = v * inv.cwiseProduct(vty);
      const Eigen::VectorXd g = v2 * inv;
      std::size_t genu_wrong = 0;
      std::size_t art_wrong = 0;
      for (Eigen::Index i = 0; i < m; ++i) {
        const double f_loo = u.y(i) - c(i) / g(i);
        if (u.y(i) > 0.0) {
          genu_wrong += f_loo < 0.0;
        } else {
          art_wrong += !(f_loo < 0.0);
        }
      }
      const double ea = static_cast<double>(art_wrong) / static_cast<double>(arts.size());
      const double eg = static_cast<double>(genu_wrong) / static_cast<double>(train_norms.size());
      evals[li * grids.s_range.size() + si] = {lambda, s, ea, eg, 0.5 * ea + 0.5 * eg};
    }
  }
  return pick_best(std::move(evals), [&](double lambda, double s) {
    return train_binary(train_norms, arts, lambda, s, ClassifierKind::binary_grid);
  });
}

}  // namespace detail

/**
 * Exhaustive grid search minimizing Err = 0.5 Err_art + 0.5 Err_genu. The
 * grid is walked capacity-major (nu or lambda outer, s inner); ties keep the
 * earlier combination.
 */
inline TuningResult tune_grid(const Dataset& train_norms, const Dataset& arts, ClassifierKind kind,
                              const TuningGrids& grids = {}) {
  require(!grids.s_range.empty(), "empty kernel-width grid");
  switch (kind) {
    case ClassifierKind::one_class:
      require(!grids.nu_range.empty(), "empty nu grid");
      return detail::tune_one_class(train_norms, arts, grids);
    case ClassifierKind::binary_grid:
    case ClassifierKind::binary:
      require(!grids.lambda_range.empty(), "empty lambda grid");
      return detail::tune_binary(train_norms, arts, grids);
  }
  throw Error("unhandled classifier kind");
}

// What the benchmark trains for each classifier kind.
inline TrainedModel train_classifier(const ClassifierSpec& spec, const Dataset& train_norms, const Dataset& arts) {
  switch (spec.kind) {
    case ClassifierKind::binary:
      return train_binary(train_norms, arts, spec.lambda,
                          spec.kernel_width.value_or(default_kernel_width(train_norms.dim())));
    case ClassifierKind::binary_grid:
    case ClassifierKind::one_class:
      return tune_grid(train_norms, arts, spec.kind, spec.grids).model;
  }
  throw Error("unhandled classifier kind");
}

}  // namespace artout
