#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "artout/classifiers.hpp"
#include "artout/generators.hpp"
#include "oracles.hpp"

using namespace artout;

namespace {

double kernel(std::span<const double> a, std::span<const double> b, double s) {
  return std::exp(-std::pow(oracle::dist(a, b), 2) / (2 * s * s));
}

// Direct dense solve of (K + lambda n I) c = y with Gaussian elimination.
std::vector<double> ridge_coefficients(const Dataset& x, const std::vector<double>& y, double lambda, double s) {
  const std::size_t n = x.size();
  std::vector<std::vector<double>> a(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = kernel(x.row(i), x.row(j), s) + (i == j ? lambda * n : 0.0);
  return oracle::solve(a, y);
}

double ridge_decision(const Dataset& x, const std::vector<double>& c, std::span<const double> q, double s) {
  double f = 0;
  for (std::size_t i = 0; i < x.size(); ++i) f += c[i] * kernel(q, x.row(i), s);
  return f;
}

Dataset shifted(const Dataset& d, double dx) {
  Dataset out(d.dim());
  for (std::size_t i = 0; i < d.size(); ++i) {
    auto r = d.instance(i);
    r[0] += dx;
    out.add_row(r, Label::outlier, Provenance::artificial);
  }
  return out;
}

}  // namespace

TEST(Kinds, NamesRoundTrip) {
  for (auto k : {ClassifierKind::binary, ClassifierKind::binary_grid, ClassifierKind::one_class})
    EXPECT_EQ(parse_classifier_kind(to_string(k)), k);
  EXPECT_THROW(parse_classifier_kind("svm"), Error);
}

TEST(Binary, MatchesDenseSolveOracle) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto norms = oracle::gaussian_blob(80, 3, seed, 0.3);
    const auto arts = oracle::random_dataset(70, 3, seed + 10, -1.5, 1.5);
    const double lambda = 0.1, s = 0.5;
    const auto model = train_binary(norms, arts, lambda, s);

    Dataset all = norms;
    all.append(arts);
    std::vector<double> y(norms.size(), 1.0);
    y.resize(all.size(), -1.0);
    const auto c = ridge_coefficients(all, y, lambda, s);
    const auto q = oracle::random_dataset(40, 3, seed + 20, -2, 2);
    for (std::size_t i = 0; i < q.size(); ++i) {
      const double ref = ridge_decision(all, c, q.row(i), s);
      EXPECT_NEAR(model.decision(q.row(i)), ref, 1e-8 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST(Binary, SeparatedBlobsRecoverTrainingLabels) {
  const auto norms = oracle::gaussian_blob(60, 2, 4, 0.2);
  const auto arts = shifted(oracle::gaussian_blob(60, 2, 5, 0.2), 3.0);
  const auto model = train_binary(norms, arts, 0.01, 0.5);
  for (std::size_t i = 0; i < norms.size(); ++i) EXPECT_EQ(model.predict(norms.row(i)), Label::normal);
  for (std::size_t i = 0; i < arts.size(); ++i) EXPECT_EQ(model.predict(arts.row(i)), Label::outlier);
}

TEST(Binary, LargeLambdaShrinksDecision) {
  const auto norms = oracle::gaussian_blob(30, 2, 6);
  const auto arts = oracle::gaussian_blob(30, 2, 7);
  const auto model = train_binary(norms, arts, 1e9, 1.0);
  for (std::size_t i = 0; i < norms.size(); ++i) EXPECT_LT(std::abs(model.decision(norms.row(i))), 1e-8);
}

TEST(Binary, GramIsPositiveSemidefinite) {
  const auto x = oracle::random_dataset(60, 4, 8);
  for (double s : {1e-2, 0.3, 5.0}) {
    const Eigen::MatrixXd k = gaussian_gram(squared_distance_matrix(x), s);
    EXPECT_LT((k - k.transpose()).cwiseAbs().maxCoeff(), 1e-15);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k);
    EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-10);
  }
}

TEST(Binary, PermutationInvariant) {
  const auto norms = oracle::gaussian_blob(40, 2, 9);
  const auto arts = oracle::random_dataset(40, 2, 10, -3, 3);
  const auto m1 = train_binary(norms, arts, 0.5, 0.7);
  RngStream r(1);
  const auto pn = r.permutation(norms.size());
  const auto pa = r.permutation(arts.size());
  const auto m2 = train_binary(norms.select(pn), arts.select(pa), 0.5, 0.7);
  const auto q = oracle::random_dataset(30, 2, 11, -3, 3);
  for (std::size_t i = 0; i < q.size(); ++i) EXPECT_NEAR(m1.decision(q.row(i)), m2.decision(q.row(i)), 1e-10);
}

TEST(Binary, RequiresBothClasses) {
  const auto norms = oracle::gaussian_blob(5, 2, 1);
  EXPECT_THROW(train_binary(norms, Dataset(2), 1.0, 1.0), Error);
  EXPECT_THROW(train_binary(norms, norms, 0.0, 1.0), Error);
}

TEST(OneClass, LogScoreMatchesMeanKernel) {
  const auto norms = oracle::gaussian_blob(50, 3, 12);
  const auto m = train_one_class(norms, 0.1, 0.8);
  const auto q = oracle::random_dataset(20, 3, 13, -2, 2);
  for (std::size_t i = 0; i < q.size(); ++i) {
    double mean = 0;
    for (std::size_t j = 0; j < norms.size(); ++j) mean += kernel(q.row(i), norms.row(j), 0.8);
    mean /= static_cast<double>(norms.size());
    EXPECT_NEAR(m.log_score(q.row(i)), std::log(mean), 1e-12);
  }
}

TEST(OneClass, FlagFractionBoundedByNu) {
  TuningGrids g;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto norms = seed % 2 ? oracle::gaussian_blob(20 + 15 * seed, 2 + seed % 3, seed)
                                : oracle::random_dataset(20 + 15 * seed, 2 + seed % 3, seed);
    const double n = static_cast<double>(norms.size());
    for (double nu : g.nu_range)
      for (double s : g.s_range) {
        const auto m = train_one_class(norms, nu, s);
        std::size_t flagged = 0;
        for (std::size_t i = 0; i < norms.size(); ++i) flagged += m.predict(norms.row(i)) == Label::outlier;
        EXPECT_LE(flagged / n, nu + 1 / n) << "nu=" << nu << " s=" << s;
      }
  }
}

TEST(OneClass, FarQueryIsOutlierAndCentroidIsNormal) {
  Dataset d(2);
  for (int r = 0; r < 10; ++r) {
    d.add_row({0.0, 0.0});
    d.add_row({0.1, 0.0});
    d.add_row({0.0, 0.1});
    d.add_row({0.1, 0.1});
  }
  const auto m = train_one_class(d, 0.1, 0.1);
  const std::vector<double> far{50.0, 50.0}, centroid{0.05, 0.05};
  EXPECT_EQ(m.predict(far), Label::outlier);
  EXPECT_EQ(m.predict(centroid), Label::normal);
}

TEST(OneClass, ThresholdIsLeaveOneOutQuantile) {
  const auto norms = oracle::random_dataset(10, 2, 14);
  const auto m = train_one_class(norms, 0.25, 0.3);
  std::vector<double> loo;
  for (std::size_t i = 0; i < norms.size(); ++i) {
    double s = 0;
    for (std::size_t j = 0; j < norms.size(); ++j)
      if (j != i) s += kernel(norms.row(i), norms.row(j), 0.3);
    loo.push_back(std::log(s / 9));
  }
  std::sort(loo.begin(), loo.end());
  EXPECT_NEAR(m.threshold(), loo[2], 1e-12);  // floor(0.25 * 10)
}

TEST(Probability, LogisticMap) {
  EXPECT_DOUBLE_EQ(TrainedModel::score_to_probability(0.0), 0.5);
  EXPECT_EQ(TrainedModel::score_to_probability(1e6), 0.0);
  EXPECT_EQ(TrainedModel::score_to_probability(-1e6), 1.0);
  RngStream r(3);
  for (int i = 0; i < 200; ++i) {
    const double s = r.normal(0.0, 5.0);
    const double p = TrainedModel::score_to_probability(s);
    EXPECT_NEAR(p, 1 / (1 + std::exp(s)), 1e-15);
    // Committee margin: sum of (1 - 2p); negating every score flips its sign.
    EXPECT_NEAR((1 - 2 * p), -(1 - 2 * TrainedModel::score_to_probability(-s)), 1e-15);
  }
}

TEST(Tuning, DefaultGridSizes) {
  const auto norms = oracle::gaussian_blob(30, 2, 15);
  const auto arts = oracle::random_dataset(30, 2, 16, -4, 4);
  const auto oc = tune_grid(norms, arts, ClassifierKind::one_class);
  EXPECT_EQ(oc.evaluations.size(), 27u);
  const auto bg = tune_grid(norms, arts, ClassifierKind::binary_grid);
  EXPECT_EQ(bg.evaluations.size(), 36u);
  for (const auto& e : oc.evaluations) {
    EXPECT_GE(e.err, 0.0);
    EXPECT_LE(e.err, 1.0);
    EXPECT_DOUBLE_EQ(e.err, 0.5 * e.err_art + 0.5 * e.err_genu);
  }
  // Capacity-major order.
  EXPECT_EQ(oc.evaluations[0].capacity, 0.001);
  EXPECT_EQ(oc.evaluations[1].s, 1e-3);
  EXPECT_EQ(oc.evaluations[9].capacity, 0.05);
}

TEST(Tuning, OneClassErrMatchesHandComputation) {
  const auto norms = oracle::random_dataset(10, 2, 17);
  const auto arts = oracle::random_dataset(6, 2, 18, -1, 2);
  TuningGrids g;
  g.nu_range = {0.2};
  g.s_range = {0.3};
  const auto r = tune_grid(norms, arts, ClassifierKind::one_class, g);
  ASSERT_EQ(r.evaluations.size(), 1u);
  std::vector<double> loo;
  for (std::size_t i = 0; i < 10; ++i) {
    double s = 0;
    for (std::size_t j = 0; j < 10; ++j)
      if (j != i) s += kernel(norms.row(i), norms.row(j), 0.3);
    loo.push_back(std::log(s / 9));
  }
  auto sorted = loo;
  std::sort(sorted.begin(), sorted.end());
  const double thr = sorted[2];
  double eg = 0, ea = 0;
  for (double v : loo) eg += v < thr;
  for (std::size_t i = 0; i < arts.size(); ++i) {
    double s = 0;
    for (std::size_t j = 0; j < 10; ++j) s += kernel(arts.row(i), norms.row(j), 0.3);
    ea += !(std::log(s / 10) < thr);
  }
  EXPECT_NEAR(r.err, 0.5 * ea / 6 + 0.5 * eg / 10, 1e-15);
}

TEST(Tuning, BinaryLeaveOneOutMatchesRetraining) {
  const auto norms = oracle::gaussian_blob(12, 2, 19, 0.5);
  const auto arts = oracle::random_dataset(8, 2, 20, -2, 2);
  TuningGrids g;
  g.lambda_range = {0.05};
  g.s_range = {0.6};
  const auto r = tune_grid(norms, arts, ClassifierKind::binary_grid, g);
  Dataset all = norms;
  all.append(arts);
  std::vector<double> y(norms.size(), 1.0);
  y.resize(all.size(), -1.0);
  const double n = static_cast<double>(all.size());
  double eg = 0, ea = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    std::vector<std::size_t> keep;
    std::vector<double> yk;
    for (std::size_t j = 0; j < all.size(); ++j)
      if (j != i) keep.push_back(j), yk.push_back(y[j]);
    const auto x = all.select(keep);
    // Leave-one-out keeps the full-data regularizer lambda * n.
    const auto c = ridge_coefficients(x, yk, 0.05 * n / (n - 1), 0.6);
    const double f = ridge_decision(x, c, all.row(i), 0.6);
    if (y[i] > 0) eg += f < 0;
    else ea += !(f < 0);
  }
  EXPECT_NEAR(r.evaluations[0].err_genu, eg / 12, 1e-15);
  EXPECT_NEAR(r.evaluations[0].err_art, ea / 8, 1e-15);
}

TEST(Tuning, SelectsZeroErrWhenSeparable) {
  const auto norms = oracle::gaussian_blob(40, 2, 21, 0.1);
  const auto arts = shifted(oracle::gaussian_blob(40, 2, 22, 0.1), 5.0);
  for (auto kind : {ClassifierKind::one_class, ClassifierKind::binary_grid}) {
    const auto r = tune_grid(norms, arts, kind);
    EXPECT_EQ(r.err, 0.0) << to_string(kind);
    for (std::size_t i = 0; i < arts.size(); ++i) EXPECT_EQ(r.model.predict(arts.row(i)), Label::outlier);
  }
}

TEST(Tuning, TiesKeepFirstGridPosition) {
  const auto norms = oracle::gaussian_blob(10, 2, 23, 0.1);
  const auto arts = shifted(oracle::gaussian_blob(10, 2, 24, 0.1), 20.0);
  TuningGrids g;
  g.nu_range = {0.01, 0.05};  // floor(nu * 10) = 0: nothing flagged
  g.s_range = {0.5, 1.0, 2.0};
  const auto r = tune_grid(norms, arts, ClassifierKind::one_class, g);
  for (const auto& e : r.evaluations) ASSERT_EQ(e.err, 0.0);
  EXPECT_EQ(r.capacity, 0.01);
  EXPECT_EQ(r.s, 0.5);
}

TEST(TrainClassifier, BinaryDefaultsToInverseDimension) {
  const auto norms = oracle::gaussian_blob(20, 4, 25);
  const auto arts = oracle::random_dataset(20, 4, 26, -3, 3);
  ClassifierSpec spec;
  const auto m = train_classifier(spec, norms, arts);
  EXPECT_EQ(m.kernel_width(), 0.25);
  EXPECT_EQ(m.lambda(), 1.0);
  spec.kind = ClassifierKind::one_class;
  EXPECT_EQ(train_classifier(spec, norms, arts).kind(), ClassifierKind::one_class);
}
