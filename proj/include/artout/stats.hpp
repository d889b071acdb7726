#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "artout/core.hpp"

namespace artout {

// Outlier is the positive class.
struct Confusion {
  std::size_t tp = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + tn + fp + fn; }
  bool operator==(const Confusion&) const = default;
};

inline Confusion confusion(std::span<const Label> truth, std::span<const Label> predicted) {
  require(truth.size() == predicted.size(), "label vectors differ in length");
  Confusion c;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool t = truth[i] == Label::outlier;
    const bool p = predicted[i] == Label::outlier;
    if (t && p) ++c.tp;
    else if (t) ++c.fn;
    else if (p) ++c.fp;
    else ++c.tn;
  }
  return c;
}

// Matthews correlation coefficient; 0 when any marginal is empty.
inline double mcc(const Confusion& c) {
  require(c.total() > 0, "mcc of an empty confusion matrix");
  const auto tp = static_cast<double>(c.tp);
  const auto tn = static_cast<double>(c.tn);
  const auto fp = static_cast<double>(c.fp);
  const auto fn = static_cast<double>(c.fn);
  const double den = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (den == 0.0) return 0.0;
  return std::clamp((tp * tn - fp * fn) / std::sqrt(den), -1.0, 1.0);
}

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  double adjusted_p = 1.0;
};

// Average ranks (1-based) with ties sharing their mean rank.
inline std::vector<double> midranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = rank;
    i = j + 1;
  }
  return r;
}

// Null distribution of U for sample sizes (n1, n2) without ties: counts[u] of
// the C(n1+n2, n1) equally likely rank arrangements.
inline std::vector<double> mann_whitney_null_counts(std::size_t n1, std::size_t n2) {
  // f[j][u]: arrangements with i first-sample items and j second-sample items.
  const std::size_t umax = n1 * n2;
  std::vector<std::vector<double>> prev(n2 + 1, std::vector<double>(umax + 1, 0.0));
  for (std::size_t j = 0; j <= n2; ++j) prev[j][0] = 1.0;
  for (std::size_t i = 1; i <= n1; ++i) {
    std::vector<std::vector<double>> cur(n2 + 1, std::vector<double>(umax + 1, 0.0));
    cur[0][0] = 1.0;
    for (std::size_t j = 1; j <= n2; ++j)
      for (std::size_t u = 0; u <= i * j; ++u) {
        // Largest item from sample 1 beats all j of sample 2, or from sample 2.
        cur[j][u] = cur[j - 1][u] + (u >= j ? prev[j][u - j] : 0.0);
      }
    prev = std::move(cur);
  }
  return prev[n2];
}

inline constexpr std::size_t kMannWhitneyExactLimit = 20;

/**
 * Two-sided Mann-Whitney U test. statistic is U of sample `a` (pairs with
 * a > b, ties counting one half). Tie-free samples with both sizes up to
 * kMannWhitneyExactLimit use the exact null distribution; otherwise the normal
 * approximation with tie-corrected variance and continuity correction.
 */
inline TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b) {
  require(!a.empty() && !b.empty(), "Mann-Whitney needs two nonempty samples");
  const std::size_t n1 = a.size();
  const std::size_t n2 = b.size();
  std::vector<double> all(a.begin(), a.end());
  all.insert(all.end(), b.begin(), b.end());
  const auto r = midranks(all);
  double r1 = 0.0;
  for (std::size_t i = 0; i < n1; ++i) r1 += r[i];
  const double u = r1 - static_cast<double>(n1 * (n1 + 1)) / 2.0;

  std::vector<double> sorted = all;
  std::sort(sorted.begin(), sorted.end());
  double tie_term = 0.0;
  bool ties = false;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    const auto t = static_cast<double>(j - i + 1);
    if (t > 1.0) ties = true;
    tie_term += t * t * t - t;
    i = j + 1;
  }

  TestResult res;
  res.statistic = u;
  if (!ties && n1 <= kMannWhitneyExactLimit && n2 <= kMannWhitneyExactLimit) {
    const auto counts = mann_whitney_null_counts(n1, n2);
    const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    const auto k = static_cast<std::size_t>(std::llround(u));
    double cdf = 0.0;
    for (std::size_t i = 0; i <= k; ++i) cdf += counts[i];
    double sf = 0.0;
    for (std::size_t i = k; i < counts.size(); ++i) sf += counts[i];
    res.p_value = std::min(1.0, 2.0 * std::min(cdf, sf) / total);
  } else {
    const auto dn1 = static_cast<double>(n1);
    const auto dn2 = static_cast<double>(n2);
    const double n = dn1 + dn2;
    const double var = dn1 * dn2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if (!(var > 0.0)) {
      res.p_value = 1.0;
    } else {
      const double dev = std::abs(u - dn1 * dn2 / 2.0);
      const double z = std::max(0.0, dev - 0.5) / std::sqrt(var);
      res.p_value = std::min(1.0, 2.0 * normal_sf(z));
    }
  }
  res.adjusted_p = res.p_value;
  return res;
}

/**
 * Kendall tau-b with a two-sided normal-approximation p-value; the variance
 * carries the usual tie corrections.
 */
inline TestResult kendall_tau(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), "Kendall tau needs samples of equal length");
  require(x.size() >= 2, "Kendall tau needs at least two observations");
  const std::size_t n = x.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      const double p = (dx > 0 ? 1 : dx < 0 ? -1 : 0) * (dy > 0 ? 1 : dy < 0 ? -1 : 0);
      s += p;
    }

  struct TieSums {
    double pairs = 0, v = 0, t1 = 0, t2 = 0;
  };
  auto tie_sums = [](std::span<const double> v) {
    std::vector<double> sv(v.begin(), v.end());
    std::sort(sv.begin(), sv.end());
    TieSums t;
    for (std::size_t i = 0; i < sv.size();) {
      std::size_t j = i;
      while (j + 1 < sv.size() && sv[j + 1] == sv[i]) ++j;
      const auto c = static_cast<double>(j - i + 1);
      t.pairs += c * (c - 1.0) / 2.0;
      t.v += c * (c - 1.0) * (2.0 * c + 5.0);
      t.t1 += c * (c - 1.0);
      t.t2 += c * (c - 1.0) * (c - 2.0);
      i = j + 1;
    }
    return t;
  };
  const TieSums tx = tie_sums(x);
  const TieSums ty = tie_sums(y);
  const auto dn = static_cast<double>(n);
  const double n0 = dn * (dn - 1.0) / 2.0;
  if (tx.pairs == n0 || ty.pairs == n0) throw Error("constant input");

  TestResult res;
  res.statistic = s / std::sqrt((n0 - tx.pairs) * (n0 - ty.pairs));
  double var = (dn * (dn - 1.0) * (2.0 * dn + 5.0) - tx.v - ty.v) / 18.0 + tx.t1 * ty.t1 / (2.0 * dn * (dn - 1.0));
  if (n > 2) var += tx.t2 * ty.t2 / (9.0 * dn * (dn - 1.0) * (dn - 2.0));
  res.p_value = var > 0.0 ? std::min(1.0, 2.0 * normal_sf(std::abs(s) / std::sqrt(var))) : 1.0;
  res.adjusted_p = res.p_value;
  return res;
}

// Holm step-down adjustment, returned in input order.
inline std::vector<double> holm_bonferroni(std::span<const double> p) {
  for (double v : p) require(v >= 0.0 && v <= 1.0, "p-values must lie in [0,1]");
  const std::size_t m = p.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
  std::vector<double> adj(m);
  double running = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    running = std::max(running, std::min(1.0, static_cast<double>(m - i) * p[order[i]]));
    adj[order[i]] = running;
  }
  return adj;
}

struct AnovaResult {
  double f = 0.0;
  double p_value = 1.0;
  double omega_sq = 0.0;
  double df_between = 0.0;
  double df_within = 0.0;
};

inline AnovaResult oneway_anova(const std::vector<std::vector<double>>& groups) {
  require(groups.size() >= 2, "ANOVA needs at least two groups");
  std::size_t total = 0;
  double grand = 0.0;
  for (const auto& g : groups) {
    require(!g.empty(), "ANOVA groups must be nonempty");
    total += g.size();
    grand += std::accumulate(g.begin(), g.end(), 0.0);
  }
  require(total > groups.size(), "ANOVA needs more observations than groups");
  grand /= static_cast<double>(total);

  double ss_between = 0.0;
  double ss_within = 0.0;
  for (const auto& g : groups) {
    const double mean = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
    ss_between += static_cast<double>(g.size()) * (mean - grand) * (mean - grand);
    for (double v : g) ss_within += (v - mean) * (v - mean);
  }
  AnovaResult r;
  r.df_between = static_cast<double>(groups.size() - 1);
  r.df_within = static_cast<double>(total - groups.size());
  const double ms_within = ss_within / r.df_within;
  const double ms_between = ss_between / r.df_between;
  if (ss_within == 0.0) {
    if (ss_between == 0.0) throw Error("ANOVA undefined: no variance within or between groups");
    r.f = std::numeric_limits<double>::infinity();
    r.p_value = 0.0;
  } else {
    r.f = ms_between / ms_within;
    r.p_value = f_distribution_sf(r.f, r.df_between, r.df_within);
  }
  const double ss_total = ss_between + ss_within;
  r.omega_sq = std::max(0.0, (ss_between - r.df_between * ms_within) / (ss_total + ms_within));
  return r;
}

/**
 * Compact letter display. Levels sharing a letter are not significantly
 * different; every non-significant pair shares at least one letter. Returns
 * one string of letters per level.
 */
inline std::vector<std::string> group_letters(const std::vector<std::vector<bool>>& significant) {
  const std::size_t k = significant.size();
  for (std::size_t i = 0; i < k; ++i) {
    require(significant[i].size() == k, "significance matrix must be square");
    for (std::size_t j = 0; j < k; ++j)
      require(significant[i][j] == significant[j][i], "significance matrix must be symmetric");
  }
  if (k == 0) return {};

  // Insert-absorb: start with one group of all levels; split on each
  // significant pair, then drop groups contained in another.
  std::vector<std::vector<bool>> groups{std::vector<bool>(k, true)};
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      if (!significant[i][j]) continue;
      std::vector<std::vector<bool>> next;
      for (const auto& g : groups) {
        if (g[i] && g[j]) {
          auto gi = g;
          gi[j] = false;
          auto gj = g;
          gj[i] = false;
          next.push_back(std::move(gi));
          next.push_back(std::move(gj));
        } else {
          next.push_back(g);
        }
      }
      std::vector<std::vector<bool>> kept;
      for (std::size_t a = 0; a < next.size(); ++a) {
        bool absorbed = false;
        for (std::size_t b = 0; b < next.size() && !absorbed; ++b) {
          if (a == b) continue;
          bool subset = true;
          for (std::size_t t = 0; t < k && subset; ++t) subset = !next[a][t] || next[b][t];
          // Identical groups: keep the first copy only.
          absorbed = subset && (next[a] != next[b] || b < a);
        }
        if (!absorbed) kept.push_back(next[a]);
      }
      groups = std::move(kept);
    }

  // Letter order follows the first level each group contains.
  auto first_member = [&](const std::vector<bool>& g) {
    return static_cast<std::size_t>(std::find(g.begin(), g.end(), true) - g.begin());
  };
  std::stable_sort(groups.begin(), groups.end(), [&](const auto& a, const auto& b) {
    const auto fa = first_member(a);
    const auto fb = first_member(b);
    if (fa != fb) return fa < fb;
    return a > b;
  });
  if (groups.size() > 26) throw Error("more than 26 letter groups needed");
  std::vector<std::string> letters(k);
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (std::size_t i = 0; i < k; ++i)
      if (groups[g][i]) letters[i] += static_cast<char>('a' + g);
  return letters;
}

inline double mean(std::span<const double> v) {
  require(!v.empty(), "mean of an empty sample");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double median(std::span<const double> v) {
  require(!v.empty(), "median of an empty sample");
  std::vector<double> s(v.begin(), v.end());
  std::sort(s.begin(), s.end());
  const std::size_t h = s.size() / 2;
  return s.size() % 2 ? s[h] : 0.5 * (s[h - 1] + s[h]);
}

}  // namespace artout
