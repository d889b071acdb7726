#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "artout/bench/records.hpp"
#include "artout/stats.hpp"

namespace artout::bench {

struct LevelSummary {
  std::string level;
  std::size_t count = 0;  // non-NA records
  double mean = 0.0;
  double median = 0.0;
  std::string letters;
};

struct PairTest {
  std::string a;
  std::string b;
  TestResult test;
};

struct FactorSummary {
  std::string factor;
  std::vector<LevelSummary> levels;
  std::vector<PairTest> pairs;
  std::optional<AnovaResult> anova;
};

struct CorrelationRow {
  std::string train_gen;
  std::optional<TestResult> tau_d;
  std::optional<TestResult> tau_n;
};

struct StatReport {
  std::vector<FactorSummary> factors;  // classifier, trainGen, testOuts, dataset
  std::vector<CorrelationRow> correlations;
  std::vector<DatasetInfo> datasets;
  std::size_t na_records = 0;
};

inline constexpr double kSignificanceLevel = 0.05;

inline FactorSummary summarize_factor(const std::vector<EvalRecord>& records, const std::string& factor,
                                      std::string EvalRecord::*field, double alpha = kSignificanceLevel) {
  FactorSummary f{factor, {}, {}, std::nullopt};
  std::vector<std::vector<double>> values;
  std::map<std::string, std::size_t> index;
  for (const auto& r : records) {
    const auto& key = r.*field;
    auto [it, inserted] = index.try_emplace(key, values.size());
    if (inserted) {
      values.emplace_back();
      f.levels.emplace_back();
      f.levels.back().level = key;
    }
    if (r.mcc) values[it->second].push_back(*r.mcc);
  }

  // Levels without any value keep count 0 and take no part in the tests.
  std::vector<std::size_t> tested;
  for (std::size_t i = 0; i < f.levels.size(); ++i) {
    f.levels[i].count = values[i].size();
    if (values[i].empty()) continue;
    f.levels[i].mean = mean(values[i]);
    f.levels[i].median = median(values[i]);
    tested.push_back(i);
  }

  const std::size_t k = tested.size();
  std::vector<std::vector<bool>> sig(k, std::vector<bool>(k, false));
  if (k >= 2) {
    std::vector<double> raw_p;
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = a + 1; b < k; ++b) {
        f.pairs.push_back({f.levels[tested[a]].level, f.levels[tested[b]].level,
                           mann_whitney_u(values[tested[a]], values[tested[b]])});
        raw_p.push_back(f.pairs.back().test.p_value);
      }
    const auto adj = holm_bonferroni(raw_p);
    std::size_t p = 0;
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = a + 1; b < k; ++b, ++p) {
        f.pairs[p].test.adjusted_p = adj[p];
        sig[a][b] = sig[b][a] = adj[p] < alpha;
      }
    std::vector<std::vector<double>> groups;
    for (auto i : tested) groups.push_back(values[i]);
    try {
      f.anova = oneway_anova(groups);
    } catch (const Error&) {
      f.anova.reset();
    }
  }
  const auto letters = group_letters(sig);
  for (std::size_t a = 0; a < k; ++a) f.levels[tested[a]].letters = letters[a];
  return f;
}

inline StatReport report_summary(const std::vector<EvalRecord>& records, const std::vector<DatasetInfo>& datasets = {},
                                 double alpha = kSignificanceLevel) {
  require(!records.empty(), "report needs at least one record");
  StatReport rep;
  rep.datasets = datasets;
  for (const auto& r : records) rep.na_records += !r.mcc;
  rep.factors.push_back(summarize_factor(records, "classifier", &EvalRecord::classifier, alpha));
  rep.factors.push_back(summarize_factor(records, "trainGen", &EvalRecord::train_gen, alpha));
  rep.factors.push_back(summarize_factor(records, "testOuts", &EvalRecord::test_outs, alpha));
  rep.factors.push_back(summarize_factor(records, "dataset", &EvalRecord::dataset, alpha));

  if (datasets.empty()) return rep;
  std::map<std::string, const DatasetInfo*> info;
  for (const auto& d : datasets) info[d.name] = &d;
  for (const auto& level : rep.factors[1].levels) {
    CorrelationRow row{level.level, std::nullopt, std::nullopt};
    std::vector<double> d, n, y;
    for (const auto& r : records) {
      if (r.train_gen != level.level || !r.mcc) continue;
      const auto it = info.find(r.dataset);
      if (it == info.end()) continue;
      d.push_back(static_cast<double>(it->second->d));
      n.push_back(static_cast<double>(it->second->n));
      y.push_back(*r.mcc);
    }
    auto tau = [&](const std::vector<double>& x) -> std::optional<TestResult> {
      if (x.size() < 2) return std::nullopt;
      try {
        return kendall_tau(x, y);
      } catch (const Error&) {
        return std::nullopt;  // constant input, e.g. a single dataset
      }
    };
    row.tau_d = tau(d);
    row.tau_n = tau(n);
    rep.correlations.push_back(std::move(row));
  }
  return rep;
}

namespace detail {

inline std::string num(double v, const char* fmt = "%.17g") {
  char buf[48];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

inline std::string opt_num(const std::optional<double>& v, const char* fmt = "%.17g") {
  return v ? num(*v, fmt) : std::string("NA");
}

inline std::string pad(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}

}  // namespace detail

struct ReportFiles {
  std::string levels_csv;
  std::string pairs_csv;
  std::string anova_csv;
  std::string correlation_csv;
  std::string datasets_csv;
  std::string text;
};

inline ReportFiles render_report(const StatReport& rep) {
  using detail::num;
  using detail::opt_num;
  using detail::pad;
  ReportFiles out;
  out.levels_csv = "factor,level,count,mean,median,letters\n";
  out.pairs_csv = "factor,level_a,level_b,U,p,adjusted_p\n";
  out.anova_csv = "factor,F,p,omega_sq\n";
  out.correlation_csv = "trainGen,tau_d,p_d,tau_n,p_n\n";
  out.datasets_csv = "dataset,n,d,mean,median,letters\n";

  auto level_mean = [](const LevelSummary& l) {
    return l.count ? std::optional<double>(l.mean) : std::nullopt;
  };
  auto level_median = [](const LevelSummary& l) {
    return l.count ? std::optional<double>(l.median) : std::nullopt;
  };

  std::string& t = out.text;
  for (const auto& f : rep.factors) {
    t += "== " + f.factor + " ==\n";
    std::size_t w = f.factor.size();
    for (const auto& l : f.levels) w = std::max(w, l.level.size());
    t += pad(f.factor, w + 2) + pad("count", 8) + pad("mean", 8) + pad("median", 8) + "letters\n";
    for (const auto& l : f.levels) {
      out.levels_csv += f.factor + ',' + l.level + ',' + std::to_string(l.count) + ',' + opt_num(level_mean(l)) + ',' +
                        opt_num(level_median(l)) + ',' + l.letters + '\n';
      t += pad(l.level, w + 2) + pad(std::to_string(l.count), 8) + pad(opt_num(level_mean(l), "%.2f"), 8) +
           pad(opt_num(level_median(l), "%.2f"), 8) + l.letters + '\n';
    }
    for (const auto& p : f.pairs)
      out.pairs_csv += f.factor + ',' + p.a + ',' + p.b + ',' + num(p.test.statistic) + ',' + num(p.test.p_value) +
                       ',' + num(p.test.adjusted_p) + '\n';
    if (f.anova) {
      out.anova_csv += f.factor + ',' + num(f.anova->f) + ',' + num(f.anova->p_value) + ',' + num(f.anova->omega_sq) + '\n';
      t += "one-way F = " + num(f.anova->f, "%.4g") + ", p = " + num(f.anova->p_value, "%.4g") +
           ", omega^2 = " + num(f.anova->omega_sq, "%.4f") + '\n';
    } else if (f.levels.size() < 2) {
      t += "single level: tests skipped\n";
    }
    t += '\n';
  }

  if (!rep.datasets.empty()) {
    const auto& df = rep.factors[3];
    std::size_t w = 7;
    for (const auto& d : rep.datasets) w = std::max(w, d.name.size());
    t += "== datasets ==\n" + pad("dataset", w + 2) + pad("n", 7) + pad("d", 5) + pad("mean", 8) + pad("median", 8) +
         "letters\n";
    for (const auto& d : rep.datasets) {
      const auto it = std::find_if(df.levels.begin(), df.levels.end(), [&](const auto& l) { return l.level == d.name; });
      LevelSummary empty;
      empty.level = d.name;
      const LevelSummary& l = it == df.levels.end() ? empty : *it;
      out.datasets_csv += d.name + ',' + std::to_string(d.n) + ',' + std::to_string(d.d) + ',' + opt_num(level_mean(l)) +
                          ',' + opt_num(level_median(l)) + ',' + l.letters + '\n';
      t += pad(d.name, w + 2) + pad(std::to_string(d.n), 7) + pad(std::to_string(d.d), 5) +
           pad(opt_num(level_mean(l), "%.2f"), 8) + pad(opt_num(level_median(l), "%.2f"), 8) + l.letters + '\n';
    }
    t += '\n';
  }

  if (!rep.correlations.empty()) {
    std::size_t w = 8;
    for (const auto& c : rep.correlations) w = std::max(w, c.train_gen.size());
    t += "== correlation with d and n ==\n" + pad("trainGen", w + 2) + pad("tau_d", 9) + pad("p_d", 9) +
         pad("tau_n", 9) + "p_n\n";
    for (const auto& c : rep.correlations) {
      auto stat = [](const std::optional<TestResult>& r) {
        return r ? std::optional<double>(r->statistic) : std::nullopt;
      };
      auto pv = [](const std::optional<TestResult>& r) { return r ? std::optional<double>(r->p_value) : std::nullopt; };
      out.correlation_csv += c.train_gen + ',' + opt_num(stat(c.tau_d)) + ',' + opt_num(pv(c.tau_d)) + ',' +
                             opt_num(stat(c.tau_n)) + ',' + opt_num(pv(c.tau_n)) + '\n';
      t += pad(c.train_gen, w + 2) + pad(opt_num(stat(c.tau_d), "%.2f"), 9) + pad(opt_num(pv(c.tau_d), "%.3f"), 9) +
           pad(opt_num(stat(c.tau_n), "%.2f"), 9) + opt_num(pv(c.tau_n), "%.3f") + '\n';
    }
    t += '\n';
  }
  if (rep.na_records) t += std::to_string(rep.na_records) + " record(s) without mcc (failed cells)\n";
  return out;
}

inline void write_report(const StatReport& rep, const std::string& dir) {
  const auto files = render_report(rep);
  csv::write_file(dir + "/report_levels.csv", files.levels_csv);
  csv::write_file(dir + "/report_pairs.csv", files.pairs_csv);
  csv::write_file(dir + "/report_anova.csv", files.anova_csv);
  csv::write_file(dir + "/report_correlation.csv", files.correlation_csv);
  csv::write_file(dir + "/report_datasets.csv", files.datasets_csv);
  csv::write_file(dir + "/report.txt", files.text);
}

}  // namespace artout::bench
