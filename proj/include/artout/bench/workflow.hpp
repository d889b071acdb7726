#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "artout/bench/config.hpp"
#include "artout/bench/records.hpp"
#include "artout/classifiers.hpp"
#include "artout/generators.hpp"
#include "artout/preprocess.hpp"
#include "artout/stats.hpp"

namespace artout::bench {

struct NamedDataset {
  std::string name;
  Dataset data;  // raw, labels marking genuine outliers
};

struct WorkflowResult {
  std::vector<EvalRecord> records;
  std::vector<DatasetInfo> datasets;
  std::vector<std::string> failures;  // one line per failed record
};

// Stream id of a benchmark cell; the record's `seed` column.
inline std::uint64_t cell_stream_id(std::string_view dataset, std::string_view classifier, std::string_view train_gen,
                                    std::size_t rep) {
  std::uint64_t h = hash_name(dataset);
  h = hash_combine(h, hash_name(classifier));
  h = hash_combine(h, hash_name(train_gen));
  return hash_combine(h, static_cast<std::uint64_t>(rep));
}

// Shared by every classifier and generator of a (dataset, rep) pair.
inline std::uint64_t split_stream_id(std::string_view dataset, std::size_t rep) {
  return hash_combine(hash_combine(hash_name(dataset), hash_name("split")), static_cast<std::uint64_t>(rep));
}

inline std::uint64_t preprocess_stream_id(std::string_view dataset) {
  return hash_combine(hash_name(dataset), hash_name("preprocess"));
}

// MCC of `model` on `outs` (truth: outlier) mixed with `norms` (truth: normal).
inline double evaluate_mcc(const TrainedModel& model, const Dataset& outs, const Dataset& norms) {
  Confusion c;
  for (std::size_t i = 0; i < outs.size(); ++i)
    (model.predict(outs.row(i)) == Label::outlier ? c.tp : c.fn) += 1;
  for (std::size_t i = 0; i < norms.size(); ++i)
    (model.predict(norms.row(i)) == Label::outlier ? c.fp : c.tn) += 1;
  return mcc(c);
}

inline std::vector<NamedDataset> load_datasets(const BenchConfig& cfg) {
  std::vector<NamedDataset> out;
  for (const auto& d : cfg.datasets) out.push_back({d.name, load_csv(d.path, d.label_column, d.outlier_value)});
  return out;
}

/**
 * For every (dataset, classifier, trainGen, rep) cell: split the preprocessed
 * normals, train on TrainNorms plus trainGen outliers, then score one record
 * per generator (fresh outliers drawn from TrainNorms, mixed with TestNorms)
 * and one against the genuine outliers. A failing cell yields NA records.
 * Records come out ordered by dataset, classifier, trainGen, rep, testOuts.
 */
inline WorkflowResult run_workflow(const BenchConfig& cfg, const std::vector<NamedDataset>& raw) {
  validate(cfg);
  require(!raw.empty(), "benchmark needs at least one dataset");
  require(!cfg.classifiers.empty(), "benchmark needs at least one classifier");
  require(!cfg.generators.empty(), "benchmark needs at least one generator");

  struct Prepared {
    Dataset norms;
    Dataset outs;
  };
  WorkflowResult result;
  std::vector<Prepared> prepared;
  for (const auto& d : raw) {
    const Dataset p = preprocess(d.data, {cfg.cap}, RngStream(cfg.seed, preprocess_stream_id(d.name)));
    prepared.push_back({p.with_label(Label::normal), p.with_label(Label::outlier)});
    result.datasets.push_back({d.name, p.size(), p.dim(), p.count(Label::outlier)});
  }

  const std::size_t n_data = raw.size();
  const std::size_t n_cls = cfg.classifiers.size();
  const std::size_t n_gen = cfg.generators.size();
  const std::size_t reps = cfg.reps;
  const std::size_t per_cell = n_gen + 1;
  const std::size_t n_cells = n_data * n_cls * n_gen * reps;
  result.records.resize(n_cells * per_cell);
  std::vector<std::vector<std::string>> cell_failures(n_cells);

  auto run_cell = [&](std::size_t cell) {
    std::size_t rest = cell;
    const std::size_t rep = rest % reps;
    rest /= reps;
    const std::size_t t = rest % n_gen;
    rest /= n_gen;
    const std::size_t c = rest % n_cls;
    const std::size_t d = rest / n_cls;

    const auto& dname = raw[d].name;
    const auto& cname = cfg.classifiers[c].name;
    const auto& tname = cfg.generators[t].name;
    const std::uint64_t stream = cell_stream_id(dname, cname, tname, rep);
    EvalRecord* out = &result.records[cell * per_cell];
    for (std::size_t k = 0; k < per_cell; ++k)
      out[k] = {dname, cname, tname, k < n_gen ? cfg.generators[k].name : std::string(kTrueOuts), rep, stream,
                std::nullopt};
    auto fail = [&](std::size_t k, const std::string& msg) {
      cell_failures[cell].push_back(dname + "," + cname + "," + tname + "," + out[k].test_outs + "," +
                                    std::to_string(rep) + ": " + msg);
    };

    std::optional<TrainedModel> model;
    Dataset train_norms;
    Dataset test_norms;
    try {
      auto split = split_train_test(prepared[d].norms, cfg.train_fraction, RngStream(cfg.seed, split_stream_id(dname, rep)));
      train_norms = std::move(split.train);
      test_norms = std::move(split.test);
      RngStream rng(cfg.seed, stream);
      const Dataset arts = generate(train_norms, cfg.generators[t].config, rng.split("train"));
      model = train_classifier(cfg.classifiers[c].spec, train_norms, arts);
    } catch (const std::exception& e) {
      for (std::size_t k = 0; k < per_cell; ++k) fail(k, e.what());
      return;
    }
    RngStream test_rng = RngStream(cfg.seed, stream).split("test");
    for (std::size_t k = 0; k < n_gen; ++k) {
      try {
        const Dataset outs = generate(train_norms, cfg.generators[k].config, test_rng.split(cfg.generators[k].name));
        out[k].mcc = evaluate_mcc(*model, outs, test_norms);
      } catch (const std::exception& e) {
        fail(k, e.what());
      }
    }
    try {
      out[n_gen].mcc = evaluate_mcc(*model, prepared[d].outs, test_norms);
    } catch (const std::exception& e) {
      fail(n_gen, e.what());
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(cfg.threads, 1, std::max<std::size_t>(n_cells, 1));
  if (workers == 1) {
    for (std::size_t cell = 0; cell < n_cells; ++cell) run_cell(cell);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t cell = next++; cell < n_cells; cell = next++) run_cell(cell);
      });
    for (auto& th : pool) th.join();
  }
  for (auto& f : cell_failures)
    for (auto& line : f) result.failures.push_back(std::move(line));
  return result;
}

inline WorkflowResult run_workflow(const BenchConfig& cfg) { return run_workflow(cfg, load_datasets(cfg)); }

}  // namespace artout::bench
