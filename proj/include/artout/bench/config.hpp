#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "artout/classifiers.hpp"
#include "artout/csv.hpp"
#include "artout/filters.hpp"
#include "artout/generators.hpp"

namespace artout::bench {

// One `[type:name]` or `[type]` block of an INI-style file.
struct IniSection {
  std::string type;
  std::string name;
  std::size_t line = 0;
  std::vector<std::pair<std::string, std::string>> entries;
  std::vector<std::size_t> entry_lines;
};

inline std::vector<IniSection> parse_ini(std::string_view text, const std::string& source) {
  std::vector<IniSection> sections;
  std::size_t lineno = 0;
  for (auto raw : csv::lines(text)) {
    ++lineno;
    auto line = csv::trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    const std::string where = source + ":" + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(where + ": unterminated section header");
      auto head = csv::trim(line.substr(1, line.size() - 2));
      IniSection s;
      s.line = lineno;
      const auto colon = head.find(':');
      s.type = std::string(csv::trim(head.substr(0, colon)));
      if (colon != std::string_view::npos) s.name = std::string(csv::trim(head.substr(colon + 1)));
      if (s.type.empty()) throw ParseError(where + ": empty section type");
      sections.push_back(std::move(s));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(where + ": expected key = value");
    if (sections.empty()) throw ParseError(where + ": key outside of a section");
    auto key = csv::trim(line.substr(0, eq));
    auto value = csv::trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(where + ": empty key");
    sections.back().entries.emplace_back(std::string(key), std::string(value));
    sections.back().entry_lines.push_back(lineno);
  }
  return sections;
}

namespace detail {

struct ValueReader {
  const std::string& where;
  const std::string& key;
  const std::string& value;

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(where + ": " + key + " = '" + value + "': " + what);
  }
  double real() const {
    double v = 0.0;
    if (!csv::parse_double(value, v) || !std::isfinite(v)) fail("expected a number");
    return v;
  }
  std::size_t count() const {
    const double v = real();
    if (v < 0.0 || v != std::floor(v) || v > 9.0e15) fail("expected a nonnegative integer");
    return static_cast<std::size_t>(v);
  }
  std::uint64_t u64() const {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size()) fail("expected an unsigned integer");
    return v;
  }
  std::vector<double> reals() const {
    std::vector<double> out;
    for (auto part : csv::split_line(value)) {
      double v = 0.0;
      if (!csv::parse_double(csv::trim(part), v) || !std::isfinite(v)) fail("expected a comma-separated list of numbers");
      out.push_back(v);
    }
    if (out.empty()) fail("empty list");
    return out;
  }
};

}  // namespace detail

// Applies one key to a generator config; false when the key is unknown.
inline bool apply_generator_key(GeneratorConfig& g, const std::string& key, const detail::ValueReader& r) {
  if (key == "approach") g.approach = parse_approach(r.value);
  else if (key == "n_art") g.n_art = r.count();
  else if (key == "bounds_expansion") g.bounds_expansion = r.real();
  else if (key == "k") g.k = r.count();
  else if (key == "epsilon") g.epsilon = r.real();
  else if (key == "alpha") g.alpha = r.real();
  else if (key == "hist_bins") g.hist_bins = r.count();
  else if (key == "hist_expansion") g.hist_expansion = r.real();
  else if (key == "dist_based_runs") g.dist_based_runs = r.count();
  else if (key == "enclosing_ball_tol") g.enclosing_ball_tol = r.real();
  else if (key == "infeas_mu") g.infeas_mu = r.real();
  else if (key == "infeas_sigma") g.infeas_sigma = r.real();
  else if (key == "infeas_alpha") g.infeas_alpha = r.real();
  else if (key == "infeas_epsilon") g.infeas_epsilon = r.real();
  else if (key == "infeas_max_proposals") g.infeas_max_proposals = r.count();
  else if (key == "neg_select_radius") g.neg_select.radius = r.real();
  else if (key == "neg_select_eta0") g.neg_select.eta0 = r.real();
  else if (key == "neg_select_tau") g.neg_select.tau = r.real();
  else if (key == "neg_select_max_age") g.neg_select.max_age = r.count();
  else if (key == "neg_select_k") g.neg_select.k = r.count();
  else if (key == "neg_select_max_iter") g.neg_select.max_iter = r.count();
  else return false;
  return true;
}

inline bool apply_classifier_key(ClassifierSpec& c, const std::string& key, const detail::ValueReader& r) {
  if (key == "kind") c.kind = parse_classifier_kind(r.value);
  else if (key == "kernel_width") c.kernel_width = r.real();
  else if (key == "lambda") c.lambda = r.real();
  else if (key == "nu") c.nu = r.real();
  else if (key == "nu_range") c.grids.nu_range = r.reals();
  else if (key == "s_range") c.grids.s_range = r.reals();
  else if (key == "lambda_range") c.grids.lambda_range = r.reals();
  else return false;
  return true;
}

inline bool apply_filter_key(FilterConfig& f, const std::string& key, const detail::ValueReader& r) {
  if (key == "kind") f.kind = parse_filter_kind(r.value);
  else if (key == "max_rem") f.max_rem = r.count();
  else if (key == "committee_size") f.committee_size = r.count();
  else if (key == "subsample_fraction") f.subsample_fraction = r.real();
  else if (key == "target_count") f.target_count = r.count();
  else if (key == "k") f.k = r.count();
  else if (key == "dmax") f.dmax = r.real();
  else if (key == "keep_mode") f.keep_mode = parse_keep_mode(r.value);
  else if (key == "epsilon") f.epsilon = r.real();
  else if (key == "max_loops") f.max_loops = r.count();
  else return false;
  return true;
}

struct DatasetSpec {
  std::string name;
  std::string path;
  std::string label_column = "label";
  std::string outlier_value = "outlier";
};

struct NamedGenerator {
  std::string name;
  GeneratorConfig config;
};

struct NamedClassifier {
  std::string name;
  ClassifierSpec spec;
};

struct NamedFilter {
  std::string name;
  FilterConfig config;
};

struct BenchConfig {
  std::vector<DatasetSpec> datasets;
  std::vector<NamedClassifier> classifiers;
  std::vector<NamedGenerator> generators;
  std::vector<NamedFilter> filters;
  std::size_t reps = 20;
  double train_fraction = 0.7;
  std::uint64_t seed = 0;
  std::size_t cap = 1000;
  std::size_t threads = 1;
  std::string output = "results";
  std::string format = "csv";
};

inline void validate(const BenchConfig& c) {
  require(c.reps >= 1, "reps must be at least 1");
  require(c.train_fraction > 0.0 && c.train_fraction < 1.0, "train_fraction must lie in (0,1)");
  require(c.format == "csv" || c.format == "jsonl", "format must be csv or jsonl");
  auto unique = [](const auto& items, const char* what) {
    for (std::size_t i = 0; i < items.size(); ++i)
      for (std::size_t j = i + 1; j < items.size(); ++j)
        if (items[i].name == items[j].name) throw Error(std::string("duplicate ") + what + " name '" + items[i].name + "'");
  };
  unique(c.datasets, "dataset");
  unique(c.classifiers, "classifier");
  unique(c.generators, "generator");
  unique(c.filters, "filter");
  for (const auto& g : c.generators)
    require(g.name != "trueOuts", "'trueOuts' is reserved for genuine outliers");
}

/**
 * Sections: [benchmark], [dataset:NAME], [generator:NAME], [classifier:NAME],
 * [filter:NAME]. Relative dataset paths are taken relative to `base_dir`.
 */
inline BenchConfig parse_bench_config(std::string_view text, const std::string& source,
                                      const std::filesystem::path& base_dir = {}) {
  BenchConfig cfg;
  for (const auto& s : parse_ini(text, source)) {
    const std::string head = source + ":" + std::to_string(s.line);
    const bool named = s.type != "benchmark";
    if (named && s.name.empty()) throw ParseError(head + ": section [" + s.type + "] needs a name");

    DatasetSpec ds{s.name, "", "label", "outlier"};
    NamedGenerator gen{s.name, {}};
    NamedClassifier cls{s.name, {}};
    NamedFilter flt{s.name, {}};
    // A section named after an approach or classifier kind needs no explicit key.
    bool typed = false;
    if (s.type == "generator") {
      for (const auto& [a, n] : kApproachNames)
        if (n == s.name) gen.config.approach = a, typed = true;
    } else if (s.type == "classifier") {
      for (auto k : {ClassifierKind::binary, ClassifierKind::binary_grid, ClassifierKind::one_class})
        if (to_string(k) == s.name) cls.spec.kind = k, typed = true;
    } else if (s.type == "filter") {
      for (auto k : {FilterKind::classifier_loop, FilterKind::committee, FilterKind::thinning, FilterKind::kdmax,
                     FilterKind::distance})
        if (to_string(k) == s.name) flt.config.kind = k, typed = true;
    }

    for (std::size_t e = 0; e < s.entries.size(); ++e) {
      const auto& [key, value] = s.entries[e];
      const std::string where = source + ":" + std::to_string(s.entry_lines[e]);
      const detail::ValueReader r{where, key, value};
      bool known = true;
      if (s.type == "benchmark") {
        if (key == "reps") cfg.reps = r.count();
        else if (key == "train_fraction") cfg.train_fraction = r.real();
        else if (key == "seed") cfg.seed = r.u64();
        else if (key == "cap") cfg.cap = r.count();
        else if (key == "threads") cfg.threads = r.count();
        else if (key == "output") cfg.output = value;
        else if (key == "format") cfg.format = value;
        else known = false;
      } else if (s.type == "dataset") {
        if (key == "path") ds.path = value;
        else if (key == "label_column") ds.label_column = value;
        else if (key == "outlier_value") ds.outlier_value = value;
        else known = false;
      } else if (s.type == "generator") {
        try {
          known = apply_generator_key(gen.config, key, r);
        } catch (const ParseError&) {
          throw;
        } catch (const Error& e2) {
          throw ParseError(where + ": " + e2.what());
        }
      } else if (s.type == "classifier") {
        try {
          known = apply_classifier_key(cls.spec, key, r);
        } catch (const ParseError&) {
          throw;
        } catch (const Error& e2) {
          throw ParseError(where + ": " + e2.what());
        }
      } else if (s.type == "filter") {
        try {
          known = apply_filter_key(flt.config, key, r);
        } catch (const ParseError&) {
          throw;
        } catch (const Error& e2) {
          throw ParseError(where + ": " + e2.what());
        }
      } else {
        throw ParseError(head + ": unknown section type '" + s.type + "'");
      }
      if (!known) throw ParseError(where + ": unknown key '" + key + "' in [" + s.type + "]");
      if (key == "approach" || key == "kind") typed = true;
    }

    if ((s.type == "generator" || s.type == "classifier" || s.type == "filter") && !typed)
      throw ParseError(head + ": [" + s.type + ":" + s.name + "] needs an " +
                       (s.type == "generator" ? "approach" : "kind") + " key");
    if (s.type == "dataset") {
      if (ds.path.empty()) throw ParseError(head + ": dataset '" + ds.name + "' has no path");
      std::filesystem::path p(ds.path);
      if (p.is_relative() && !base_dir.empty()) ds.path = (base_dir / p).lexically_normal().string();
      cfg.datasets.push_back(std::move(ds));
    } else if (s.type == "generator") {
      cfg.generators.push_back(std::move(gen));
    } else if (s.type == "classifier") {
      cfg.classifiers.push_back(std::move(cls));
    } else if (s.type == "filter") {
      cfg.filters.push_back(std::move(flt));
    }
  }
  validate(cfg);
  return cfg;
}

inline BenchConfig load_bench_config(const std::string& path) {
  return parse_bench_config(csv::read_file(path), path, std::filesystem::path(path).parent_path());
}

}  // namespace artout::bench
