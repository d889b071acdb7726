#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "artout/artout.hpp"

namespace {

using namespace artout;

struct Globals {
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string config;
  std::string out;
  std::string format = "csv";
};

struct DataArgs {
  std::string path;
  std::string label_column = "label";
  std::string outlier_value = "outlier";
  bool normalize = false;
};

void add_data_options(CLI::App* cmd, DataArgs& a) {
  cmd->add_option("--data", a.path, "input CSV")->required()->check(CLI::ExistingFile);
  cmd->add_option("--label-column", a.label_column, "label column name (empty: no labels)");
  cmd->add_option("--outlier-value", a.outlier_value, "label value marking genuine outliers");
  cmd->add_flag("--normalize", a.normalize, "scale every attribute to [0,1] first");
}

// Genuine normals of the input, optionally normalized.
Dataset load_normals(const DataArgs& a) {
  Dataset d = load_csv(a.path, a.label_column, a.outlier_value);
  if (a.normalize) d = normalize_unit_box(d).data;
  return d.with_label(Label::normal);
}

// Artificial instances as written by `generate`: a "label" column is optional.
Dataset load_arts(const std::string& path) {
  const std::string text = csv::read_file(path);
  const auto rows = csv::lines(text);
  bool labeled = false;
  if (!rows.empty())
    for (auto h : csv::split_line(rows[0])) labeled = labeled || csv::trim(h) == "label";
  Dataset d = csv::parse(text, labeled ? "label" : "", "outlier", path);
  d.mark_all(Label::outlier, Provenance::artificial);
  return d;
}

std::string dataset_to_jsonl(const Dataset& d) {
  std::string out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    nlohmann::ordered_json j;
    for (std::size_t c = 0; c < d.dim(); ++c) j[d.attribute_names()[c]] = d.at(i, c);
    j["label"] = std::string(to_string(d.label(i)));
    out += j.dump() + '\n';
  }
  return out;
}

void emit_dataset(const Dataset& d, const Globals& g) {
  const std::string text = g.format == "jsonl" ? dataset_to_jsonl(d) : csv::format(d);
  if (g.out.empty() || g.out == "-") std::cout << text;
  else csv::write_file(g.out, text);
}

std::optional<bench::BenchConfig> maybe_config(const Globals& g) {
  if (g.config.empty()) return std::nullopt;
  return bench::load_bench_config(g.config);
}

std::uint64_t effective_seed(const Globals& g, const std::optional<bench::BenchConfig>& cfg) {
  if (g.seed_given || !cfg) return g.seed;
  return cfg->seed;
}

template <typename T>
const T& find_named(const std::vector<T>& items, const std::string& name, const char* what) {
  for (const auto& i : items)
    if (i.name == name) return i;
  throw Error(std::string("no ") + what + " named '" + name + "' in the config");
}

struct GeneratorArgs {
  std::string approach;
  std::string named;
  std::size_t n_art = 0;
  bool n_art_given = false;
};

void add_generator_options(CLI::App* cmd, GeneratorArgs& a, const char* approach_help) {
  cmd->add_option("--approach", a.approach, approach_help);
  cmd->add_option("--generator", a.named, "a [generator:NAME] section of --config");
  cmd->add_option("--n-art", a.n_art, "number of artificial instances (default: as many as normals)");
}

GeneratorConfig resolve_generator(const GeneratorArgs& a, const std::optional<bench::BenchConfig>& cfg,
                                  const std::string& fallback) {
  GeneratorConfig g;
  if (!a.named.empty()) {
    if (!cfg) throw Error("--generator needs --config");
    g = find_named(cfg->generators, a.named, "generator").config;
  } else {
    g.approach = parse_approach(a.approach.empty() ? fallback : a.approach);
  }
  if (a.n_art_given) g.n_art = a.n_art;
  return g;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Artificial outlier generation, filtering, tuning and benchmarking"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "base random seed")->each([&](const std::string&) { g.seed_given = true; });
  app.add_option("--config", g.config, "INI-style configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", g.out, "output file (generate, filter, tune) or directory (benchmark, report)");
  app.add_option("--format", g.format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));

  // generate
  auto* gen = app.add_subcommand("generate", "generate artificial outliers from the genuine normals of a CSV");
  DataArgs gen_data;
  GeneratorArgs gen_args;
  add_data_options(gen, gen_data);
  add_generator_options(gen, gen_args, "approach id, e.g. unifBox");

  // filter
  auto* flt = app.add_subcommand("filter", "filter artificial instances");
  DataArgs flt_data;
  std::string flt_arts;
  std::string flt_named;
  std::string flt_kind;
  FilterConfig fc;
  std::string flt_keep;
  std::string flt_classifier = "binary";
  GeneratorArgs flt_gen;
  add_data_options(flt, flt_data);
  flt->add_option("--arts", flt_arts, "CSV of artificial instances")->required()->check(CLI::ExistingFile);
  flt->add_option("--filter", flt_named, "a [filter:NAME] section of --config");
  flt->add_option("--kind", flt_kind, "classifierLoop, committee, thinning, kdmax or distance");
  auto* o_max_rem = flt->add_option("--max-rem", fc.max_rem);
  auto* o_committee = flt->add_option("--committee-size", fc.committee_size);
  auto* o_target = flt->add_option("--target-count", fc.target_count);
  auto* o_k = flt->add_option("--k", fc.k);
  auto* o_dmax = flt->add_option("--dmax", fc.dmax);
  flt->add_option("--keep-mode", flt_keep, "keep-outlier or keep-normal");
  auto* o_eps = flt->add_option("--epsilon", fc.epsilon);
  auto* o_loops = flt->add_option("--max-loops", fc.max_loops);
  flt->add_option("--classifier", flt_classifier, "binary, binaryGrid or one-class (classifierLoop, committee)");
  add_generator_options(flt, flt_gen, "resupplying approach for classifierLoop (default unifBox)");

  // tune
  auto* tune = app.add_subcommand("tune", "grid-search kernel width and capacity against artificial outliers");
  DataArgs tune_data;
  std::string tune_arts;
  std::string tune_kind = "one-class";
  GeneratorArgs tune_gen;
  add_data_options(tune, tune_data);
  tune->add_option("--arts", tune_arts, "CSV of artificial outliers (default: generate them)")->check(CLI::ExistingFile);
  tune->add_option("--kind", tune_kind, "one-class or binaryGrid");
  add_generator_options(tune, tune_gen, "approach used when --arts is absent (default unifBox)");

  // benchmark
  auto* bm = app.add_subcommand("benchmark", "run the benchmark workflow described by --config");
  std::size_t bm_threads = 0;
  bm->add_option("--threads", bm_threads, "worker threads (overrides the config)");

  // report
  auto* rp = app.add_subcommand("report", "summary statistics of a records file");
  std::string rp_records;
  std::string rp_datasets;
  rp->add_option("--records", rp_records, "records.csv or records.jsonl")->required()->check(CLI::ExistingFile);
  rp->add_option("--datasets", rp_datasets, "datasets.csv with n and d per dataset")->check(CLI::ExistingFile);

  for (auto* cmd : {gen, flt, tune, bm, rp}) cmd->fallthrough();
  CLI11_PARSE(app, argc, argv);
  gen_args.n_art_given = gen->count("--n-art") > 0;
  flt_gen.n_art_given = flt->count("--n-art") > 0;
  tune_gen.n_art_given = tune->count("--n-art") > 0;

  try {
    const auto cfg = maybe_config(g);
    const std::uint64_t seed = effective_seed(g, cfg);

    if (gen->parsed()) {
      if (gen_args.approach.empty() && gen_args.named.empty()) throw Error("generate needs --approach or --generator");
      const Dataset normals = load_normals(gen_data);
      const auto gc = resolve_generator(gen_args, cfg, "unifBox");
      emit_dataset(generate(normals, gc, RngStream(seed, hash_name("generate"))), g);
    } else if (flt->parsed()) {
      const Dataset normals = load_normals(flt_data);
      const Dataset arts = load_arts(flt_arts);
      if (!flt_named.empty()) {
        if (!cfg) throw Error("--filter needs --config");
        const FilterConfig base = find_named(cfg->filters, flt_named, "filter").config;
        // Command-line values override the named section.
        FilterConfig merged = base;
        if (o_max_rem->count()) merged.max_rem = fc.max_rem;
        if (o_committee->count()) merged.committee_size = fc.committee_size;
        if (o_target->count()) merged.target_count = fc.target_count;
        if (o_k->count()) merged.k = fc.k;
        if (o_dmax->count()) merged.dmax = fc.dmax;
        if (o_eps->count()) merged.epsilon = fc.epsilon;
        if (o_loops->count()) merged.max_loops = fc.max_loops;
        fc = merged;
      } else if (flt_kind.empty()) {
        throw Error("filter needs --kind or --filter");
      }
      if (!flt_kind.empty()) fc.kind = parse_filter_kind(flt_kind);
      if (!flt_keep.empty()) fc.keep_mode = parse_keep_mode(flt_keep);
      require(arts.dim() == normals.dim(), "artificial and genuine instances differ in dimensionality");

      ClassifierSpec spec;
      spec.kind = parse_classifier_kind(flt_classifier);
      RngStream rng(seed, hash_name("filter"));
      Dataset kept;
      switch (fc.kind) {
        case FilterKind::classifier_loop:
          kept = filter_classifier_loop(normals, arts, resolve_generator(flt_gen, cfg, "unifBox"), spec, fc, rng);
          break;
        case FilterKind::committee: kept = filter_query_by_committee(normals, arts, spec, fc, rng); break;
        case FilterKind::thinning: kept = filter_thinning(arts, fc.target_count); break;
        case FilterKind::kdmax: kept = filter_unsupervised_kdmax(normals, arts, fc); break;
        case FilterKind::distance: kept = filter_distance_threshold(normals, arts, fc.epsilon); break;
      }
      emit_dataset(kept, g);
    } else if (tune->parsed()) {
      const Dataset normals = load_normals(tune_data);
      Dataset arts;
      if (!tune_arts.empty()) {
        arts = load_arts(tune_arts);
      } else {
        arts = generate(normals, resolve_generator(tune_gen, cfg, "unifBox"), RngStream(seed, hash_name("tune")));
      }
      const auto result = tune_grid(normals, arts, parse_classifier_kind(tune_kind));
      const bool one_class = parse_classifier_kind(tune_kind) == ClassifierKind::one_class;
      std::string table = std::string(one_class ? "nu" : "lambda") + ",s,err_art,err_genu,err\n";
      for (const auto& e : result.evaluations)
        table += csv::format_double(e.capacity) + ',' + csv::format_double(e.s) + ',' + csv::format_double(e.err_art) +
                 ',' + csv::format_double(e.err_genu) + ',' + csv::format_double(e.err) + '\n';
      if (!g.out.empty() && g.out != "-") csv::write_file(g.out, table);
      else std::cout << table;
      std::cerr << "selected " << (one_class ? "nu" : "lambda") << "=" << result.capacity << " s=" << result.s
                << " err=" << result.err << " (" << result.evaluations.size() << " combinations)\n";
    } else if (bm->parsed()) {
      if (!cfg) throw Error("benchmark needs --config");
      bench::BenchConfig bc = *cfg;
      bc.seed = seed;
      if (app.count("--format")) bc.format = g.format;
      if (bm_threads) bc.threads = bm_threads;
      const std::string dir = g.out.empty() ? bc.output : g.out;
      const auto result = bench::run_workflow(bc);
      bench::write_benchmark_outputs(result, dir, bc.format);
      std::cerr << result.records.size() << " records written to " << dir;
      if (!result.failures.empty()) std::cerr << " (" << result.failures.size() << " failed, see failures.txt)";
      std::cerr << '\n';
    } else if (rp->parsed()) {
      const auto records = bench::load_results(rp_records);
      std::vector<bench::DatasetInfo> infos;
      if (!rp_datasets.empty()) infos = bench::dataset_info_from_csv(csv::read_file(rp_datasets), rp_datasets);
      const auto report = bench::report_summary(records, infos);
      if (!g.out.empty()) {
        std::filesystem::create_directories(g.out);
        bench::write_report(report, g.out);
      }
      std::cout << bench::render_report(report).text;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
