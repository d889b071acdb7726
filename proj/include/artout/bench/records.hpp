#pragma once

#include <cmath>
#include <cstdint>
#include <charconv>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "artout/csv.hpp"

namespace artout::bench {

inline constexpr std::string_view kTrueOuts = "trueOuts";

struct EvalRecord {
  std::string dataset;
  std::string classifier;
  std::string train_gen;
  std::string test_outs;
  std::size_t rep = 0;
  std::uint64_t seed = 0;
  std::optional<double> mcc;  // empty when the cell failed

  bool operator==(const EvalRecord&) const = default;
};

inline constexpr std::string_view kRecordHeader = "dataset,classifier,trainGen,testOuts,rep,seed,mcc";

inline std::string format_mcc(const std::optional<double>& v) {
  if (!v) return "NA";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", *v);
  return buf;
}

inline void check_field(std::string_view s) {
  if (s.find_first_of(",\n\r\"") != std::string_view::npos)
    throw Error("record field '" + std::string(s) + "' contains a comma, quote or newline");
}

inline std::string records_to_csv(const std::vector<EvalRecord>& records) {
  std::string out(kRecordHeader);
  out += '\n';
  for (const auto& r : records) {
    for (auto f : {std::string_view(r.dataset), std::string_view(r.classifier), std::string_view(r.train_gen),
                   std::string_view(r.test_outs)}) {
      check_field(f);
      out += f;
      out += ',';
    }
    out += std::to_string(r.rep) + ',' + std::to_string(r.seed) + ',' + format_mcc(r.mcc) + '\n';
  }
  return out;
}

inline std::vector<EvalRecord> records_from_csv(std::string_view text, const std::string& source = "<records>") {
  const auto rows = csv::lines(text);
  if (rows.empty() || csv::trim(rows[0]) != kRecordHeader)
    throw ParseError(source + ": expected header '" + std::string(kRecordHeader) + "'");
  std::vector<EvalRecord> out;
  for (std::size_t li = 1; li < rows.size(); ++li) {
    if (csv::trim(rows[li]).empty()) continue;
    const std::string where = source + ":" + std::to_string(li + 1);
    const auto f = csv::split_line(rows[li]);
    if (f.size() != 7) throw ParseError(where + ": expected 7 fields, got " + std::to_string(f.size()));
    EvalRecord r{std::string(csv::trim(f[0])), std::string(csv::trim(f[1])), std::string(csv::trim(f[2])),
                 std::string(csv::trim(f[3])), 0, 0, std::nullopt};
    auto parse_u64 = [&](std::string_view s, const char* what) {
      std::uint64_t v = 0;
      s = csv::trim(s);
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size())
        throw ParseError(where + ": invalid " + what + " '" + std::string(s) + "'");
      return v;
    };
    r.rep = static_cast<std::size_t>(parse_u64(f[4], "rep"));
    r.seed = parse_u64(f[5], "seed");
    const auto m = csv::trim(f[6]);
    if (m != "NA") {
      double v = 0.0;
      if (!csv::parse_double(m, v) || !(v >= -1.0 && v <= 1.0))
        throw ParseError(where + ": invalid mcc '" + std::string(m) + "'");
      r.mcc = v;
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline std::string records_to_jsonl(const std::vector<EvalRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["dataset"] = r.dataset;
    j["classifier"] = r.classifier;
    j["trainGen"] = r.train_gen;
    j["testOuts"] = r.test_outs;
    j["rep"] = r.rep;
    j["seed"] = r.seed;
    j["mcc"] = r.mcc ? nlohmann::ordered_json(*r.mcc) : nlohmann::ordered_json(nullptr);
    out += j.dump();
    out += '\n';
  }
  return out;
}

inline std::vector<EvalRecord> records_from_jsonl(std::string_view text, const std::string& source = "<records>") {
  std::vector<EvalRecord> out;
  std::size_t lineno = 0;
  for (auto line : csv::lines(text)) {
    ++lineno;
    if (csv::trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      EvalRecord r;
      r.dataset = j.at("dataset").get<std::string>();
      r.classifier = j.at("classifier").get<std::string>();
      r.train_gen = j.at("trainGen").get<std::string>();
      r.test_outs = j.at("testOuts").get<std::string>();
      r.rep = j.at("rep").get<std::size_t>();
      r.seed = j.at("seed").get<std::uint64_t>();
      if (!j.at("mcc").is_null()) r.mcc = j.at("mcc").get<double>();
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

inline std::string record_file_name(const std::string& format) {
  return format == "jsonl" ? "records.jsonl" : "records.csv";
}

inline void persist_results(const std::vector<EvalRecord>& records, const std::string& path,
                            const std::string& format) {
  if (format == "csv") csv::write_file(path, records_to_csv(records));
  else if (format == "jsonl") csv::write_file(path, records_to_jsonl(records));
  else throw Error("unknown record format '" + format + "'");
}

// Format from the extension: .jsonl is JSON lines, anything else CSV.
inline std::vector<EvalRecord> load_results(const std::string& path) {
  const auto text = csv::read_file(path);
  if (path.size() >= 6 && path.ends_with(".jsonl")) return records_from_jsonl(text, path);
  return records_from_csv(text, path);
}

// Per-dataset size after preprocessing, used by the report.
struct DatasetInfo {
  std::string name;
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t outliers = 0;
};

inline std::string dataset_info_to_csv(const std::vector<DatasetInfo>& infos) {
  std::string out = "dataset,n,d,outliers\n";
  for (const auto& i : infos) {
    check_field(i.name);
    out += i.name + ',' + std::to_string(i.n) + ',' + std::to_string(i.d) + ',' + std::to_string(i.outliers) + '\n';
  }
  return out;
}

inline std::vector<DatasetInfo> dataset_info_from_csv(std::string_view text, const std::string& source) {
  const auto rows = csv::lines(text);
  if (rows.empty() || csv::trim(rows[0]) != "dataset,n,d,outliers")
    throw ParseError(source + ": expected header 'dataset,n,d,outliers'");
  std::vector<DatasetInfo> out;
  for (std::size_t li = 1; li < rows.size(); ++li) {
    if (csv::trim(rows[li]).empty()) continue;
    const auto f = csv::split_line(rows[li]);
    if (f.size() != 4) throw ParseError(source + ":" + std::to_string(li + 1) + ": expected 4 fields");
    DatasetInfo d{std::string(csv::trim(f[0]))};
    double v[3];
    for (int k = 0; k < 3; ++k)
      if (!csv::parse_double(csv::trim(f[static_cast<std::size_t>(k + 1)]), v[k]) || v[k] < 0)
        throw ParseError(source + ":" + std::to_string(li + 1) + ": invalid count");
    d.n = static_cast<std::size_t>(v[0]);
    d.d = static_cast<std::size_t>(v[1]);
    d.outliers = static_cast<std::size_t>(v[2]);
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace artout::bench
