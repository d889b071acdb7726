#pragma once

#include <filesystem>
#include <string>

#include "artout/bench/config.hpp"
#include "artout/bench/records.hpp"
#include "artout/bench/report.hpp"
#include "artout/bench/workflow.hpp"

namespace artout::bench {

/**
 * Writes records (CSV or JSON lines), datasets.csv, failures.txt and the
 * report files into `dir`, creating it if needed.
 */
inline void write_benchmark_outputs(const WorkflowResult& result, const std::string& dir, const std::string& format) {
  std::filesystem::create_directories(dir);
  persist_results(result.records, dir + "/" + record_file_name(format), format);
  csv::write_file(dir + "/datasets.csv", dataset_info_to_csv(result.datasets));
  std::string failures;
  for (const auto& f : result.failures) failures += f + '\n';
  csv::write_file(dir + "/failures.txt", failures);
  if (!result.records.empty()) write_report(report_summary(result.records, result.datasets), dir);
}

}  // namespace artout::bench
