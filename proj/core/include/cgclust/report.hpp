#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace cgclust {

/// One repetition of one experimental setting.
struct Record {
  std::string group;  // e.g. "N=2048" or "iris"
  std::size_t repetition = 0;
  std::map<std::string, double> values;
};

/// Mean and sample standard deviation of one field within one group,
/// over the finite values only.
struct Aggregate {
  std::string group;
  std::string field;
  std::size_t count = 0;
  double mean = 0.0;
  double sd = 0.0;
};

/// Plot data for one curve; written as one CSV file.
struct Curve {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;
};

struct ExperimentReport {
  std::string name;
  nlohmann::json config;
  std::vector<Record> records;
  std::vector<Aggregate> aggregates;
  std::vector<Curve> curves;
  double duration_seconds = 0.0;

  /// nullptr if absent.
  const Aggregate* find(const std::string& group, const std::string& field) const;
  std::vector<const Record*> group(const std::string& group) const;
};

/// Groups in order of first appearance, fields in lexicographic order.
std::vector<Aggregate> compute_aggregates(const std::vector<Record>& records);

/// Keys: experiment, config, records[{group, repetition, values}],
/// aggregates[{group, field, count, mean, sd}], curves[{name, columns}] and,
/// when include_timing is set, duration_seconds. Non-finite values become null.
nlohmann::json to_json(const ExperimentReport& report, bool include_timing = false);

/// Writes <dir>/<name>.json and <dir>/<name>_<curve>.csv for every curve.
/// Returns the paths written.
std::vector<std::filesystem::path> write_report(const ExperimentReport& report,
                                                const std::filesystem::path& dir,
                                                bool include_timing = false);

void write_curve_csv(const Curve& curve, const std::filesystem::path& path);

}  // namespace cgclust
