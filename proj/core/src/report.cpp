#include "cgclust/report.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "cgclust/errors.hpp"

namespace cgclust {

const Aggregate* ExperimentReport::find(const std::string& g, const std::string& field) const {
  for (const auto& a : aggregates) {
    if (a.group == g && a.field == field) return &a;
  }
  return nullptr;
}

std::vector<const Record*> ExperimentReport::group(const std::string& g) const {
  std::vector<const Record*> out;
  for (const auto& r : records) {
    if (r.group == g) out.push_back(&r);
  }
  return out;
}

std::vector<Aggregate> compute_aggregates(const std::vector<Record>& records) {
  std::vector<std::string> order;
  std::map<std::string, std::map<std::string, std::vector<double>>> by_group;
  for (const auto& r : records) {
    if (!by_group.contains(r.group)) order.push_back(r.group);
    auto& fields = by_group[r.group];
    for (const auto& [k, v] : r.values) {
      auto& column = fields[k];
      if (std::isfinite(v)) column.push_back(v);
    }
  }
  std::vector<Aggregate> out;
  for (const auto& g : order) {
    for (const auto& [field, xs] : by_group[g]) {
      Aggregate a{g, field, xs.size(), std::numeric_limits<double>::quiet_NaN(),
                  std::numeric_limits<double>::quiet_NaN()};
      if (!xs.empty()) {
        double s = 0.0;
        for (double x : xs) s += x;
        a.mean = s / static_cast<double>(xs.size());
        if (xs.size() > 1) {
          double ss = 0.0;
          for (double x : xs) ss += (x - a.mean) * (x - a.mean);
          a.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
        }
      }
      out.push_back(a);
    }
  }
  return out;
}

namespace {

nlohmann::json number(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json to_json(const ExperimentReport& report, bool include_timing) {
  nlohmann::json j;
  j["experiment"] = report.name;
  j["config"] = report.config;
  auto& records = j["records"] = nlohmann::json::array();
  for (const auto& r : report.records) {
    nlohmann::json values = nlohmann::json::object();
    for (const auto& [k, v] : r.values) values[k] = number(v);
    records.push_back({{"group", r.group}, {"repetition", r.repetition}, {"values", values}});
  }
  auto& aggregates = j["aggregates"] = nlohmann::json::array();
  for (const auto& a : report.aggregates) {
    aggregates.push_back({{"group", a.group},
                          {"field", a.field},
                          {"count", a.count},
                          {"mean", number(a.mean)},
                          {"sd", number(a.sd)}});
  }
  auto& curves = j["curves"] = nlohmann::json::array();
  for (const auto& c : report.curves) {
    curves.push_back({{"name", c.name},
                      {"file", report.name + "_" + c.name + ".csv"},
                      {"columns", c.columns}});
  }
  if (include_timing) j["duration_seconds"] = report.duration_seconds;
  return j;
}

void write_curve_csv(const Curve& curve, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t c = 0; c < curve.columns.size(); ++c) out << (c ? "," : "") << curve.columns[c];
  out << '\n';
  for (const auto& row : curve.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      const auto& cell = row[c];
      if (cell.is_string()) {
        out << cell.get<std::string>();
      } else if (cell.is_number_float()) {
        const double v = cell.get<double>();
        if (std::isfinite(v)) out << v;
      } else if (!cell.is_null()) {
        out << cell.dump();
      }
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<std::filesystem::path> write_report(const ExperimentReport& report,
                                                const std::filesystem::path& dir,
                                                bool include_timing) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  std::vector<std::filesystem::path> written;
  const auto json_path = dir / (report.name + ".json");
  std::ofstream out(json_path);
  if (!out) throw IoError("cannot write '" + json_path.string() + "'");
  out << to_json(report, include_timing).dump(2) << '\n';
  if (!out) throw IoError("failed writing '" + json_path.string() + "'");
  written.push_back(json_path);
  for (const auto& c : report.curves) {
    const auto p = dir / (report.name + "_" + c.name + ".csv");
    write_curve_csv(c, p);
    written.push_back(p);
  }
  return written;
}

}  // namespace cgclust
