#include "cgclust/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "cgclust/errors.hpp"

namespace cgclust {

Partition::Partition(std::vector<int> labels, std::optional<int> n_labels)
    : labels_(std::move(labels)) {
  int max_label = -1;
  for (int l : labels_) {
    if (l < 0) throw std::invalid_argument("Partition: negative label");
    max_label = std::max(max_label, l);
  }
  n_labels_ = n_labels.value_or(max_label + 1);
  if (n_labels_ < 1) n_labels_ = 1;
  if (max_label >= n_labels_) throw std::invalid_argument("Partition: label out of range");
  counts_.assign(static_cast<std::size_t>(n_labels_), 0);
  for (int l : labels_) ++counts_[static_cast<std::size_t>(l)];
}

int Partition::n_nonempty() const {
  return static_cast<int>(std::count_if(counts_.begin(), counts_.end(),
                                        [](std::size_t c) { return c > 0; }));
}

Partition Partition::canonical() const {
  std::vector<int> remap(static_cast<std::size_t>(n_labels_), -1);
  std::vector<int> out(labels_.size());
  int next = 0;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    int& m = remap[static_cast<std::size_t>(labels_[i])];
    if (m < 0) m = next++;
    out[i] = m;
  }
  return Partition(std::move(out), std::max(next, 1));
}

Partition Partition::cross(const Partition& a, const Partition& b) {
  if (a.size() != b.size()) throw std::invalid_argument("Partition::cross: size mismatch");
  std::vector<int> joint(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) joint[i] = a.label(i) * b.n_labels() + b.label(i);
  return Partition(std::move(joint), a.n_labels() * b.n_labels()).canonical();
}

Dataset::Dataset(std::vector<double> values, std::size_t n_dims,
                 std::optional<std::vector<int>> ground_truth)
    : values_(std::move(values)), n_dims_(n_dims), ground_truth_(std::move(ground_truth)) {
  if (n_dims_ == 0) throw std::invalid_argument("Dataset: dimension must be >= 1");
  if (values_.size() % n_dims_ != 0) throw std::invalid_argument("Dataset: ragged value buffer");
  n_samples_ = values_.size() / n_dims_;
  if (n_samples_ < 2) throw std::invalid_argument("Dataset: need at least 2 samples");
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("Dataset: non-finite coordinate");
  }
  if (ground_truth_) {
    if (ground_truth_->size() != n_samples_) {
      throw std::invalid_argument("Dataset: ground truth length mismatch");
    }
    const Partition p(*ground_truth_);
    if (p.n_nonempty() != p.n_labels()) {
      throw std::invalid_argument("Dataset: ground truth labels must be contiguous from 0");
    }
  }
}

Partition Dataset::ground_truth() const {
  if (!ground_truth_) throw std::logic_error("Dataset has no ground truth");
  return Partition(*ground_truth_);
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::optional<double> parse_real(const std::string& cell) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path,
                 const std::optional<ColumnSelector>& label_column, bool has_header) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path.string() + "'");

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header;
  std::string line;
  bool header_pending = has_header;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto cells = split_row(line);
    if (header_pending) {
      header = std::move(cells);
      header_pending = false;
      continue;
    }
    rows.push_back(std::move(cells));
  }
  if (rows.empty()) throw IoError("empty dataset in '" + path.string() + "'");

  const std::size_t width = rows.front().size();
  if (!header.empty() && header.size() != width) {
    throw IoError("ragged rows: header has " + std::to_string(header.size()) +
                  " columns, data has " + std::to_string(width));
  }

  std::optional<std::size_t> label_idx;
  if (label_column) {
    if (const auto* name = std::get_if<std::string>(&*label_column)) {
      const auto it = std::find(header.begin(), header.end(), *name);
      if (it == header.end()) throw IoError("label column '" + *name + "' not found");
      label_idx = static_cast<std::size_t>(it - header.begin());
    } else {
      label_idx = std::get<std::size_t>(*label_column);
      if (*label_idx >= width) throw IoError("label column index out of range");
    }
  }

  const std::size_t d = width - (label_idx ? 1 : 0);
  if (d == 0) throw IoError("no feature columns");

  std::vector<double> values;
  values.reserve(rows.size() * d);
  std::vector<int> labels;
  std::map<std::string, int> label_ids;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != width) {
      throw IoError("ragged rows: row " + std::to_string(r + 1) + " has " +
                    std::to_string(row.size()) + " columns, expected " + std::to_string(width));
    }
    for (std::size_t c = 0; c < width; ++c) {
      if (label_idx && c == *label_idx) {
        const auto [it, inserted] =
            label_ids.emplace(row[c], static_cast<int>(label_ids.size()));
        labels.push_back(it->second);
        continue;
      }
      const auto v = parse_real(row[c]);
      if (!v) {
        throw IoError("non-numeric cell '" + row[c] + "' at row " + std::to_string(r + 1) +
                      ", column " + std::to_string(c + 1));
      }
      values.push_back(*v);
    }
  }

  std::optional<std::vector<int>> truth;
  if (label_idx) truth = std::move(labels);
  try {
    return Dataset(std::move(values), d, std::move(truth));
  } catch (const std::invalid_argument& e) {
    throw IoError(std::string("invalid dataset: ") + e.what());
  }
}

void write_csv(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t c = 0; c < ds.n_dims(); ++c) out << (c ? "," : "") << "x" << c;
  if (ds.has_ground_truth()) out << ",label";
  out << '\n';
  for (std::size_t i = 0; i < ds.n_samples(); ++i) {
    for (std::size_t c = 0; c < ds.n_dims(); ++c) out << (c ? "," : "") << ds.at(i, c);
    if (ds.has_ground_truth()) out << ',' << (*ds.ground_truth_labels())[i];
    out << '\n';
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

Partition load_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto cell = trim(line);
    if (cell.empty()) continue;
    int v = 0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size() || v < 0) {
      throw IoError("bad label '" + cell + "' at line " + std::to_string(line_no));
    }
    labels.push_back(v);
  }
  if (labels.empty()) throw IoError("empty labels file '" + path.string() + "'");
  return Partition(std::move(labels));
}

void write_labels(const Partition& part, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  for (int l : part.labels()) out << l << '\n';
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

Dataset standardize(const Dataset& ds) {
  const std::size_t n = ds.n_samples();
  const std::size_t d = ds.n_dims();
  std::vector<double> out(ds.values());
  for (std::size_t c = 0; c < d; ++c) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += ds.at(i, c);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) ss += (ds.at(i, c) - mean) * (ds.at(i, c) - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    for (std::size_t i = 0; i < n; ++i) {
      out[i * d + c] = sd > 0.0 ? (ds.at(i, c) - mean) / sd : 0.0;
    }
  }
  return ds.with_values(std::move(out));
}

Dataset rescale_unit_range(const Dataset& ds) {
  const std::size_t n = ds.n_samples();
  const std::size_t d = ds.n_dims();
  std::vector<double> out(ds.values());
  for (std::size_t c = 0; c < d; ++c) {
    double lo = ds.at(0, c);
    double hi = lo;
    for (std::size_t i = 1; i < n; ++i) {
      lo = std::min(lo, ds.at(i, c));
      hi = std::max(hi, ds.at(i, c));
    }
    for (std::size_t i = 0; i < n; ++i) {
      out[i * d + c] = hi > lo ? (ds.at(i, c) - lo) / (hi - lo) : 0.0;
    }
  }
  return ds.with_values(std::move(out));
}

Scaling parse_scaling(const std::string& name) {
  if (name == "none") return Scaling::none;
  if (name == "standardize" || name == "zscore") return Scaling::standardize;
  if (name == "unit-range" || name == "minmax") return Scaling::unit_range;
  throw std::invalid_argument("unknown scaling '" + name + "' (none, standardize, unit-range)");
}

std::string to_string(Scaling s) {
  switch (s) {
    case Scaling::none: return "none";
    case Scaling::standardize: return "standardize";
    case Scaling::unit_range: return "unit-range";
  }
  return "?";
}

Dataset apply_scaling(const Dataset& ds, Scaling s) {
  switch (s) {
    case Scaling::standardize: return standardize(ds);
    case Scaling::unit_range: return rescale_unit_range(ds);
    case Scaling::none: break;
  }
  return ds;
}

Dataset jitter(const Dataset& ds, const SeedSpec& seed, double magnitude) {
  if (!(magnitude > 0.0)) throw std::invalid_argument("jitter: magnitude must be > 0");
  auto rng = seed.stream();
  std::vector<double> out(ds.values());
  for (double& v : out) v += rng.uniform(-magnitude, magnitude);
  return ds.with_values(std::move(out));
}

}  // namespace cgclust
