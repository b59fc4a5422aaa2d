#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cgclust/seed.hpp"

namespace cgclust {

/// A cluster label per sample. Labels range over {0..n_labels-1}; clusters
/// may be empty (e.g. a hyperplane rounding that puts every point on one
/// side still yields a two-label partition).
class Partition {
 public:
  Partition() = default;
  /// n_labels defaults to max(label) + 1. Throws std::invalid_argument on
  /// negative labels or labels >= n_labels.
  explicit Partition(std::vector<int> labels, std::optional<int> n_labels = std::nullopt);

  std::size_t size() const { return labels_.size(); }
  int n_labels() const { return n_labels_; }
  int label(std::size_t i) const { return labels_[i]; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<std::size_t>& counts() const { return counts_; }
  std::size_t count(int label) const { return counts_[static_cast<std::size_t>(label)]; }
  int n_nonempty() const;

  /// Relabels by first appearance and drops empty labels. Two partitions are
  /// equal up to relabeling iff their canonical forms are equal.
  Partition canonical() const;

  /// Joint refinement: points share a cluster iff they share one in both.
  static Partition cross(const Partition& a, const Partition& b);

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.n_labels_ == b.n_labels_ && a.labels_ == b.labels_;
  }

 private:
  std::vector<int> labels_;
  int n_labels_ = 0;
  std::vector<std::size_t> counts_;
};

/// Immutable N x d sample matrix (row-major) with optional ground truth.
class Dataset {
 public:
  Dataset() = default;
  /// Throws std::invalid_argument unless N >= 2, d >= 1, values.size() == N*d,
  /// every value is finite and ground truth (if any) has length N with every
  /// label in {0..l-1} occurring.
  Dataset(std::vector<double> values, std::size_t n_dims,
          std::optional<std::vector<int>> ground_truth = std::nullopt);

  std::size_t n_samples() const { return n_samples_; }
  std::size_t n_dims() const { return n_dims_; }
  std::span<const double> point(std::size_t i) const {
    return {values_.data() + i * n_dims_, n_dims_};
  }
  double at(std::size_t i, std::size_t c) const { return values_[i * n_dims_ + c]; }
  const std::vector<double>& values() const { return values_; }

  bool has_ground_truth() const { return ground_truth_.has_value(); }
  /// Throws std::logic_error when absent.
  Partition ground_truth() const;
  const std::optional<std::vector<int>>& ground_truth_labels() const { return ground_truth_; }

  Dataset with_values(std::vector<double> values) const {
    return Dataset(std::move(values), n_dims_, ground_truth_);
  }

 private:
  std::vector<double> values_;
  std::size_t n_samples_ = 0;
  std::size_t n_dims_ = 0;
  std::optional<std::vector<int>> ground_truth_;
};

/// Label column selected by header name or 0-based index.
using ColumnSelector = std::variant<std::string, std::size_t>;

/// Reads a comma-separated file. Non-label cells must parse as finite reals.
/// Label values are factorized to {0..l-1} in order of first appearance.
/// Throws IoError for unreadable files, ragged rows, non-numeric cells, an
/// unknown label column and empty files.
Dataset load_csv(const std::filesystem::path& path,
                 const std::optional<ColumnSelector>& label_column = std::nullopt,
                 bool has_header = true);

/// Writes points (and ground truth as a trailing "label" column, if present)
/// with round-trip precision and a header row.
void write_csv(const Dataset& ds, const std::filesystem::path& path);

/// Reads a labels file: one integer per line.
Partition load_labels(const std::filesystem::path& path);
void write_labels(const Partition& part, const std::filesystem::path& path);

/// Per-feature z-score using the sample standard deviation (N-1
/// denominator). Constant features map to all zeros.
Dataset standardize(const Dataset& ds);

/// Per-feature affine map onto [0, 1]. Constant features map to all zeros.
Dataset rescale_unit_range(const Dataset& ds);

enum class Scaling { none, standardize, unit_range };

Scaling parse_scaling(const std::string& name);
std::string to_string(Scaling s);
Dataset apply_scaling(const Dataset& ds, Scaling s);

inline constexpr double kDefaultJitter = 1e-10;

/// Adds independent uniform noise in [-magnitude, magnitude] to every
/// coordinate. Throws std::invalid_argument if magnitude <= 0.
Dataset jitter(const Dataset& ds, const SeedSpec& seed, double magnitude = kDefaultJitter);

}  // namespace cgclust
