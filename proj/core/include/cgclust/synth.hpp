#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "cgclust/baselines.hpp"
#include "cgclust/data.hpp"
#include "cgclust/seed.hpp"

namespace cgclust {

/// Two uniform segments on the line: [0, width_a] and
/// [width_a + gap, width_a + gap + width_b], with mass proportional to width.
struct TwoUniformSpec {
  double width_a = 1.0;
  double gap = 0.5;
  double width_b = 2.0;

  void validate() const;
  double first_mass() const { return width_a / (width_a + width_b); }
  /// Threshold in the middle of the gap (label 0 = first segment).
  double natural_threshold() const { return width_a + 0.5 * gap; }
  /// Point where the CDF reaches 1/2.
  double equal_mass_threshold() const;
};

/// Uniform density on disk(r_a) union annulus(r_b, r_c).
struct DiskAnnulusSpec {
  double r_a = 1.1;
  double r_b = 1.4;
  double r_c = 3.5;

  void validate() const;
  double disk_mass() const { return r_a * r_a / (r_a * r_a + r_c * r_c - r_b * r_b); }
  /// Radius splitting the probability mass in half.
  double equal_mass_radius() const;
};

/// Ground truth: 0 for the first segment, 1 for the second.
Dataset sample_two_uniform(const TwoUniformSpec& spec, std::size_t n, const SeedSpec& seed);
/// Ground truth: 0 for the disk, 1 for the annulus.
Dataset sample_disk_annulus(const DiskAnnulusSpec& spec, std::size_t n, const SeedSpec& seed);

/// Label 0 iff x <= t. Throws std::invalid_argument unless d == 1.
Partition threshold_partition(const Dataset& ds, double t);
/// Label 0 iff |x|_2 <= r. Throws std::invalid_argument unless d == 2.
Partition radial_partition(const Dataset& ds, double r);

struct ScanResult {
  ObjectiveKind objective = ObjectiveKind::cvr;
  std::vector<double> parameters;
  /// NaN where the partition is invalid for the objective.
  std::vector<double> scores;
  std::vector<bool> valid;
  /// Index of the first optimal scanned value; nullopt if nothing was valid.
  std::optional<std::size_t> best_index;
  /// Best parameter. When a contiguous run of scanned values yields the
  /// same optimal partition, the midpoint of that run.
  double best_parameter = 0.0;
  double best_score = 0.0;
};

/// Objective at every midpoint between consecutive sorted samples (1D).
ScanResult scan_threshold(const Dataset& ds, const NeighborTable& table, ObjectiveKind objective,
                          std::size_t k);
ScanResult scan_threshold(const Dataset& ds, ObjectiveKind objective, std::size_t k);

/// Objective at every radius in `radii` (2D).
ScanResult scan_radius(const Dataset& ds, const NeighborTable& table, ObjectiveKind objective,
                       std::span<const double> radii, std::size_t k);
ScanResult scan_radius(const Dataset& ds, ObjectiveKind objective, std::span<const double> radii,
                       std::size_t k);

/// `count` evenly spaced radii on [0, r_max], endpoints included.
std::vector<double> radius_grid(double r_max, std::size_t count = 200);

/// Columns: parameter,score,valid.
void write_scan_csv(const ScanResult& scan, const std::filesystem::path& path);

}  // namespace cgclust
