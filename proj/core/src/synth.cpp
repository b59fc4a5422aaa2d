#include "cgclust/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "cgclust/errors.hpp"
#include "cgclust/neighbors.hpp"
#include "cgclust/parallel.hpp"

namespace cgclust {

void TwoUniformSpec::validate() const {
  if (!(width_a > 0.0) || !(width_b > 0.0) || !(gap >= 0.0) || !std::isfinite(width_a + gap + width_b)) {
    throw std::invalid_argument("TwoUniformSpec: need width_a > 0, width_b > 0, gap >= 0");
  }
}

double TwoUniformSpec::equal_mass_threshold() const {
  const double total = width_a + width_b;
  if (width_a >= 0.5 * total) return 0.5 * total;
  return width_a + gap + (0.5 * total - width_a);
}

void DiskAnnulusSpec::validate() const {
  if (!(r_a > 0.0 && r_a < r_b && r_b < r_c) || !std::isfinite(r_c)) {
    throw std::invalid_argument("DiskAnnulusSpec: need 0 < r_a < r_b < r_c");
  }
}

double DiskAnnulusSpec::equal_mass_radius() const {
  const double half = 0.5 * (r_a * r_a + r_c * r_c - r_b * r_b);
  if (r_a * r_a >= half) return std::sqrt(half);
  return std::sqrt(half - r_a * r_a + r_b * r_b);
}

Dataset sample_two_uniform(const TwoUniformSpec& spec, std::size_t n, const SeedSpec& seed) {
  spec.validate();
  if (n < 2) throw std::invalid_argument("sample_two_uniform: need n >= 2");
  auto rng = seed.stream();
  std::vector<double> x(n);
  std::vector<int> truth(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool first = rng.uniform() < spec.first_mass();
    const double u = rng.uniform();
    x[i] = first ? u * spec.width_a : spec.width_a + spec.gap + u * spec.width_b;
    truth[i] = first ? 0 : 1;
  }
  // Ground truth must use contiguous labels; a sample may miss one segment.
  const bool both = std::count(truth.begin(), truth.end(), 0) % static_cast<long>(n) != 0;
  if (!both) return Dataset(std::move(x), 1);
  return Dataset(std::move(x), 1, std::move(truth));
}

Dataset sample_disk_annulus(const DiskAnnulusSpec& spec, std::size_t n, const SeedSpec& seed) {
  spec.validate();
  if (n < 2) throw std::invalid_argument("sample_disk_annulus: need n >= 2");
  auto rng = seed.stream();
  std::vector<double> xy(2 * n);
  std::vector<int> truth(n);
  const double ra2 = spec.r_a * spec.r_a;
  const double rb2 = spec.r_b * spec.r_b;
  const double rc2 = spec.r_c * spec.r_c;
  for (std::size_t i = 0; i < n; ++i) {
    const bool disk = rng.uniform() < spec.disk_mass();
    const double u = rng.uniform();
    const double r = disk ? std::sqrt(u * ra2) : std::sqrt(rb2 + u * (rc2 - rb2));
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    xy[2 * i] = r * std::cos(theta);
    xy[2 * i + 1] = r * std::sin(theta);
    truth[i] = disk ? 0 : 1;
  }
  const bool both = std::count(truth.begin(), truth.end(), 0) % static_cast<long>(n) != 0;
  if (!both) return Dataset(std::move(xy), 2);
  return Dataset(std::move(xy), 2, std::move(truth));
}

Partition threshold_partition(const Dataset& ds, double t) {
  if (ds.n_dims() != 1) throw std::invalid_argument("threshold_partition: dataset must be 1D");
  std::vector<int> labels(ds.n_samples());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = ds.at(i, 0) <= t ? 0 : 1;
  return Partition(std::move(labels), 2);
}

Partition radial_partition(const Dataset& ds, double r) {
  if (ds.n_dims() != 2) throw std::invalid_argument("radial_partition: dataset must be 2D");
  std::vector<int> labels(ds.n_samples());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    labels[i] = std::hypot(ds.at(i, 0), ds.at(i, 1)) <= r ? 0 : 1;
  }
  return Partition(std::move(labels), 2);
}

namespace {

// Evaluates each partition once; consecutive identical partitions reuse the
// previous score.
ScanResult run_scan(const NeighborTable& table, ObjectiveKind objective, std::size_t k,
                    std::vector<double> params, const std::vector<Partition>& parts) {
  const std::size_t m = params.size();
  std::vector<std::size_t> owner(m);
  for (std::size_t g = 0; g < m; ++g) {
    owner[g] = (g > 0 && parts[g] == parts[g - 1]) ? owner[g - 1] : g;
  }

  std::vector<std::optional<Score>> raw(m);
  std::vector<std::size_t> distinct;
  for (std::size_t g = 0; g < m; ++g) {
    if (owner[g] == g) distinct.push_back(g);
  }
  parallel_for(distinct.size(), [&](std::size_t u) {
    const std::size_t g = distinct[u];
    raw[g] = evaluate_objective(objective, table, parts[g], k);
  });

  ScanResult out;
  out.objective = objective;
  out.parameters = std::move(params);
  out.scores.assign(m, std::numeric_limits<double>::quiet_NaN());
  out.valid.assign(m, false);
  const bool lower = minimizes(objective);
  for (std::size_t g = 0; g < m; ++g) {
    const auto& s = raw[owner[g]];
    if (!s) continue;
    out.scores[g] = s->value;
    out.valid[g] = true;
    if (!out.best_index || (lower ? s->value < out.best_score : s->value > out.best_score)) {
      out.best_index = g;
      out.best_score = s->value;
    }
  }
  if (out.best_index) {
    std::size_t last = *out.best_index;
    while (last + 1 < m && owner[last + 1] == owner[*out.best_index]) ++last;
    out.best_parameter = 0.5 * (out.parameters[*out.best_index] + out.parameters[last]);
  }
  return out;
}

}  // namespace

ScanResult scan_threshold(const Dataset& ds, const NeighborTable& table, ObjectiveKind objective,
                          std::size_t k) {
  if (ds.n_dims() != 1) throw std::invalid_argument("scan_threshold: dataset must be 1D");
  if (ds.n_samples() < 4) throw std::invalid_argument("scan_threshold: need at least 4 samples");
  std::vector<double> xs(ds.values());
  std::sort(xs.begin(), xs.end());
  std::vector<double> params;
  std::vector<Partition> parts;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double t = 0.5 * (xs[i] + xs[i + 1]);
    params.push_back(t);
    parts.push_back(threshold_partition(ds, t));
  }
  return run_scan(table, objective, k, std::move(params), parts);
}

ScanResult scan_threshold(const Dataset& ds, ObjectiveKind objective, std::size_t k) {
  return scan_threshold(ds, NeighborTable::build(ds), objective, k);
}

ScanResult scan_radius(const Dataset& ds, const NeighborTable& table, ObjectiveKind objective,
                       std::span<const double> radii, std::size_t k) {
  if (ds.n_dims() != 2) throw std::invalid_argument("scan_radius: dataset must be 2D");
  if (radii.empty()) throw std::invalid_argument("scan_radius: empty radius grid");
  std::vector<Partition> parts;
  parts.reserve(radii.size());
  for (double r : radii) parts.push_back(radial_partition(ds, r));
  return run_scan(table, objective, k, std::vector<double>(radii.begin(), radii.end()), parts);
}

ScanResult scan_radius(const Dataset& ds, ObjectiveKind objective, std::span<const double> radii,
                       std::size_t k) {
  return scan_radius(ds, NeighborTable::build(ds), objective, radii, k);
}

std::vector<double> radius_grid(double r_max, std::size_t count) {
  if (count == 0 || !(r_max > 0.0)) throw std::invalid_argument("radius_grid: bad arguments");
  if (count == 1) return {r_max};
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i) {
    g[i] = r_max * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return g;
}

void write_scan_csv(const ScanResult& scan, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "parameter,score,valid\n";
  for (std::size_t g = 0; g < scan.parameters.size(); ++g) {
    out << scan.parameters[g] << ',';
    if (scan.valid[g]) out << scan.scores[g];
    out << ',' << (scan.valid[g] ? 1 : 0) << '\n';
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace cgclust
