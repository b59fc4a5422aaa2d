#include "cgclust/bench.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>

#include "cgclust/baselines.hpp"
#include "cgclust/data.hpp"
#include "cgclust/estimators.hpp"
#include "cgclust/metrics.hpp"
#include "cgclust/neighbors.hpp"
#include "cgclust/optimizer.hpp"
#include "cgclust/parallel.hpp"
#include "cgclust/synth.hpp"

namespace cgclust {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Reads parameters from the overrides, falling back to defaults, and records
// the effective value in the report config.
class Params {
 public:
  Params(const nlohmann::json& overrides, nlohmann::json& config)
      : overrides_(overrides), config_(config) {
    if (!overrides_.is_object()) throw std::invalid_argument("benchmark parameters must be an object");
  }

  template <typename T>
  T get(const std::string& key, const T& fallback) {
    used_.insert(key);
    T value = fallback;
    if (overrides_.contains(key)) {
      try {
        value = overrides_.at(key).get<T>();
      } catch (const nlohmann::json::exception&) {
        throw std::invalid_argument("benchmark parameter '" + key + "' has the wrong type");
      }
    }
    config_[key] = value;
    return value;
  }

  void finish() const {
    for (const auto& [key, value] : overrides_.items()) {
      if (!used_.contains(key)) throw std::invalid_argument("unknown benchmark parameter '" + key + "'");
    }
  }

 private:
  const nlohmann::json& overrides_;
  nlohmann::json& config_;
  std::set<std::string> used_;
};

std::string n_group(std::size_t n) { return "N=" + std::to_string(n); }

double bits(double nats) { return nats / std::numbers::ln2; }

Curve mean_curve(const ExperimentReport& r, const std::string& name, const std::string& x_column,
                 const std::vector<std::pair<std::string, double>>& groups,
                 const std::string& field) {
  Curve c{name, {x_column, "mean", "sd", "count"}, {}};
  for (const auto& [g, x] : groups) {
    const auto* a = r.find(g, field);
    if (!a) continue;
    c.rows.push_back({x, a->mean, a->sd, a->count});
  }
  return c;
}

ExperimentReport run_fig2(Params& p, std::uint64_t seed) {
  ExperimentReport r;
  const auto n_values = p.get<std::vector<std::size_t>>("n_values", {30, 60, 125, 250, 500, 1000, 2000});
  const auto reps = p.get<std::size_t>("repetitions", 50);
  const auto k = p.get<std::size_t>("k", kDefaultEntropyRank);
  TwoUniformSpec spec{p.get<double>("width_a", 1.0), p.get<double>("gap", 0.5),
                      p.get<double>("width_b", 2.0)};
  p.finish();
  spec.validate();

  r.records.resize(n_values.size() * reps);
  parallel_for(r.records.size(), [&](std::size_t slot) {
    const std::size_t s = slot / reps;
    const std::size_t rep = slot % reps;
    const auto ds = sample_two_uniform(spec, n_values[s], SeedSpec(seed).derive(s).derive(rep));
    const auto table = NeighborTable::build(ds);
    const auto natural = mi_objective(table, threshold_partition(ds, spec.natural_threshold()), k);
    const auto equal = mi_objective(table, threshold_partition(ds, spec.equal_mass_threshold()), k);
    Record rec{n_group(n_values[s]), rep, {}};
    rec.values["n"] = static_cast<double>(n_values[s]);
    rec.values["mi_natural_bits"] = natural ? bits(natural->value) : kNaN;
    rec.values["mi_equal_bits"] = equal ? bits(equal->value) : kNaN;
    rec.values["natural_preferred"] =
        natural && equal ? (natural->value > equal->value ? 1.0 : 0.0) : kNaN;
    r.records[slot] = std::move(rec);
  });
  r.aggregates = compute_aggregates(r.records);

  std::vector<std::pair<std::string, double>> groups;
  for (auto n : n_values) groups.emplace_back(n_group(n), static_cast<double>(n));
  r.curves.push_back(mean_curve(r, "natural", "n", groups, "mi_natural_bits"));
  r.curves.push_back(mean_curve(r, "equal", "n", groups, "mi_equal_bits"));
  r.curves.push_back(mean_curve(r, "natural_preferred", "n", groups, "natural_preferred"));
  return r;
}

ExperimentReport run_fig4(Params& p, std::uint64_t seed) {
  ExperimentReport r;
  const auto n_values = p.get<std::vector<std::size_t>>("n_values", {30, 90});
  const auto reps = p.get<std::size_t>("repetitions", 50);
  const auto k = p.get<std::size_t>("k", kDefaultUncertaintyRank);
  TwoUniformSpec spec{p.get<double>("width_a", 1.0), p.get<double>("gap", 0.5),
                      p.get<double>("width_b", 2.0)};
  p.finish();
  spec.validate();
  const double gap_lo = spec.width_a;
  const double gap_hi = spec.width_a + spec.gap;

  r.records.resize(n_values.size() * reps);
  std::vector<ScanResult> first_scans(n_values.size());
  parallel_for(r.records.size(), [&](std::size_t slot) {
    const std::size_t s = slot / reps;
    const std::size_t rep = slot % reps;
    const auto ds = sample_two_uniform(spec, n_values[s], SeedSpec(seed).derive(s).derive(rep));
    auto scan = scan_threshold(ds, ObjectiveKind::cvr, k);
    double in_min = std::numeric_limits<double>::infinity();
    double out_min = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < scan.parameters.size(); ++g) {
      if (!scan.valid[g]) continue;
      const double t = scan.parameters[g];
      double& target = (t > gap_lo && t < gap_hi) ? in_min : out_min;
      target = std::min(target, scan.scores[g]);
    }
    Record rec{n_group(n_values[s]), rep, {}};
    rec.values["n"] = static_cast<double>(n_values[s]);
    rec.values["best_threshold"] = scan.best_index ? scan.best_parameter : kNaN;
    rec.values["best_in_gap"] =
        scan.best_index ? (scan.best_parameter > gap_lo && scan.best_parameter < gap_hi ? 1.0 : 0.0)
                        : kNaN;
    const bool both = std::isfinite(in_min) && std::isfinite(out_min);
    rec.values["min_cvr_in_gap"] = std::isfinite(in_min) ? in_min : kNaN;
    rec.values["min_cvr_out_of_gap"] = std::isfinite(out_min) ? out_min : kNaN;
    rec.values["separation"] = both ? out_min / in_min : kNaN;
    r.records[slot] = std::move(rec);
    if (rep == 0) first_scans[s] = std::move(scan);
  });
  r.aggregates = compute_aggregates(r.records);

  for (std::size_t s = 0; s < n_values.size(); ++s) {
    Curve c{"scan_n" + std::to_string(n_values[s]), {"threshold", "cvr", "valid"}, {}};
    const auto& scan = first_scans[s];
    for (std::size_t g = 0; g < scan.parameters.size(); ++g) {
      c.rows.push_back({scan.parameters[g], scan.valid[g] ? scan.scores[g] : kNaN,
                        scan.valid[g] ? 1 : 0});
    }
    r.curves.push_back(std::move(c));
  }
  Curve summary{"summary", {"n", "in_gap_fraction", "mean_separation"}, {}};
  for (auto n : n_values) {
    const auto* frac = r.find(n_group(n), "best_in_gap");
    const auto* sep = r.find(n_group(n), "separation");
    summary.rows.push_back({static_cast<double>(n), frac ? frac->mean : kNaN, sep ? sep->mean : kNaN});
  }
  r.curves.push_back(std::move(summary));
  return r;
}

struct RadialSetting {
  std::string group;
  double x = 0.0;  // plotted abscissa
  std::size_t n = 0;
  DiskAnnulusSpec spec;
};

void run_radial(ExperimentReport& r, const std::vector<RadialSetting>& settings, std::size_t reps,
                std::size_t n_radii, std::size_t k_cvr, std::size_t k_mi, std::uint64_t seed) {
  r.records.resize(settings.size() * reps);
  parallel_for(r.records.size(), [&](std::size_t slot) {
    const std::size_t s = slot / reps;
    const std::size_t rep = slot % reps;
    const auto& st = settings[s];
    const auto ds = sample_disk_annulus(st.spec, st.n, SeedSpec(seed).derive(s).derive(rep));
    const auto table = NeighborTable::build(ds);
    const auto grid = radius_grid(st.spec.r_c, n_radii);
    Record rec{st.group, rep, {}};
    rec.values["n"] = static_cast<double>(st.n);
    rec.values["r_a"] = st.spec.r_a;
    rec.values["r_b"] = st.spec.r_b;
    const std::pair<ObjectiveKind, std::size_t> objectives[] = {
        {ObjectiveKind::cvr, k_cvr}, {ObjectiveKind::mi, k_mi}, {ObjectiveKind::nic, 0}};
    for (const auto& [kind, k] : objectives) {
      const auto scan = scan_radius(ds, table, kind, grid, k);
      rec.values["rstar_" + std::string(to_string(kind))] =
          scan.best_index ? scan.best_parameter : kNaN;
    }
    r.records[slot] = std::move(rec);
  });
  r.aggregates = compute_aggregates(r.records);
}

ExperimentReport run_fig6(Params& p, std::uint64_t seed) {
  ExperimentReport r;
  const auto n_values = p.get<std::vector<std::size_t>>("n_values", {128, 256, 512, 1024, 2048});
  const auto reps = p.get<std::size_t>("repetitions", 20);
  const auto n_radii = p.get<std::size_t>("radii", 200);
  DiskAnnulusSpec spec{p.get<double>("r_a", 1.1), p.get<double>("r_b", 1.4), p.get<double>("r_c", 3.5)};
  const auto k_cvr = p.get<std::size_t>("k_cvr", kDefaultUncertaintyRank);
  const auto k_mi = p.get<std::size_t>("k_mi", kDefaultEntropyRank);
  p.finish();
  spec.validate();
  r.config["reference_repetitions"] = 100;
  r.config["equal_mass_radius"] = spec.equal_mass_radius();

  std::vector<RadialSetting> settings;
  std::vector<std::pair<std::string, double>> groups;
  for (auto n : n_values) {
    settings.push_back({n_group(n), static_cast<double>(n), n, spec});
    groups.emplace_back(n_group(n), static_cast<double>(n));
  }
  run_radial(r, settings, reps, n_radii, k_cvr, k_mi, seed);
  for (const char* obj : {"cvr", "mi", "nic"}) {
    r.curves.push_back(mean_curve(r, std::string("rstar_") + obj, "n", groups,
                                  std::string("rstar_") + obj));
  }
  return r;
}

ExperimentReport run_fig7(Params& p, std::uint64_t seed) {
  ExperimentReport r;
  const auto ra_values = p.get<std::vector<double>>("r_a_values", {0.5, 0.8, 1.1, 1.4, 1.7, 2.0, 2.3, 2.6});
  const auto n = p.get<std::size_t>("n", 2048);
  const auto reps = p.get<std::size_t>("repetitions", 20);
  const auto n_radii = p.get<std::size_t>("radii", 200);
  const auto r_c = p.get<double>("r_c", 3.5);
  const auto gap = p.get<double>("gap", 0.3);
  const auto k_cvr = p.get<std::size_t>("k_cvr", kDefaultUncertaintyRank);
  const auto k_mi = p.get<std::size_t>("k_mi", kDefaultEntropyRank);
  p.finish();

  std::vector<RadialSetting> settings;
  std::vector<std::pair<std::string, double>> groups;
  Curve correct{"correct_range", {"r_a", "lo", "hi"}, {}};
  for (double ra : ra_values) {
    DiskAnnulusSpec spec{ra, ra + gap, r_c};
    spec.validate();
    std::string g = "r_a=" + nlohmann::json(ra).dump();
    settings.push_back({g, ra, n, spec});
    groups.emplace_back(g, ra);
    correct.rows.push_back({ra, spec.r_a, spec.r_b});
  }
  run_radial(r, settings, reps, n_radii, k_cvr, k_mi, seed);
  for (const char* obj : {"cvr", "mi", "nic"}) {
    r.curves.push_back(mean_curve(r, std::string("rstar_") + obj, "r_a", groups,
                                  std::string("rstar_") + obj));
  }
  r.curves.push_back(std::move(correct));
  return r;
}

ExperimentReport run_uci(Params& p, std::uint64_t seed) {
  ExperimentReport r;
  const auto dir = p.get<std::string>("data_dir", "data");
  const auto names = p.get<std::vector<std::string>>("datasets", {"iris", "wine", "glass"});
  const auto targets = p.get<std::map<std::string, int>>(
      "clusters", {{"iris", 3}, {"wine", 3}, {"glass", 6}});
  const auto label_column = p.get<std::string>("label_column", "class");
  const auto scaling = parse_scaling(p.get<std::string>("scaling", "unit-range"));
  const auto jitter_mag = p.get<double>("jitter", kDefaultJitter);
  const auto reps = p.get<std::size_t>("repetitions", 1);
  ClusterConfig cc;
  cc.k_max = p.get<std::size_t>("k_max", kDefaultKMax);
  cc.beta = p.get<double>("beta", default_beta(cc.k_max));
  cc.n_candidates = p.get<std::size_t>("candidates", kDefaultCandidates);
  cc.rank = p.get<std::size_t>("rank", 0);
  cc.k = p.get<std::size_t>("k", kDefaultUncertaintyRank);
  p.finish();
  cc.jitter = 0.0;

  std::vector<Dataset> data;
  std::vector<int> target;
  for (const auto& name : names) {
    const auto path = std::filesystem::path(dir) / (name + ".csv");
    data.push_back(apply_scaling(load_csv(path, ColumnSelector{label_column}), scaling));
    const auto it = targets.find(name);
    target.push_back(it != targets.end() ? it->second : data.back().ground_truth().n_nonempty());
  }

  r.records.resize(names.size() * reps);
  parallel_for(r.records.size(), [&](std::size_t slot) {
    const std::size_t s = slot / reps;
    const std::size_t rep = slot % reps;
    const SeedSpec run_seed = SeedSpec(seed).derive(s).derive(rep);
    const auto ds = jitter_mag > 0.0 ? jitter(data[s], run_seed.derive(0), jitter_mag) : data[s];
    const auto table = NeighborTable::build(ds);
    const auto truth = ds.ground_truth();
    ClusterConfig local = cc;
    local.seed = run_seed.derive(1).key();
    const auto result = cluster(ds, target[s], local);
    Record rec{names[s], rep, {}};
    rec.values["n"] = static_cast<double>(ds.n_samples());
    rec.values["dim"] = static_cast<double>(ds.n_dims());
    rec.values["clusters"] = target[s];
    rec.values["rand_index"] = rand_index(result.partition, truth);
    rec.values["cvr_found"] = result.cvr.value;
    rec.values["cvr_ground_truth"] = cvr(table, truth).value;
    rec.values["rand_index_singletons"] = rand_index(singleton_partition(ds.n_samples()), truth);
    rec.values["exhausted"] = result.exhausted ? 1.0 : 0.0;
    r.records[slot] = std::move(rec);
  });
  r.aggregates = compute_aggregates(r.records);

  Curve table1{"table",
               {"dataset", "n", "clusters", "dim", "rand_index", "cvr_found", "cvr_ground_truth"},
               {}};
  for (const auto& name : names) {
    auto mean = [&](const char* f) {
      const auto* a = r.find(name, f);
      return a ? a->mean : kNaN;
    };
    table1.rows.push_back({name, mean("n"), mean("clusters"), mean("dim"), mean("rand_index"),
                           mean("cvr_found"), mean("cvr_ground_truth")});
  }
  r.curves.push_back(std::move(table1));
  return r;
}

}  // namespace

const std::vector<std::string>& benchmark_names() {
  static const std::vector<std::string> names{"fig2", "fig4", "fig6", "fig7", "uci"};
  return names;
}

ExperimentReport run_benchmark(const std::string& name, const nlohmann::json& overrides,
                               std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  nlohmann::json config = nlohmann::json::object();
  Params p(overrides, config);
  config["seed"] = seed;

  ExperimentReport r;
  if (name == "fig2") {
    r = run_fig2(p, seed);
  } else if (name == "fig4") {
    r = run_fig4(p, seed);
  } else if (name == "fig6") {
    r = run_fig6(p, seed);
  } else if (name == "fig7") {
    r = run_fig7(p, seed);
  } else if (name == "uci") {
    r = run_uci(p, seed);
  } else {
    throw std::invalid_argument("unknown experiment '" + name +
                                "' (valid: fig2, fig4, fig6, fig7, uci)");
  }
  r.name = name;
  for (auto& [k, v] : r.config.items()) config[k] = v;
  r.config = std::move(config);
  r.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace cgclust
