#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <stdexcept>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cgclust/baselines.hpp"
#include "cgclust/bench.hpp"
#include "cgclust/data.hpp"
#include "cgclust/errors.hpp"
#include "cgclust/estimators.hpp"
#include "cgclust/metrics.hpp"
#include "cgclust/neighbors.hpp"
#include "cgclust/optimizer.hpp"
#include "cgclust/parallel.hpp"
#include "cgclust/report.hpp"
#include "cgclust/synth.hpp"

namespace cgclust::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InputOptions {
  std::string path;
  std::string label_column;
  bool no_header = false;
  std::string scaling;
};

void add_input_options(CLI::App* app, InputOptions& in, const std::string& default_scaling) {
  in.scaling = default_scaling;
  app->add_option("-i,--input", in.path, "Input CSV")->required();
  app->add_option("--label-column", in.label_column,
                  "Ground-truth column (name, or 0-based index with --no-header)");
  app->add_flag("--no-header", in.no_header, "Input has no header row");
  app->add_option("--scaling", in.scaling, "none | standardize | unit-range")
      ->capture_default_str();
}

Dataset load_input(const InputOptions& in) {
  std::optional<ColumnSelector> column;
  if (!in.label_column.empty()) {
    if (in.no_header) {
      std::size_t idx = 0;
      try {
        idx = std::stoul(in.label_column);
      } catch (const std::exception&) {
        throw UsageError("--label-column must be an index when --no-header is set");
      }
      column = ColumnSelector{idx};
    } else {
      column = ColumnSelector{in.label_column};
    }
  }
  Scaling scaling;
  try {
    scaling = parse_scaling(in.scaling);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return apply_scaling(load_csv(in.path, column, !in.no_header), scaling);
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream f(path);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  return f;
}

void write_json(const json& j, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << j.dump(2) << '\n';
    return;
  }
  auto f = open_output(path);
  f << j.dump(2) << '\n';
  if (!f) throw IoError("failed writing '" + path + "'");
}

json score_or_null(const std::optional<Score>& s) { return s ? json(s->value) : json(nullptr); }

ObjectiveKind parse_kind(const std::string& name) {
  try {
    return parse_objective(name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

// --- cluster ---------------------------------------------------------------

struct ClusterOptions {
  InputOptions in;
  int clusters = 2;
  std::string labels_out = "labels.csv";
  std::string report_out = "cluster.json";
  std::size_t k_max = kDefaultKMax;
  std::optional<double> beta;
  std::size_t candidates = kDefaultCandidates;
  std::size_t rank = 0;
  std::size_t k = kDefaultUncertaintyRank;
  double jitter = kDefaultJitter;
  int max_sweeps = kDefaultMaxSweeps;
  double tol = kDefaultSweepTolerance;
  std::uint64_t seed = 0;
};

void setup_cluster(CLI::App& app, ClusterOptions& o, std::function<void()>& action,
                   std::ostream& out) {
  auto* sub = app.add_subcommand("cluster", "Find a low-CVR partition of a CSV dataset");
  add_input_options(sub, o.in, "unit-range");
  sub->add_option("-c,--clusters", o.clusters, "Number of clusters")
      ->required()
      ->check(CLI::Range(2, 1 << 20));
  sub->add_option("-o,--output", o.labels_out, "Labels file (one label per line)")
      ->capture_default_str();
  sub->add_option("--report", o.report_out, "JSON report ('-' for stdout)")->capture_default_str();
  sub->add_option("--k-max", o.k_max, "Affinity neighbor ranks")->capture_default_str();
  sub->add_option("--beta", o.beta, "Affinity offset (default 1/(k_max (k_max+1)))");
  sub->add_option("--candidates", o.candidates, "Rounded candidates")->capture_default_str();
  sub->add_option("--rank", o.rank, "Embedding rank (0 = automatic)")->capture_default_str();
  sub->add_option("-k,--k", o.k, "Label-uncertainty rank")->capture_default_str();
  sub->add_option("--jitter", o.jitter, "Uniform jitter magnitude (0 disables)")
      ->capture_default_str();
  sub->add_option("--max-sweeps", o.max_sweeps, "Relaxation sweeps")->capture_default_str();
  sub->add_option("--tol", o.tol, "Relative sweep tolerance")->capture_default_str();
  sub->add_option("-s,--seed", o.seed, "Random seed")->capture_default_str();
  sub->callback([&] {
    action = [&] {
      const Dataset ds = load_input(o.in);
      ClusterConfig cfg;
      cfg.k_max = o.k_max;
      cfg.beta = o.beta;
      cfg.n_candidates = o.candidates;
      cfg.rank = o.rank;
      cfg.k = o.k;
      cfg.jitter = o.jitter;
      cfg.max_sweeps = o.max_sweeps;
      cfg.tol = o.tol;
      cfg.seed = o.seed;
      const auto result = cluster(ds, o.clusters, cfg);
      write_labels(result.partition, o.labels_out);

      json j;
      j["input"] = o.in.path;
      j["n_samples"] = ds.n_samples();
      j["n_dims"] = ds.n_dims();
      j["clusters"] = o.clusters;
      j["found_clusters"] = result.partition.n_nonempty();
      j["cvr"] = result.cvr.value;
      j["exhausted"] = result.exhausted;
      j["relaxation_objective"] = result.relaxation_objective;
      j["best_candidate_objective"] = result.best_candidate_objective;
      j["sweeps"] = result.sweeps;
      j["beta_used"] = result.beta_used;
      j["distinct_candidates"] = result.distinct_candidates;
      if (ds.has_ground_truth()) j["rand_index"] = rand_index(result.partition, ds.ground_truth());
      j["config"] = {{"scaling", o.in.scaling},
                     {"k_max", o.k_max},
                     {"beta", o.beta.value_or(default_beta(o.k_max))},
                     {"candidates", o.candidates},
                     {"rank", o.rank},
                     {"k", o.k},
                     {"jitter", o.jitter},
                     {"max_sweeps", o.max_sweeps},
                     {"tol", o.tol},
                     {"seed", o.seed}};
      write_json(j, o.report_out, out);
    };
  });
}

// --- score -----------------------------------------------------------------

struct ScoreOptions {
  InputOptions in;
  std::string labels;
  std::string output;
  std::size_t k = kDefaultUncertaintyRank;
  std::size_t k_mi = kDefaultEntropyRank;
  double jitter = kDefaultJitter;
  std::uint64_t seed = 0;
};

void setup_score(CLI::App& app, ScoreOptions& o, std::function<void()>& action, std::ostream& out) {
  auto* sub = app.add_subcommand("score", "Score a partition by CVR, MI and NIC");
  add_input_options(sub, o.in, "unit-range");
  sub->add_option("-l,--labels", o.labels, "Labels file (default: the --label-column)");
  sub->add_option("-o,--output", o.output, "JSON output (default stdout)");
  sub->add_option("-k,--k", o.k, "Label-uncertainty rank")->capture_default_str();
  sub->add_option("--k-mi", o.k_mi, "Entropy rank for MI")->capture_default_str();
  sub->add_option("--jitter", o.jitter, "Uniform jitter magnitude (0 disables)")
      ->capture_default_str();
  sub->add_option("-s,--seed", o.seed, "Jitter seed")->capture_default_str();
  sub->callback([&] {
    action = [&] {
      Dataset ds = load_input(o.in);
      Partition part;
      if (!o.labels.empty()) {
        part = load_labels(o.labels);
      } else if (ds.has_ground_truth()) {
        part = ds.ground_truth();
      } else {
        throw UsageError("score needs --labels or --label-column");
      }
      if (part.size() != ds.n_samples()) {
        throw UsageError("labels file has " + std::to_string(part.size()) + " rows, data has " +
                         std::to_string(ds.n_samples()));
      }
      if (o.jitter > 0.0) ds = jitter(ds, SeedSpec(o.seed).derive(0), o.jitter);
      const auto table = NeighborTable::build(ds);

      json j;
      j["n_samples"] = ds.n_samples();
      j["clusters"] = part.n_nonempty();
      j["label_entropy"] = plug_in_entropy(part).value;
      j["label_uncertainty"] = label_uncertainty_k(table, part, o.k).value;
      j["total_label_uncertainty"] = total_label_uncertainty(table, part, o.k).value;
      j["cvr"] = part.n_nonempty() >= 2 ? json(cvr(table, part, o.k).value) : json(nullptr);
      j["mi"] = score_or_null(mi_objective(table, part, o.k_mi));
      j["nic"] = score_or_null(nic_objective(table, part));
      j["config"] = {{"scaling", o.in.scaling},
                     {"k", o.k},
                     {"k_mi", o.k_mi},
                     {"jitter", o.jitter},
                     {"seed", o.seed}};
      write_json(j, o.output, out);
    };
  });
}

// --- scans -----------------------------------------------------------------

struct ScanOptions {
  InputOptions in;
  std::string objective = "cvr";
  std::optional<std::size_t> k;
  std::string output = "scan.csv";
  std::size_t radii = 200;
  std::optional<double> r_max;
};

void setup_scan(CLI::App& app, ScanOptions& o, bool radial, std::function<void()>& action,
                std::ostream& out) {
  auto* sub = radial ? app.add_subcommand("scan-radial", "Score radial partitions of 2D data")
                     : app.add_subcommand("scan-1d", "Score threshold partitions of 1D data");
  add_input_options(sub, o.in, "none");
  sub->add_option("--objective", o.objective, "cvr | mi | nic")->capture_default_str();
  sub->add_option("-k,--k", o.k, "Estimator rank (default 1 for cvr, 3 otherwise)");
  sub->add_option("-o,--output", o.output, "Scan CSV")->capture_default_str();
  if (radial) {
    sub->add_option("--radii", o.radii, "Grid size")->capture_default_str();
    sub->add_option("--r-max", o.r_max, "Largest radius (default: largest sample radius)");
  }
  sub->callback([&, radial] {
    action = [&, radial] {
      const ObjectiveKind kind = parse_kind(o.objective);
      const std::size_t k = o.k.value_or(default_rank(kind));
      const Dataset ds = load_input(o.in);
      ScanResult scan;
      if (radial) {
        if (ds.n_dims() != 2) throw UsageError("scan-radial needs 2D data");
        double r_max = 0.0;
        if (o.r_max) {
          r_max = *o.r_max;
        } else {
          for (std::size_t i = 0; i < ds.n_samples(); ++i) {
            r_max = std::max(r_max, std::hypot(ds.at(i, 0), ds.at(i, 1)));
          }
        }
        const auto grid = radius_grid(r_max, o.radii);
        scan = scan_radius(ds, kind, grid, k);
      } else {
        if (ds.n_dims() != 1) throw UsageError("scan-1d needs 1D data");
        scan = scan_threshold(ds, kind, k);
      }
      write_scan_csv(scan, o.output);
      json j{{"objective", std::string(to_string(kind))}, {"k", k}, {"points", scan.parameters.size()}};
      if (scan.best_index) {
        j["best_parameter"] = scan.best_parameter;
        j["best_score"] = scan.best_score;
      } else {
        j["best_parameter"] = nullptr;
        j["best_score"] = nullptr;
      }
      out << j.dump() << '\n';
    };
  });
}

// --- synth -----------------------------------------------------------------

struct SynthOptions {
  std::string family;
  std::size_t n = 0;
  std::string output;
  std::uint64_t seed = 0;
  TwoUniformSpec segments;
  DiskAnnulusSpec disk;
};

void setup_synth(CLI::App& app, SynthOptions& o, std::function<void()>& action) {
  auto* sub = app.add_subcommand("synth", "Generate a synthetic dataset");
  sub->add_option("family", o.family, "two-uniform | disk-annulus")
      ->required()
      ->check(CLI::IsMember({"two-uniform", "disk-annulus"}));
  sub->add_option("-n,--n", o.n, "Sample count")->required();
  sub->add_option("-o,--output", o.output, "Output CSV")->required();
  sub->add_option("-s,--seed", o.seed, "Random seed")->capture_default_str();
  sub->add_option("--width-a", o.segments.width_a, "First segment width")->capture_default_str();
  sub->add_option("--gap", o.segments.gap, "Gap width")->capture_default_str();
  sub->add_option("--width-b", o.segments.width_b, "Second segment width")->capture_default_str();
  sub->add_option("--r-a", o.disk.r_a, "Disk radius")->capture_default_str();
  sub->add_option("--r-b", o.disk.r_b, "Annulus inner radius")->capture_default_str();
  sub->add_option("--r-c", o.disk.r_c, "Annulus outer radius")->capture_default_str();
  sub->callback([&] {
    action = [&] {
      const SeedSpec seed(o.seed);
      const Dataset ds = o.family == "two-uniform" ? sample_two_uniform(o.segments, o.n, seed)
                                                   : sample_disk_annulus(o.disk, o.n, seed);
      write_csv(ds, o.output);
    };
  });
}

// --- bench -----------------------------------------------------------------

struct BenchOptions {
  std::string name;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  std::string params;
  std::vector<std::string> sets;
  bool timing = false;
};

json parse_json_value(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    return json(text);
  }
}

void setup_bench(CLI::App& app, BenchOptions& o, std::function<void()>& action, std::ostream& out) {
  auto* sub = app.add_subcommand("bench", "Run a named experiment and write its report");
  sub->add_option("name", o.name, "fig2 | fig4 | fig6 | fig7 | uci")->required();
  sub->add_option("-o,--out-dir", o.out_dir, "Report directory")->capture_default_str();
  sub->add_option("-s,--seed", o.seed, "Root seed")->capture_default_str();
  sub->add_option("--params", o.params, "JSON object of parameter overrides");
  sub->add_option("--set", o.sets, "Override one parameter: key=value (value parsed as JSON)");
  sub->add_flag("--timing", o.timing, "Include wall-clock duration in the JSON report");
  sub->callback([&] {
    action = [&] {
      const auto& names = benchmark_names();
      if (std::find(names.begin(), names.end(), o.name) == names.end()) {
        std::string valid;
        for (const auto& n : names) valid += (valid.empty() ? "" : ", ") + n;
        throw UsageError("unknown benchmark '" + o.name + "' (valid: " + valid + ")");
      }
      json overrides = json::object();
      if (!o.params.empty()) {
        try {
          overrides = json::parse(o.params);
        } catch (const json::parse_error& e) {
          throw UsageError(std::string("--params is not valid JSON: ") + e.what());
        }
      }
      for (const auto& s : o.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("--set expects key=value, got '" + s + "'");
        overrides[s.substr(0, eq)] = parse_json_value(s.substr(eq + 1));
      }
      ExperimentReport report;
      try {
        report = run_benchmark(o.name, overrides, o.seed);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      for (const auto& path : write_report(report, o.out_dir, o.timing)) {
        out << path.string() << '\n';
      }
    };
  });
}

// --- rand-index ------------------------------------------------------------

struct RandOptions {
  std::string a;
  std::string b;
};

void setup_rand(CLI::App& app, RandOptions& o, std::function<void()>& action, std::ostream& out) {
  auto* sub = app.add_subcommand("rand-index", "Rand index between two label files");
  sub->add_option("first", o.a, "Labels file")->required();
  sub->add_option("second", o.b, "Labels file")->required();
  sub->callback([&] {
    action = [&] {
      const auto p = load_labels(o.a);
      const auto q = load_labels(o.b);
      if (p.size() != q.size()) throw UsageError("label files differ in length");
      out << json(rand_index(p, q)).dump() << '\n';
    };
  });
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Consistency-violation clustering toolkit", "cgclust"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker thread cap (0 = all cores)")->capture_default_str();

  std::function<void()> action;
  ClusterOptions cluster_opts;
  ScoreOptions score_opts;
  ScanOptions scan1d_opts;
  ScanOptions radial_opts;
  SynthOptions synth_opts;
  BenchOptions bench_opts;
  RandOptions rand_opts;
  setup_cluster(app, cluster_opts, action, out);
  setup_score(app, score_opts, action, out);
  setup_scan(app, scan1d_opts, false, action, out);
  setup_scan(app, radial_opts, true, action, out);
  setup_synth(app, synth_opts, action);
  setup_bench(app, bench_opts, action, out);
  setup_rand(app, rand_opts, action, out);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kOk;
    }
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  set_max_threads(threads);
  try {
    if (action) action();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kComputation;
  }
  return kOk;
}

}  // namespace cgclust::cli
