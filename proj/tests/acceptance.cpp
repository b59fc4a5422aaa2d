// Runs every acceptance criterion and prints one PASS/FAIL line for each.

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cgclust/bench.hpp"
#include "cgclust/data.hpp"
#include "cgclust/metrics.hpp"
#include "cgclust/synth.hpp"
#include "properties.hpp"

using namespace cgclust;
using nlohmann::json;

namespace {

struct Verdict {
  bool pass = true;
  std::vector<std::string> lines;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    lines.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void require(const props::Outcome& o) { require(o.pass, o.detail); }
};

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

double mean_of(const ExperimentReport& r, const std::string& group, const std::string& field) {
  const auto* a = r.find(group, field);
  return a ? a->mean : std::nan("");
}

Verdict mi_failure() {
  Verdict v;
  const auto r = run_benchmark("fig2", json{{"n_values", {30, 2000}}, {"repetitions", 50}, {"k", 3}}, 0);
  // Repetitions with an undefined MI count as losses for both splits.
  const auto wins = [&](const std::string& group) {
    const auto* a = r.find(group, "natural_preferred");
    return a ? a->mean * static_cast<double>(a->count) : 0.0;
  };
  const auto* large = r.find("N=2000", "natural_preferred");
  const double natural_small = wins("N=30") / 50.0;
  const double equal_large = large ? (large->count - wins("N=2000")) / 50.0 : 0.0;
  v.require(equal_large >= 0.9, "N=2000: equal split preferred in " + fmt(100 * equal_large) + "% (need >= 90%)");
  v.require(natural_small >= 0.7, "N=30: natural split preferred in " + fmt(100 * natural_small) + "% (need >= 70%)");
  return v;
}

Verdict cvr_threshold_scan() {
  Verdict v;
  const auto r = run_benchmark("fig4", json{{"n_values", {30, 90}}, {"repetitions", 50}}, 0);
  const double in_gap = mean_of(r, "N=90", "best_in_gap");
  const double sep30 = mean_of(r, "N=30", "separation");
  const double sep90 = mean_of(r, "N=90", "separation");
  v.require(in_gap >= 0.9, "N=90: CVR argmin in (1, 1.5) in " + fmt(100 * in_gap) + "% (need >= 90%)");
  v.require(sep90 > sep30, "mean out/in-gap CVR separation " + fmt(sep90) + " at N=90 vs " + fmt(sep30) + " at N=30");
  return v;
}

Verdict radial_comparison() {
  Verdict v;
  const auto r = run_benchmark("fig6", json{{"n_values", {2048}}, {"repetitions", 20}}, 0);
  const double target = DiskAnnulusSpec{}.equal_mass_radius();
  const double cvr = mean_of(r, "N=2048", "rstar_cvr");
  const double mi = mean_of(r, "N=2048", "rstar_mi");
  const double nic = mean_of(r, "N=2048", "rstar_nic");
  v.require(cvr > 1.1 && cvr < 1.4, "CVR mean r* = " + fmt(cvr) + " (need in (1.1, 1.4))");
  v.require(std::abs(mi - target) <= 0.15, "MI mean r* = " + fmt(mi) + " (need within 0.15 of " + fmt(target) + ")");
  v.require(!(nic > 1.1 && nic < 1.4), "NIC mean r* = " + fmt(nic) + " (need outside (1.1, 1.4))");
  return v;
}

Verdict uci() {
  Verdict v;
  const auto r = run_benchmark("uci", json{{"data_dir", CGCLUST_DATA_DIR}}, 0);
  struct Band {
    const char* name;
    double min_rand;
    double cvr_gt_bound;
    bool upper;
  };
  for (const Band& b : {Band{"iris", 0.85, 0.2, true}, Band{"wine", 0.88, 0.4, true}, Band{"glass", 0.60, 0.8, false}}) {
    const double rand = mean_of(r, b.name, "rand_index");
    const double gt = mean_of(r, b.name, "cvr_ground_truth");
    const double found = mean_of(r, b.name, "cvr_found");
    v.require(rand >= b.min_rand, std::string(b.name) + ": Rand index " + fmt(rand) + " (need >= " + fmt(b.min_rand) + "), best CVR " + fmt(found));
    v.require(b.upper ? gt < b.cvr_gt_bound : gt > b.cvr_gt_bound,
              std::string(b.name) + ": ground-truth CVR " + fmt(gt) + (b.upper ? " (need < " : " (need > ") + fmt(b.cvr_gt_bound) + ")");
  }
  return v;
}

Verdict singleton_baseline() {
  Verdict v;
  const auto glass = load_csv(std::string(CGCLUST_DATA_DIR) + "/glass.csv", ColumnSelector{std::string("class")});
  const double r = rand_index(singleton_partition(glass.n_samples()), glass.ground_truth());
  v.require(std::abs(r - 0.74) <= 0.005, "singletons vs glass ground truth: " + fmt(r, 6) + " (need 0.74 +- 0.005)");
  return v;
}

Verdict estimator_identities() {
  Verdict v;
  v.require(props::estimator_identity(100));
  for (double alpha : {0.2, 0.5, 0.8}) v.require(props::resampling_matches_monte_carlo(alpha, 1, 4000, 100));
  v.require(props::integrated_resampling(1, 50));
  for (std::size_t k : {1, 2, 3}) {
    for (std::size_t n : {10, 100}) v.require(props::telescoping(k, n));
  }
  return v;
}

Verdict invariance() {
  Verdict v;
  v.require(props::cvr_invariance(20));
  v.require(props::nonnegativity(1000));
  return v;
}

Verdict optimizer() {
  Verdict v;
  v.require(props::relaxation_bound(100));
  v.require(props::blob_recovery(50, 12));
  v.require(props::disk_annulus_recovery(1, 500));
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "MI-clustering failure", 120, mi_failure},
      {2, "CVR threshold scan", 120, cvr_threshold_scan},
      {3, "radial comparison", 900, radial_comparison},
      {4, "UCI benchmark", 600, uci},
      {5, "singleton baseline", 0, singleton_baseline},
      {6, "estimator identities", 0, estimator_identities},
      {7, "invariance", 0, invariance},
      {8, "optimizer", 0, optimizer},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0) {
      v.require(secs < c.budget_seconds, "runtime " + fmt(secs, 3) + " s (budget " + fmt(c.budget_seconds) + " s)");
    }
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.name << " (" << fmt(secs, 3) << " s)\n";
    for (const auto& line : v.lines) std::cout << "       " << line << '\n';
    std::cout.flush();
    if (!v.pass) ++failed;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << '\n';
  return failed == 0 ? 0 : 1;
}
