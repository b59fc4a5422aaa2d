#pragma once

// Property checks shared by the unit tests and the acceptance runner. Each
// returns a summary with the worst observed value so failures are readable.

#include <algorithm>
#include <cmath>
#include <cstring>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cgclust/estimators.hpp"
#include "cgclust/metrics.hpp"
#include "cgclust/neighbors.hpp"
#include "cgclust/optimizer.hpp"
#include "cgclust/synth.hpp"
#include "support.hpp"

namespace props {

using cgclust::Dataset;
using cgclust::NeighborTable;
using cgclust::Partition;
using Rational = boost::multiprecision::cpp_rational;

struct Outcome {
  bool pass = true;
  double worst = 0.0;
  std::string detail;
};

// sum_{j=a}^{b-1} 1/j, exactly.
inline Rational harmonic_range(std::size_t a, std::size_t b) {
  Rational s = 0;
  for (std::size_t j = a; j < b; ++j) s += Rational(1, j);
  return s;
}

// Exact coarse-graining constant: the digamma differences are rational
// harmonic sums; the remaining logarithms reduce to the plug-in entropy.
inline double exact_constant(const std::vector<int>& labels, std::size_t k) {
  const std::size_t n = labels.size();
  std::vector<std::size_t> counts;
  for (int y : labels) {
    if (y >= static_cast<int>(counts.size())) counts.resize(y + 1, 0);
    ++counts[y];
  }
  Rational psi_part = -harmonic_range(k, n);
  long double log_part = -std::log(2.0L * k / n);
  for (auto c : counts) {
    if (c == 0) continue;
    psi_part += Rational(c, n) * harmonic_range(k, c);
    log_part += static_cast<long double>(c) / n * std::log(2.0L * k / c);
  }
  return static_cast<double>(static_cast<long double>(psi_part.convert_to<long double>()) + log_part);
}

// Labels with l clusters of at least k+1 points each, shuffled.
inline std::vector<int> sized_labels(std::size_t n, int l, std::size_t k, std::mt19937_64& rng) {
  std::vector<int> y(n);
  std::uniform_int_distribution<int> u(0, l - 1);
  for (std::size_t i = 0; i < n; ++i) y[i] = i < static_cast<std::size_t>(l) * (k + 1) ? static_cast<int>(i % l) : u(rng);
  std::shuffle(y.begin(), y.end(), rng);
  return y;
}

// CV computed from four independent entropy estimates equals the label
// uncertainty plus the exact constant.
inline Outcome estimator_identity(int instances = 100, double tol = 1e-9) {
  Outcome out;
  std::mt19937_64 rng(20240601);
  for (int t = 0; t < instances; ++t) {
    const std::size_t k = 1 + rng() % 3;
    const int l = 2 + static_cast<int>(rng() % 3);
    const std::size_t n = l * (k + 1) + rng() % 25;
    const std::size_t d = 1 + rng() % 3;
    const auto ds = oracle::gaussian_data(n, d, rng());
    const auto labels = sized_labels(n, l, k, rng);

    double cv = oracle::plug_in(labels) - oracle::kl_entropy(ds, oracle::all_indices(n), k);
    for (int y = 0; y < l; ++y) {
      const auto members = oracle::members_of(labels, y);
      cv += static_cast<double>(members.size()) / n * oracle::kl_entropy(ds, members, k);
    }
    const auto table = NeighborTable::build(ds);
    const Partition part(labels);
    const double lu = cgclust::label_uncertainty_k(table, part, k).value;
    const double constant = exact_constant(labels, k);
    const double lib_cv = cgclust::consistency_violation(table, part, k).value;
    const double lib_lu_c = cgclust::label_uncertainty_k(table, part, k, true).value;
    const double err = std::max({std::abs(cv - (lu + constant)), std::abs(lib_cv - cv),
                                 std::abs(lib_lu_c - cv),
                                 std::abs(cgclust::coarse_graining_constant(part, k) - constant)});
    out.worst = std::max(out.worst, err);
  }
  out.pass = out.worst <= tol;
  std::ostringstream s;
  s << instances << " instances, max |difference| = " << out.worst;
  out.detail = s.str();
  return out;
}

// Two overlapping Gaussian blobs with their blob labels.
inline std::pair<Dataset, std::vector<int>> overlapping_blobs(std::size_t n, std::uint64_t seed,
                                                              double shift = 1.5) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(2 * n);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = i < n / 2 ? 0 : 1;
    v[2 * i] = g(rng) + (labels[i] ? shift : 0.0);
    v[2 * i + 1] = g(rng);
  }
  return {Dataset(std::move(v), 2), labels};
}

// Monte-Carlo estimate of the expected label uncertainty when every other
// point is dropped with probability alpha. Returns {mean, standard error}.
inline std::pair<double, double> resampling_monte_carlo(const Dataset& ds,
                                                        const std::vector<int>& labels,
                                                        std::size_t k, double alpha, int reps,
                                                        std::uint64_t seed) {
  const std::size_t n = ds.n_samples();
  std::vector<std::vector<std::size_t>> order(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) order[i].push_back(j);
    }
    std::stable_sort(order[i].begin(), order[i].end(), [&](auto a, auto b) {
      return oracle::cheb(ds, i, a) < oracle::cheb(ds, i, b);
    });
  }
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution keep(1.0 - alpha);
  std::vector<char> mask(n);
  double sum = 0.0, sum2 = 0.0;
  for (int r = 0; r < reps; ++r) {
    for (auto& m : mask) m = keep(rng);
    double x = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t seen = 0, seen_same = 0;
      double eps = -1.0, eps_bar = -1.0, farthest = -1.0;
      for (auto j : order[i]) {
        if (!mask[j]) continue;
        const double dist = oracle::cheb(ds, i, j);
        farthest = dist;
        if (++seen == k) eps = dist;
        if (labels[j] == labels[i] && ++seen_same == k) eps_bar = dist;
      }
      if (eps < 0.0) continue;  // fewer than k retained: outside the estimator's support
      if (eps_bar < 0.0) eps_bar = farthest;
      x += std::log(eps_bar / eps);
    }
    x *= static_cast<double>(ds.n_dims()) / n;
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / reps;
  const double var = (sum2 - reps * mean * mean) / (reps - 1);
  return {mean, std::sqrt(var / reps)};
}

inline Outcome resampling_matches_monte_carlo(double alpha, std::size_t k = 1, int reps = 4000,
                                              std::size_t n = 100) {
  const auto [ds, labels] = overlapping_blobs(n, 77);
  const auto table = NeighborTable::build(ds);
  const double lib = cgclust::resampled_label_uncertainty(table, Partition(labels), k, alpha).value;
  const auto [mean, se] = resampling_monte_carlo(ds, labels, k, alpha, reps, 1234 + k);
  Outcome out;
  out.worst = std::abs(lib - mean) / se;
  out.pass = out.worst < 3.0;
  std::ostringstream s;
  s << "alpha=" << alpha << " k=" << k << ": formula " << lib << ", Monte-Carlo " << mean
    << " +- " << se << " (" << out.worst << " SE)";
  out.detail = s.str();
  return out;
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double fa, double fm, double fb, double whole, double tol,
                               int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return adaptive_simpson(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 40);
}

inline Outcome integrated_resampling(std::size_t k = 1, std::size_t n = 50) {
  const auto [ds, labels] = overlapping_blobs(n, 91);
  const auto table = NeighborTable::build(ds);
  const Partition part(labels);
  auto f = [&](double alpha) {
    return alpha >= 1.0 ? 0.0 : cgclust::resampled_label_uncertainty(table, part, k, alpha).value;
  };
  const double integral = integrate(f, 0.0, 1.0, 1e-9);
  const double total = cgclust::total_label_uncertainty(table, part, k).value;
  Outcome out;
  out.worst = std::abs(integral - total) / std::abs(total);
  out.pass = out.worst < 1e-3;
  std::ostringstream s;
  s << "k=" << k << " N=" << n << ": integral " << integral << ", closed form " << total
    << ", relative error " << out.worst;
  out.detail = s.str();
  return out;
}

// The exact rational weights telescope to 1 - k/N and the library's weights
// are those rationals correctly rounded.
inline Outcome telescoping(std::size_t k, std::size_t n) {
  Outcome out;
  Rational sum = 0;
  const auto w = cgclust::total_uncertainty_weights(k, n);
  bool rounded = w.size() == n;
  for (std::size_t m = 0; m < n && rounded; ++m) {
    const Rational exact = m < k ? Rational(0) : Rational(k, m * (m + 1));
    sum += exact;
    rounded = w[m] == exact.convert_to<double>();
  }
  const bool exact_sum = sum == Rational(n - k, n);
  const double lib_sum = std::accumulate(w.begin(), w.end(), 0.0);
  out.worst = std::abs(lib_sum - (1.0 - static_cast<double>(k) / n));
  out.pass = exact_sum && rounded && out.worst <= static_cast<double>(n) * 2.220446049250313e-16;
  std::ostringstream s;
  s << "k=" << k << " N=" << n << ": exact sum " << (exact_sum ? "= 1-k/N" : "!= 1-k/N")
    << ", weights " << (rounded ? "correctly rounded" : "NOT correctly rounded")
    << ", floating sum error " << out.worst;
  out.detail = s.str();
  return out;
}

inline std::uint64_t bits_of(double x) {
  std::uint64_t u;
  std::memcpy(&u, &x, sizeof u);
  return u;
}

inline Dataset map_values(const Dataset& ds, const std::function<double(double)>& f) {
  std::vector<double> v = ds.values();
  for (auto& x : v) x = f(x);
  return ds.with_values(std::move(v));
}

// Integer grid points scaled by 2^-10: products and sums below stay exact.
inline Dataset grid_data(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> u(-(1 << 20), 1 << 20);
  std::vector<double> v(n * d);
  for (auto& x : v) x = std::ldexp(static_cast<double>(u(rng)), -10);
  return Dataset(std::move(v), d);
}

inline Outcome cvr_invariance(int instances = 20) {
  Outcome out;
  std::mt19937_64 rng(4242);
  int failures = 0, checks = 0;
  auto same = [&](double a, double b) {
    ++checks;
    if (bits_of(a) != bits_of(b)) ++failures;
  };
  for (int t = 0; t < instances; ++t) {
    const std::size_t n = 20 + rng() % 60;
    const std::size_t d = 1 + rng() % 3;
    const auto labels = oracle::random_labels(n, 2 + static_cast<int>(rng() % 3), rng());
    if (Partition(labels).n_nonempty() < 2) continue;
    const Partition part(labels);

    const auto grid = grid_data(n, d, rng());
    const double base = cgclust::cvr(NeighborTable::build(grid), part).value;
    for (double c : {3.0, 7.0, 0.25, 1000.0, 1073741824.0, -5.0}) {
      same(base, cgclust::cvr(NeighborTable::build(map_values(grid, [c](double x) { return c * x; })), part).value);
    }
    for (double shift : {12.5, -1000.75, 1048576.0, 0.0009765625}) {
      same(base, cgclust::cvr(NeighborTable::build(map_values(grid, [shift](double x) { return x + shift; })), part).value);
    }

    const auto cont = oracle::gaussian_data(n, d, rng());
    const double cbase = cgclust::cvr(NeighborTable::build(cont), part).value;
    for (int e : {-7, 1, 30}) {
      same(cbase, cgclust::cvr(NeighborTable::build(map_values(cont, [e](double x) { return std::ldexp(x, e); })), part).value);
    }

    std::vector<std::size_t> perm = oracle::all_indices(n);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (const Dataset* src : {&grid, &cont}) {
      std::vector<double> v(n * d);
      std::vector<int> y(n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < d; ++c) v[i * d + c] = src->at(perm[i], c);
        y[i] = labels[perm[i]];
      }
      const double before = cgclust::cvr(NeighborTable::build(*src), part).value;
      same(before, cgclust::cvr(NeighborTable::build(Dataset(v, d)), Partition(y)).value);
    }
  }
  out.pass = failures == 0;
  out.worst = failures;
  std::ostringstream s;
  s << checks << " transformed copies, " << failures << " not bit-identical";
  out.detail = s.str();
  return out;
}

inline Outcome nonnegativity(int partitions = 1000) {
  Outcome out;
  std::mt19937_64 rng(99);
  double worst = 0.0;
  int negatives = 0;
  for (int t = 0; t < partitions; ++t) {
    const std::size_t n = 4 + rng() % 60;
    const std::size_t d = 1 + rng() % 4;
    const auto ds = oracle::gaussian_data(n, d, rng());
    const auto table = NeighborTable::build(ds);
    const Partition part(oracle::random_labels(n, 1 + static_cast<int>(rng() % std::min<std::size_t>(n, 8)), rng()));
    const std::size_t k = 1 + rng() % std::min<std::size_t>(n - 1, 4);
    for (double v : {cgclust::label_uncertainty_k(table, part, k).value,
                     cgclust::total_label_uncertainty(table, part, k).value}) {
      worst = std::min(worst, v);
      if (v < 0.0) ++negatives;
    }
  }
  out.worst = worst;
  out.pass = negatives == 0;
  std::ostringstream s;
  s << partitions << " partitions, " << negatives << " negative values, minimum " << worst;
  out.detail = s.str();
  return out;
}

inline double brute_discrete(const cgclust::AffinityMatrix& a, std::uint32_t mask) {
  const std::size_t n = a.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double si = (mask >> i & 1u) ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) total += a.at(i, j) * si * ((mask >> j & 1u) ? -1.0 : 1.0);
  }
  return total;
}

// Monotone sweeps, and the relaxation bounds every discrete assignment
// (exhaustively) and every rounded candidate.
inline Outcome relaxation_bound(int instances = 100) {
  Outcome out;
  std::mt19937_64 rng(7);
  int non_monotone = 0, violated = 0;
  double worst_gap = 0.0;
  for (int t = 0; t < instances; ++t) {
    const std::size_t n = 5 + rng() % 10;
    cgclust::AffinityMatrix aff;
    if (t % 2 == 0) {
      const auto ds = oracle::gaussian_data(n, 1 + rng() % 3, rng());
      aff = cgclust::build_affinity(NeighborTable::build(ds), std::min<std::size_t>(10, n - 1));
    } else {
      std::normal_distribution<double> g;
      std::vector<double> v(n * n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) v[i * n + j] = v[j * n + i] = g(rng);
      }
      aff = cgclust::AffinityMatrix(n, v);
    }
    const auto seed = cgclust::SeedSpec(t);
    const auto relax = cgclust::solve_gram_relaxation(aff, cgclust::default_embedding_rank(n), seed);
    const auto& h = relax.objective_history;
    for (std::size_t s = 1; s < h.size(); ++s) {
      if (h[s] < h[s - 1] - 1e-12 * std::max(1.0, std::abs(h[s - 1]))) ++non_monotone;
    }
    double best = -1e300;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) best = std::max(best, brute_discrete(aff, mask));
    for (const auto& c : cgclust::generate_candidates(relax.embedding, 50, seed.derive(9))) {
      best = std::max(best, cgclust::discrete_objective(aff, c));
    }
    const double scale = std::max(1.0, std::abs(best));
    const double gap = (best - relax.objective()) / scale;
    worst_gap = std::max(worst_gap, gap);
    if (gap > 1e-9) ++violated;
  }
  out.pass = non_monotone == 0 && violated == 0;
  out.worst = worst_gap;
  std::ostringstream s;
  s << instances << " instances: " << non_monotone << " decreasing sweeps, " << violated
    << " relaxations below a discrete assignment (worst relative excess " << worst_gap << ")";
  out.detail = s.str();
  return out;
}

inline Dataset separated_blobs(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    v[2 * i] = g(rng) + (i < n / 2 ? 0.0 : 10.0);
    v[2 * i + 1] = g(rng);
  }
  return Dataset(std::move(v), 2);
}

// Fraction of seeds for which the pipeline returns the binary partition of
// minimum CVR found by enumerating all 2^(N-1) - 1 splits.
inline Outcome blob_recovery(int seeds = 50, std::size_t n = 12) {
  int hits = 0;
  for (int s = 0; s < seeds; ++s) {
    const auto ds = separated_blobs(n, 1000 + s);
    const auto table = NeighborTable::build(ds);
    double best = 1e300;
    Partition best_part;
    for (std::uint32_t mask = 1; mask < (1u << (n - 1)); ++mask) {
      std::vector<int> y(n, 0);
      for (std::size_t i = 1; i < n; ++i) y[i] = (mask >> (i - 1)) & 1u;
      const Partition p(y);
      const double v = cgclust::cvr(table, p).value;
      if (v < best) {
        best = v;
        best_part = p.canonical();
      }
    }
    cgclust::ClusterConfig cfg;
    cfg.seed = s;
    cfg.jitter = 0.0;
    const auto result = cgclust::cluster(ds, 2, cfg);
    if (result.partition.canonical() == best_part) ++hits;
  }
  Outcome out;
  out.worst = static_cast<double>(hits) / seeds;
  out.pass = out.worst >= 0.8;
  std::ostringstream s;
  s << hits << "/" << seeds << " seeds recovered the enumerated optimum";
  out.detail = s.str();
  return out;
}

inline Outcome disk_annulus_recovery(std::uint64_t seed = 1, std::size_t n = 500) {
  const cgclust::DiskAnnulusSpec spec;
  const auto ds = cgclust::sample_disk_annulus(spec, n, cgclust::SeedSpec(seed));
  cgclust::ClusterConfig cfg;
  cfg.seed = seed;
  const auto result = cgclust::cluster(ds, 2, cfg);
  Outcome out;
  out.worst = cgclust::rand_index(result.partition, ds.ground_truth());
  out.pass = out.worst >= 0.95;
  std::ostringstream s;
  s << "N=" << n << " seed=" << seed << ": Rand index " << out.worst << ", CVR " << result.cvr.value;
  out.detail = s.str();
  return out;
}

}  // namespace props
