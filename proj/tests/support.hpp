#pragma once

// Brute-force reference implementations shared by the test suites. Nothing
// here calls into the library's estimators.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <boost/math/special_functions/digamma.hpp>

#include "cgclust/data.hpp"

namespace oracle {

inline double cheb(const cgclust::Dataset& ds, std::size_t i, std::size_t j) {
  double m = 0.0;
  for (std::size_t c = 0; c < ds.n_dims(); ++c) m = std::max(m, std::abs(ds.at(i, c) - ds.at(j, c)));
  return m;
}

// Sorted distances from i to every other member of `members`.
inline std::vector<double> sorted_distances(const cgclust::Dataset& ds, std::size_t i,
                                            const std::vector<std::size_t>& members) {
  std::vector<double> d;
  for (auto j : members) {
    if (j != i) d.push_back(cheb(ds, i, j));
  }
  std::sort(d.begin(), d.end());
  return d;
}

inline std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

inline std::vector<std::size_t> members_of(const std::vector<int>& labels, int y) {
  std::vector<std::size_t> v;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == y) v.push_back(i);
  }
  return v;
}

// Kozachenko-Leonenko estimate over a subset, in nats, with boost's digamma.
inline double kl_entropy(const cgclust::Dataset& ds, const std::vector<std::size_t>& members,
                         std::size_t k) {
  using boost::math::digamma;
  const double n = static_cast<double>(members.size());
  const double kd = static_cast<double>(k);
  const double d = static_cast<double>(ds.n_dims());
  double s = 0.0;
  for (auto i : members) s += std::log(sorted_distances(ds, i, members)[k - 1]);
  return std::log(n / kd) + d * s / n + digamma(n) - digamma(kd) + std::log(2.0 * kd / n);
}

inline double plug_in(const std::vector<int>& labels) {
  std::vector<double> counts;
  for (int y : labels) {
    if (y >= static_cast<int>(counts.size())) counts.resize(y + 1, 0.0);
    counts[y] += 1.0;
  }
  double h = 0.0;
  for (double c : counts) {
    if (c > 0) h -= c / labels.size() * std::log(c / labels.size());
  }
  return h;
}

// eps-bar_{i,m}: m-th same-cluster neighbor distance, falling back to the
// farthest point of the whole sample.
inline double restricted(const cgclust::Dataset& ds, const std::vector<int>& labels, std::size_t i,
                         std::size_t m) {
  const auto same = sorted_distances(ds, i, members_of(labels, labels[i]));
  if (m <= same.size()) return same[m - 1];
  return sorted_distances(ds, i, all_indices(ds.n_samples())).back();
}

// (d/N) sum_i sum_m w[m] ln(epsbar_{i,m} / eps_{i,m}).
inline double weighted_uncertainty(const cgclust::Dataset& ds, const std::vector<int>& labels,
                                   const std::vector<double>& w) {
  const std::size_t n = ds.n_samples();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto all = sorted_distances(ds, i, all_indices(n));
    for (std::size_t m = 1; m < w.size() && m <= n - 1; ++m) {
      if (w[m] == 0.0) continue;
      total += w[m] * std::log(restricted(ds, labels, i, m) / all[m - 1]);
    }
  }
  return static_cast<double>(ds.n_dims()) * total / static_cast<double>(n);
}

inline double total_uncertainty(const cgclust::Dataset& ds, const std::vector<int>& labels,
                                std::size_t k) {
  const std::size_t n = ds.n_samples();
  std::vector<double> w(n, 0.0);
  for (std::size_t m = k; m < n; ++m) w[m] = static_cast<double>(k) / (m * (m + 1.0));
  return weighted_uncertainty(ds, labels, w);
}

inline double cvr(const cgclust::Dataset& ds, const std::vector<int>& labels, std::size_t k = 1) {
  return total_uncertainty(ds, labels, k) / plug_in(labels);
}

inline cgclust::Dataset gaussian_data(std::size_t n, std::size_t d, std::uint64_t seed,
                                      double spread = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, spread);
  std::vector<double> v(n * d);
  for (auto& x : v) x = g(rng);
  return cgclust::Dataset(std::move(v), d);
}

inline std::vector<int> random_labels(std::size_t n, int l, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> u(0, l - 1);
  std::vector<int> y(n);
  for (auto& v : y) v = u(rng);
  return y;
}

}  // namespace oracle
