#include "cgclust/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "cgclust/parallel.hpp"

namespace cgclust {

double chebyshev_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("chebyshev_distance: dimension mismatch");
  double m = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) m = std::max(m, std::abs(a[c] - b[c]));
  return m;
}

NeighborTable NeighborTable::build(const Dataset& ds) {
  NeighborTable t;
  t.n_ = ds.n_samples();
  t.d_ = ds.n_dims();
  const std::size_t n = t.n_;
  const std::size_t w = n - 1;
  t.index_.resize(n * w);
  t.dist_.resize(n * w);
  t.rel_log_.resize(n * w);
  t.log_first_.resize(n);

  parallel_for(n, [&](std::size_t i) {
    std::vector<std::pair<double, std::uint32_t>> row;
    row.reserve(w);
    const auto xi = ds.point(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) row.emplace_back(chebyshev_distance(xi, ds.point(j)), static_cast<std::uint32_t>(j));
    }
    std::sort(row.begin(), row.end());
    if (row.front().first <= 0.0) {
      throw std::invalid_argument("NeighborTable: points " + std::to_string(i) + " and " +
                                  std::to_string(row.front().second) +
                                  " coincide (zero distance); jitter the data");
    }
    const double first = row.front().first;
    for (std::size_t r = 0; r < w; ++r) {
      t.index_[i * w + r] = row[r].second;
      t.dist_[i * w + r] = row[r].first;
      t.rel_log_[i * w + r] = std::log(row[r].first / first);
    }
    t.log_first_[i] = std::log(first);
  });
  return t;
}

double knn_distance(const NeighborTable& table, std::size_t i, std::size_t k) {
  if (k < 1 || k > table.row_length()) {
    throw std::out_of_range("knn_distance: rank " + std::to_string(k) + " outside [1, " +
                            std::to_string(table.row_length()) + "]");
  }
  return table.distance(i, k);
}

std::size_t restricted_rank(const NeighborTable& table, const Partition& part, std::size_t i,
                            std::size_t k) {
  const int y = part.label(i);
  if (part.count(y) < k + 1) return table.row_length();
  std::size_t seen = 0;
  const auto nbrs = table.neighbors(i);
  for (std::size_t r = 0; r < nbrs.size(); ++r) {
    if (part.label(nbrs[r]) == y && ++seen == k) return r + 1;
  }
  return table.row_length();
}

double restricted_knn_distance(const NeighborTable& table, const Partition& part,
                               std::size_t i, std::size_t k) {
  if (k < 1 || k > table.row_length()) {
    throw std::out_of_range("restricted_knn_distance: rank " + std::to_string(k) +
                            " outside [1, " + std::to_string(table.row_length()) + "]");
  }
  if (part.size() != table.size()) {
    throw std::invalid_argument("restricted_knn_distance: partition size mismatch");
  }
  return table.distance(i, restricted_rank(table, part, i, k));
}

}  // namespace cgclust
