#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cgclust/data.hpp"

namespace cgclust {

/// max_c |a_c - b_c|. Throws std::invalid_argument on dimension mismatch.
double chebyshev_distance(std::span<const double> a, std::span<const double> b);

/// Exact max-norm neighbor orderings for every point.
///
/// Row i lists the other N-1 points by ascending distance, ties broken by
/// point index. Ranks are 1-based to match the usual k-NN notation:
/// distance(i, 1) is the nearest neighbor, distance(i, N-1) the farthest.
///
/// Alongside raw distances the table keeps, per row, log(eps_{i,r} / eps_{i,1}).
/// Log-ratios of two entries of one row are formed from these values, so they
/// are unchanged bit-for-bit when all coordinates are scaled by a power of two.
class NeighborTable {
 public:
  /// O(N^2 log N). Throws std::invalid_argument if two points coincide
  /// (zero distance); jitter duplicates first.
  static NeighborTable build(const Dataset& ds);

  std::size_t size() const { return n_; }
  std::size_t dims() const { return d_; }
  std::size_t row_length() const { return n_ - 1; }

  std::span<const std::uint32_t> neighbors(std::size_t i) const {
    return {index_.data() + i * (n_ - 1), n_ - 1};
  }
  std::span<const double> distances(std::size_t i) const {
    return {dist_.data() + i * (n_ - 1), n_ - 1};
  }
  std::span<const double> relative_logs(std::size_t i) const {
    return {rel_log_.data() + i * (n_ - 1), n_ - 1};
  }

  /// eps_{i,rank}, unchecked. rank in [1, N-1].
  double distance(std::size_t i, std::size_t rank) const {
    return dist_[i * (n_ - 1) + rank - 1];
  }
  /// log eps_{i,rank}.
  double log_distance(std::size_t i, std::size_t rank) const {
    return log_first_[i] + rel_log_[i * (n_ - 1) + rank - 1];
  }
  /// log(eps_{i,outer} / eps_{i,inner}) for ranks of the same row.
  double log_ratio(std::size_t i, std::size_t outer, std::size_t inner) const {
    const double* row = rel_log_.data() + i * (n_ - 1);
    return row[outer - 1] - row[inner - 1];
  }

 private:
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  std::vector<std::uint32_t> index_;
  std::vector<double> dist_;
  std::vector<double> rel_log_;
  std::vector<double> log_first_;
};

/// eps_{i,k}. Throws std::out_of_range unless 1 <= k <= N-1.
double knn_distance(const NeighborTable& table, std::size_t i, std::size_t k);

/// Rank (1-based, within row i) of the k-th nearest neighbor of i sharing
/// its label, or N-1 (the farthest point) when fewer than k exist.
std::size_t restricted_rank(const NeighborTable& table, const Partition& part, std::size_t i,
                            std::size_t k);

/// Distance to the k-th nearest same-cluster neighbor of i. Falls back to
/// eps_{i,N-1} when i's cluster has k or fewer points.
/// Throws std::out_of_range unless 1 <= k <= N-1.
double restricted_knn_distance(const NeighborTable& table, const Partition& part,
                               std::size_t i, std::size_t k);

}  // namespace cgclust
