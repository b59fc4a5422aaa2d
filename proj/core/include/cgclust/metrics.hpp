#pragma once

#include "cgclust/data.hpp"

namespace cgclust {

/// Fraction of point pairs on which p and q agree (together in both or
/// apart in both). Throws std::invalid_argument on length mismatch or
/// fewer than 2 points.
double rand_index(const Partition& p, const Partition& q);

/// The partition putting every point in its own cluster.
Partition singleton_partition(std::size_t n);

}  // namespace cgclust
