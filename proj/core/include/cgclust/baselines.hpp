#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "cgclust/estimators.hpp"

namespace cgclust {

/// Clustering objective; the optimization direction is fixed per kind.
enum class ObjectiveKind { cvr, mi, nic };

std::string_view to_string(ObjectiveKind kind);
ObjectiveKind parse_objective(const std::string& name);
/// True for CVR (lower is better), false for MI and NIC.
bool minimizes(ObjectiveKind kind);

/// k-NN estimate of I(X;Y) = H(X) - H(X|Y). Returns nullopt when any
/// nonempty cluster has k or fewer points.
std::optional<Score> mi_objective(const NeighborTable& table, const Partition& part,
                                  std::size_t k = kDefaultEntropyRank);

/// MeanNN entropy: the k-NN estimator averaged over every k in [1, n-1]:
///   (d / (n(n-1))) sum_{i != j} ln |x_i - x_j|_inf  +  offset(n)
/// where offset(n) = mean over k of (ln(n/k) + c_{k,n}), which equals 1 + ln 2.
/// Throws std::invalid_argument if |subset| < 2.
Score meannn_entropy(const NeighborTable& table, std::span<const std::size_t> subset);

/// offset(n) above.
double meannn_offset(std::size_t n);

/// -sum_j (n_j/N) meannn_entropy(cluster j). The partition-independent H(X)
/// term of the mutual information is omitted. nullopt when a nonempty
/// cluster has fewer than 2 points.
std::optional<Score> nic_objective(const NeighborTable& table, const Partition& part);

/// Dispatches on kind. CVR returns nullopt for single-cluster partitions;
/// `k` is the uncertainty rank for CVR and the entropy rank for MI.
std::optional<Score> evaluate_objective(ObjectiveKind kind, const NeighborTable& table,
                                        const Partition& part, std::size_t k);

/// Rank used when the caller does not specify one: 1 for CVR, 3 otherwise.
std::size_t default_rank(ObjectiveKind kind);

}  // namespace cgclust
