#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <string_view>
#include <vector>

#include "cgclust/data.hpp"
#include "cgclust/neighbors.hpp"

namespace cgclust {

enum class ScoreKind {
  differential_entropy,
  discrete_entropy,
  conditional_entropy,
  consistency_violation,
  label_uncertainty,
  cvr,
  mutual_information,
  nic,
};

std::string_view to_string(ScoreKind kind);

/// An estimator value in nats. CVR is a ratio of nats and has no unit.
struct Score {
  double value = 0.0;
  ScoreKind kind = ScoreKind::differential_entropy;

  double bits() const { return value / std::numbers::ln2; }
};

/// Default rank for the total label uncertainty (and hence CVR).
inline constexpr std::size_t kDefaultUncertaintyRank = 1;
/// Default rank for plain k-NN entropy estimates (MI baseline).
inline constexpr std::size_t kDefaultEntropyRank = 3;

/// psi(x) for x > 0, accurate to ~1e-12. Throws std::domain_error for x <= 0.
double digamma(double x);

/// c_{k,n} = psi(n) - psi(k) + ln(2k/n). Throws std::invalid_argument
/// unless 1 <= k < n.
double bias_constant(std::size_t k, std::size_t n);

/// Kozachenko-Leonenko estimate over the whole table:
///   ln(N/k) + (d/N) sum_i ln eps_{i,k} + c_{k,N}.
Score kl_entropy(const NeighborTable& table, std::size_t k);

/// Same estimator restricted to `subset`: neighbor ranks and n are taken
/// within the subset. Throws std::invalid_argument if |subset| < k+1.
Score kl_entropy(const NeighborTable& table, std::span<const std::size_t> subset,
                 std::size_t k);

/// -sum_j (n_j/N) ln(n_j/N).
Score plug_in_entropy(const Partition& part);

/// sum_j (n_j/N) H_kl(cluster j). Throws std::invalid_argument if any
/// nonempty cluster has k or fewer points.
Score conditional_data_entropy(const NeighborTable& table, const Partition& part,
                               std::size_t k);

/// H(Y) + H(X|Y) - H(X), every term estimated from the sample.
Score consistency_violation(const NeighborTable& table, const Partition& part, std::size_t k);

/// sum_j c_{k,n_j} n_j/N - c_{k,N}. Clusters with n_j <= k contribute 0.
double coarse_graining_constant(const Partition& part, std::size_t k);

/// (d/N) sum_i ln(epsbar_{i,k} / eps_{i,k}), optionally plus
/// coarse_graining_constant(). Without the constant the value is >= 0.
Score label_uncertainty_k(const NeighborTable& table, const Partition& part, std::size_t k,
                          bool include_constant = false);

/// q(m|k) = C(m-1, k-1) (1-alpha)^k alpha^(m-k) for m in [0, n-1], with
/// entries below k zero. Computed in log space.
std::vector<double> resampling_weights(std::size_t k, std::size_t n, double alpha);

/// Expected label uncertainty when each point is dropped independently with
/// probability alpha; ranks beyond N-1 are truncated.
/// Throws std::invalid_argument unless 0 <= alpha < 1.
Score resampled_label_uncertainty(const NeighborTable& table, const Partition& part,
                                  std::size_t k, double alpha);

/// k / (m (m+1)) for m in [k, n-1] (index m), zero below k. Sums to 1 - k/n.
std::vector<double> total_uncertainty_weights(std::size_t k, std::size_t n);

/// Resampled label uncertainty integrated over alpha in [0, 1]:
///   (d/N) sum_i sum_{m=k}^{N-1} k/(m(m+1)) ln(epsbar_{i,m} / eps_{i,m}).
Score total_label_uncertainty(const NeighborTable& table, const Partition& part,
                              std::size_t k = kDefaultUncertaintyRank);

/// total_label_uncertainty / plug_in_entropy. Throws UndefinedScoreError
/// when the partition has a single nonempty cluster.
Score cvr(const NeighborTable& table, const Partition& part,
          std::size_t k = kDefaultUncertaintyRank);

}  // namespace cgclust
