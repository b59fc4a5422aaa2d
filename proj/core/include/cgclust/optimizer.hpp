#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cgclust/data.hpp"
#include "cgclust/estimators.hpp"
#include "cgclust/neighbors.hpp"
#include "cgclust/seed.hpp"

namespace cgclust {

inline constexpr std::size_t kDefaultKMax = 10;
inline constexpr std::size_t kDefaultCandidates = 200;
inline constexpr std::size_t kRefineWindow = 25;
inline constexpr int kDefaultMaxSweeps = 500;
inline constexpr double kDefaultSweepTolerance = 1e-7;

/// 1 / (k_max (k_max + 1)).
double default_beta(std::size_t k_max);

/// Dense symmetric N x N matrix of shifted neighbor weights.
class AffinityMatrix {
 public:
  AffinityMatrix() = default;
  /// Wraps an arbitrary dense row-major matrix (tests, custom weights).
  AffinityMatrix(std::size_t n, std::vector<double> values, double beta = 0.0,
                 std::size_t k_max = 0);

  std::size_t size() const { return n_; }
  double beta() const { return beta_; }
  std::size_t k_max() const { return k_max_; }
  double at(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const { return {values_.data() + i * n_, n_}; }
  bool is_symmetric(double tol = 0.0) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
  double beta_ = 0.0;
  std::size_t k_max_ = 0;
};

/// A_ij = 1/(k(k+1)) when j is the k-th neighbor of i and k <= k_max;
/// returns (A + A^T)/2 - beta (diagonal: -beta).
AffinityMatrix build_affinity(const NeighborTable& table, std::size_t k_max = kDefaultKMax,
                              std::optional<double> beta = std::nullopt);

/// N unit vectors of dimension rank(), row-major.
class EmbeddingVectors {
 public:
  EmbeddingVectors() = default;
  EmbeddingVectors(std::size_t n, std::size_t rank, std::vector<double> coords);

  std::size_t size() const { return n_; }
  std::size_t rank() const { return rank_; }
  std::span<const double> vector(std::size_t i) const {
    return {coords_.data() + i * rank_, rank_};
  }

 private:
  std::size_t n_ = 0;
  std::size_t rank_ = 0;
  std::vector<double> coords_;
};

struct RelaxationResult {
  EmbeddingVectors embedding;
  /// Objective at initialization followed by the value after every sweep.
  std::vector<double> objective_history;
  bool converged = false;

  double objective() const { return objective_history.back(); }
};

/// ceil(sqrt(2N)) clamped to [2, 32].
std::size_t default_embedding_rank(std::size_t n);

/// sum_ij A_ij y_i . y_j.
double relaxation_objective(const AffinityMatrix& aff, const EmbeddingVectors& emb);

/// sum_ij A_ij s_i s_j with s = +1 for label 0 and -1 otherwise.
double discrete_objective(const AffinityMatrix& aff, const Partition& part);

/// Low-rank maximization of Tr(A M) over Gram matrices of unit vectors by
/// cyclic coordinate updates y_i <- normalize(sum_{j != i} A_ij y_j). Each
/// update maximizes the objective over y_i, so the objective never
/// decreases. Stops when a sweep improves the objective by less than
/// tol * |objective| or after max_sweeps. After convergence the sign vector
/// along the principal direction is tried as a restart point and adopted
/// when it scores higher.
/// Throws std::invalid_argument for rank < 2, tol <= 0 or an asymmetric matrix.
RelaxationResult solve_gram_relaxation(const AffinityMatrix& aff, std::size_t rank,
                                       const SeedSpec& seed,
                                       int max_sweeps = kDefaultMaxSweeps,
                                       double tol = kDefaultSweepTolerance);

/// Random-hyperplane rounding: label 0 where u . y_i > 0, else 1.
Partition round_hyperplane(const EmbeddingVectors& emb, const SeedSpec& seed);

/// n_candidates roundings; candidate c uses seed.derive(c).
std::vector<Partition> generate_candidates(const EmbeddingVectors& emb,
                                           std::size_t n_candidates, const SeedSpec& seed);

struct RankedCandidate {
  std::size_t index = 0;  // position in the input list
  Partition partition;    // canonical labels
  double cvr = 0.0;
};

/// Distinct (up to relabeling) candidates with >= 2 nonempty clusters,
/// sorted by CVR; ties keep input order.
std::vector<RankedCandidate> rank_candidates(const NeighborTable& table,
                                             std::span<const Partition> candidates,
                                             std::size_t k = kDefaultUncertaintyRank);

/// Lowest-CVR candidate. Throws UndefinedScoreError when every candidate is
/// a single cluster.
std::pair<Partition, Score> select_best_cvr(const NeighborTable& table,
                                            std::span<const Partition> candidates,
                                            std::size_t k = kDefaultUncertaintyRank);

struct MultiwayResult {
  Partition partition;
  /// Candidates ran out before the target count was reached.
  bool exhausted = false;
};

/// Grows `base` to target_clusters clusters. Repeatedly takes the first
/// kRefineWindow remaining candidates (in CVR order), picks the one with the
/// lowest Rand index against the current partition and replaces the current
/// partition by the joint refinement of both. Overshoot is undone by
/// greedily merging the pair of clusters whose merge gives the lowest CVR.
MultiwayResult refine_multiway(const NeighborTable& table, const Partition& base,
                               std::span<const Partition> ranked_candidates,
                               int target_clusters, std::size_t k = kDefaultUncertaintyRank);

inline constexpr int kMaxBetaDoublings = 30;

struct ClusterConfig {
  std::size_t k_max = kDefaultKMax;
  std::optional<double> beta;  // default_beta(k_max) when unset
  std::size_t n_candidates = kDefaultCandidates;
  std::size_t rank = 0;  // default_embedding_rank(N) when 0
  std::size_t k = kDefaultUncertaintyRank;
  double jitter = kDefaultJitter;
  int max_sweeps = kDefaultMaxSweeps;
  double tol = kDefaultSweepTolerance;
  std::uint64_t seed = 0;
};

struct ClusterResult {
  Partition partition;
  Score cvr;
  bool exhausted = false;
  double relaxation_objective = 0.0;
  /// Largest discrete objective over all rounded candidates.
  double best_candidate_objective = 0.0;
  std::size_t sweeps = 0;
  std::size_t distinct_candidates = 0;
  /// Shift actually used; doubled from the configured value while every
  /// rounded candidate was a single cluster.
  double beta_used = 0.0;
};

/// jitter -> neighbor table -> affinity -> relaxation -> candidates ->
/// CVR ranking -> multiway refinement. A pure function of (ds, config).
/// Small samples can make the all-aligned embedding optimal; beta is then
/// doubled (at most kMaxBetaDoublings times) until some candidate splits.
ClusterResult cluster(const Dataset& ds, int target_clusters, const ClusterConfig& config = {});

}  // namespace cgclust
