#include "cgclust/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "cgclust/errors.hpp"
#include "cgclust/metrics.hpp"
#include "cgclust/parallel.hpp"

namespace cgclust {

double default_beta(std::size_t k_max) {
  const double k = static_cast<double>(k_max);
  return 1.0 / (k * (k + 1.0));
}

AffinityMatrix::AffinityMatrix(std::size_t n, std::vector<double> values, double beta,
                               std::size_t k_max)
    : n_(n), values_(std::move(values)), beta_(beta), k_max_(k_max) {
  if (values_.size() != n_ * n_) throw std::invalid_argument("AffinityMatrix: expected N*N values");
}

bool AffinityMatrix::is_symmetric(double tol) const {
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      if (std::abs(at(i, j) - at(j, i)) > tol) return false;
    }
  }
  return true;
}

AffinityMatrix build_affinity(const NeighborTable& table, std::size_t k_max,
                              std::optional<double> beta) {
  if (k_max < 1) throw std::invalid_argument("build_affinity: k_max must be >= 1");
  const std::size_t n = table.size();
  const double shift = beta.value_or(default_beta(k_max));
  std::vector<double> a(n * n, 0.0);
  const std::size_t reach = std::min(k_max, table.row_length());
  for (std::size_t i = 0; i < n; ++i) {
    const auto nbrs = table.neighbors(i);
    for (std::size_t k = 1; k <= reach; ++k) {
      const double kd = static_cast<double>(k);
      const double w = 0.5 / (kd * (kd + 1.0));
      a[i * n + nbrs[k - 1]] += w;
      a[nbrs[k - 1] * n + i] += w;
    }
  }
  for (double& v : a) v -= shift;
  return AffinityMatrix(n, std::move(a), shift, k_max);
}

EmbeddingVectors::EmbeddingVectors(std::size_t n, std::size_t rank, std::vector<double> coords)
    : n_(n), rank_(rank), coords_(std::move(coords)) {
  if (coords_.size() != n_ * rank_) throw std::invalid_argument("EmbeddingVectors: size mismatch");
}

std::size_t default_embedding_rank(std::size_t n) {
  const auto r = static_cast<std::size_t>(std::ceil(std::sqrt(2.0 * static_cast<double>(n))));
  return std::clamp<std::size_t>(r, 2, 32);
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) s += a[c] * b[c];
  return s;
}

double objective_of(const AffinityMatrix& aff, const std::vector<double>& y, std::size_t rank) {
  const std::size_t n = aff.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::span<const double> yi(y.data() + i * rank, rank);
    const auto row = aff.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      s += row[j] * dot(yi, std::span<const double>(y.data() + j * rank, rank));
    }
    total += s;
  }
  return total;
}

constexpr int kMaxSignRestarts = 8;

// Rank-one embedding s_i e_1 with s_i the sign of y_i along the principal
// direction of the embedding.
std::vector<double> dominant_signs(const std::vector<double>& y, std::size_t n, std::size_t rank) {
  std::vector<double> cov(rank * rank, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* yi = y.data() + i * rank;
    for (std::size_t a = 0; a < rank; ++a) {
      for (std::size_t b = 0; b < rank; ++b) cov[a * rank + b] += yi[a] * yi[b];
    }
  }
  std::vector<double> v(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(rank));
  std::vector<double> w(rank);
  for (int it = 0; it < 200; ++it) {
    for (std::size_t a = 0; a < rank; ++a) {
      w[a] = 0.0;
      for (std::size_t b = 0; b < rank; ++b) w[a] += cov[a * rank + b] * v[b];
    }
    const double norm = std::sqrt(dot(w, w));
    if (norm == 0.0) break;
    for (std::size_t a = 0; a < rank; ++a) v[a] = w[a] / norm;
  }
  std::vector<double> out(n * rank, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    out[i * rank] = dot(std::span<const double>(y.data() + i * rank, rank), v) >= 0.0 ? 1.0 : -1.0;
  }
  return out;
}

}  // namespace

double relaxation_objective(const AffinityMatrix& aff, const EmbeddingVectors& emb) {
  if (aff.size() != emb.size()) throw std::invalid_argument("relaxation_objective: size mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < aff.size(); ++i) {
    for (std::size_t j = 0; j < aff.size(); ++j) {
      total += aff.at(i, j) * dot(emb.vector(i), emb.vector(j));
    }
  }
  return total;
}

double discrete_objective(const AffinityMatrix& aff, const Partition& part) {
  if (aff.size() != part.size()) throw std::invalid_argument("discrete_objective: size mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < aff.size(); ++i) {
    const double si = part.label(i) == 0 ? 1.0 : -1.0;
    for (std::size_t j = 0; j < aff.size(); ++j) {
      const double sj = part.label(j) == 0 ? 1.0 : -1.0;
      total += aff.at(i, j) * si * sj;
    }
  }
  return total;
}

RelaxationResult solve_gram_relaxation(const AffinityMatrix& aff, std::size_t rank,
                                       const SeedSpec& seed, int max_sweeps, double tol) {
  if (rank < 2) throw std::invalid_argument("solve_gram_relaxation: rank must be >= 2");
  if (!(tol > 0.0)) throw std::invalid_argument("solve_gram_relaxation: tol must be > 0");
  if (!aff.is_symmetric(1e-12)) {
    throw std::invalid_argument("solve_gram_relaxation: affinity matrix is not symmetric");
  }
  const std::size_t n = aff.size();
  std::vector<double> y(n * rank);
  auto rng = seed.stream();
  for (std::size_t i = 0; i < n; ++i) {
    double norm = 0.0;
    while (norm == 0.0) {
      for (std::size_t c = 0; c < rank; ++c) y[i * rank + c] = rng.normal();
      norm = std::sqrt(dot({y.data() + i * rank, rank}, {y.data() + i * rank, rank}));
    }
    for (std::size_t c = 0; c < rank; ++c) y[i * rank + c] /= norm;
  }

  RelaxationResult result;
  result.objective_history.push_back(objective_of(aff, y, rank));
  std::vector<double> g(rank);
  int sweeps_left = max_sweeps;
  for (int restart = 0; restart <= kMaxSignRestarts; ++restart) {
    result.converged = false;
    while (sweeps_left > 0) {
      --sweeps_left;
      for (std::size_t i = 0; i < n; ++i) {
        std::fill(g.begin(), g.end(), 0.0);
        const auto row = aff.row(i);
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i || row[j] == 0.0) continue;
          const double* yj = y.data() + j * rank;
          for (std::size_t c = 0; c < rank; ++c) g[c] += row[j] * yj[c];
        }
        const double norm = std::sqrt(dot(g, g));
        if (norm > 0.0) {
          for (std::size_t c = 0; c < rank; ++c) y[i * rank + c] = g[c] / norm;
        }
      }
      const double prev = result.objective_history.back();
      const double now = objective_of(aff, y, rank);
      result.objective_history.push_back(now);
      if (now - prev < tol * std::max(std::abs(prev), std::numeric_limits<double>::min())) {
        result.converged = true;
        break;
      }
    }
    // Sign vectors are feasible rank-one points; restart from the dominant one
    // when it scores higher.
    auto signs = dominant_signs(y, n, rank);
    const double jump = objective_of(aff, signs, rank);
    if (!(jump > result.objective_history.back())) break;
    y = std::move(signs);
    result.objective_history.push_back(jump);
  }
  result.embedding = EmbeddingVectors(n, rank, std::move(y));
  return result;
}

Partition round_hyperplane(const EmbeddingVectors& emb, const SeedSpec& seed) {
  if (emb.size() == 0) throw std::invalid_argument("round_hyperplane: empty embedding");
  auto rng = seed.stream();
  std::vector<double> u(emb.rank());
  for (double& c : u) c = rng.normal();
  std::vector<int> labels(emb.size());
  for (std::size_t i = 0; i < emb.size(); ++i) labels[i] = dot(u, emb.vector(i)) > 0.0 ? 0 : 1;
  return Partition(std::move(labels), 2);
}

std::vector<Partition> generate_candidates(const EmbeddingVectors& emb,
                                           std::size_t n_candidates, const SeedSpec& seed) {
  if (n_candidates < 1) throw std::invalid_argument("generate_candidates: need >= 1 candidate");
  std::vector<Partition> out;
  out.reserve(n_candidates);
  for (std::size_t c = 0; c < n_candidates; ++c) out.push_back(round_hyperplane(emb, seed.derive(c)));
  return out;
}

std::vector<RankedCandidate> rank_candidates(const NeighborTable& table,
                                             std::span<const Partition> candidates,
                                             std::size_t k) {
  std::vector<RankedCandidate> unique;
  std::map<std::vector<int>, std::size_t> seen;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    auto canon = candidates[c].canonical();
    if (canon.n_nonempty() < 2) continue;
    if (!seen.emplace(canon.labels(), c).second) continue;
    unique.push_back({c, std::move(canon), 0.0});
  }
  parallel_for(unique.size(), [&](std::size_t u) {
    unique[u].cvr = cvr(table, unique[u].partition, k).value;
  });
  std::stable_sort(unique.begin(), unique.end(),
                   [](const RankedCandidate& a, const RankedCandidate& b) { return a.cvr < b.cvr; });
  return unique;
}

std::pair<Partition, Score> select_best_cvr(const NeighborTable& table,
                                            std::span<const Partition> candidates,
                                            std::size_t k) {
  auto ranked = rank_candidates(table, candidates, k);
  if (ranked.empty()) {
    throw UndefinedScoreError("select_best_cvr: every candidate is a single cluster");
  }
  return {ranked.front().partition, Score{ranked.front().cvr, ScoreKind::cvr}};
}

MultiwayResult refine_multiway(const NeighborTable& table, const Partition& base,
                               std::span<const Partition> ranked_candidates,
                               int target_clusters, std::size_t k) {
  if (target_clusters < 2) throw std::invalid_argument("refine_multiway: target must be >= 2");
  MultiwayResult result{base.canonical(), false};
  std::vector<Partition> remaining(ranked_candidates.begin(), ranked_candidates.end());

  while (result.partition.n_nonempty() < target_clusters && !remaining.empty()) {
    const std::size_t window = std::min(kRefineWindow, remaining.size());
    std::size_t pick = 0;
    double lowest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < window; ++j) {
      const double overlap = rand_index(result.partition, remaining[j]);
      if (overlap < lowest) {
        lowest = overlap;
        pick = j;
      }
    }
    result.partition = Partition::cross(result.partition, remaining[pick]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  result.exhausted = result.partition.n_nonempty() < target_clusters;

  while (result.partition.n_nonempty() > target_clusters) {
    const int l = result.partition.n_labels();
    std::vector<std::pair<int, int>> merges;
    for (int a = 0; a < l; ++a) {
      for (int b = a + 1; b < l; ++b) merges.emplace_back(a, b);
    }
    std::vector<Partition> merged(merges.size());
    std::vector<double> scores(merges.size());
    parallel_for(merges.size(), [&](std::size_t m) {
      const auto [a, b] = merges[m];
      auto labels = result.partition.labels();
      for (int& v : labels) {
        if (v == b) v = a;
      }
      merged[m] = Partition(std::move(labels), l).canonical();
      scores[m] = cvr(table, merged[m], k).value;
    });
    const auto best = static_cast<std::size_t>(
        std::min_element(scores.begin(), scores.end()) - scores.begin());
    result.partition = std::move(merged[best]);
  }
  return result;
}

ClusterResult cluster(const Dataset& ds, int target_clusters, const ClusterConfig& config) {
  if (ds.n_samples() < 4) throw std::invalid_argument("cluster: need at least 4 samples");
  if (target_clusters < 2) throw std::invalid_argument("cluster: target must be >= 2");
  const SeedSpec seed(config.seed);

  const Dataset work = config.jitter > 0.0 ? jitter(ds, seed.derive(0), config.jitter) : ds;
  const auto table = NeighborTable::build(work);
  const std::size_t rank =
      config.rank > 0 ? config.rank : default_embedding_rank(work.n_samples());

  ClusterResult out;
  double beta = config.beta.value_or(default_beta(config.k_max));
  for (int attempt = 0;; ++attempt) {
    if (attempt > 0) beta = beta > 0.0 ? 2.0 * beta : default_beta(config.k_max);
    const auto aff = build_affinity(table, config.k_max, beta);
    const auto relax =
        solve_gram_relaxation(aff, rank, seed.derive(1), config.max_sweeps, config.tol);
    auto candidates = generate_candidates(relax.embedding, config.n_candidates, seed.derive(2));
    auto ranked = rank_candidates(table, candidates, config.k);
    if (ranked.empty()) {
      if (attempt < kMaxBetaDoublings) continue;
      throw UndefinedScoreError("cluster: every rounded candidate is a single cluster");
    }
    out.beta_used = beta;
    out.relaxation_objective = relax.objective();
    out.sweeps = relax.objective_history.size() - 1;
    out.best_candidate_objective = -std::numeric_limits<double>::infinity();
    for (const auto& c : candidates) {
      out.best_candidate_objective =
          std::max(out.best_candidate_objective, discrete_objective(aff, c));
    }
    out.distinct_candidates = ranked.size();
    std::vector<Partition> rest;
    for (std::size_t r = 1; r < ranked.size(); ++r) rest.push_back(ranked[r].partition);

    auto multi = refine_multiway(table, ranked.front().partition, rest, target_clusters, config.k);
    out.partition = std::move(multi.partition);
    out.exhausted = multi.exhausted;
    out.cvr = cvr(table, out.partition, config.k);
    return out;
  }
}

}  // namespace cgclust
