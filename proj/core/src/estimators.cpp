#include "cgclust/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cgclust/errors.hpp"

namespace cgclust {

std::string_view to_string(ScoreKind kind) {
  switch (kind) {
    case ScoreKind::differential_entropy: return "differential_entropy";
    case ScoreKind::discrete_entropy: return "discrete_entropy";
    case ScoreKind::conditional_entropy: return "conditional_entropy";
    case ScoreKind::consistency_violation: return "consistency_violation";
    case ScoreKind::label_uncertainty: return "label_uncertainty";
    case ScoreKind::cvr: return "cvr";
    case ScoreKind::mutual_information: return "mutual_information";
    case ScoreKind::nic: return "nic";
  }
  return "unknown";
}

namespace {

// Sums in ascending order so the result does not depend on sample order.
double order_free_sum(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

void check_sizes(const NeighborTable& table, const Partition& part) {
  if (part.size() != table.size()) {
    throw std::invalid_argument("partition has " + std::to_string(part.size()) +
                                " labels for " + std::to_string(table.size()) + " points");
  }
}

// (d/N) sum_i sum_{m=lo}^{hi} w[m] ln(epsbar_{i,m} / eps_{i,m}).
//
// Same-cluster neighbors are met in rank order while walking row i, so the
// c-th one found is epsbar_{i,c}. Ranks past the cluster's last member use
// the fallback eps_{i,N-1}.
double weighted_log_ratio(const NeighborTable& table, const Partition& part,
                          std::span<const double> w, std::size_t lo, std::size_t hi) {
  const std::size_t n = table.size();
  const std::size_t last = table.row_length();
  std::vector<double> per_point(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const int y = part.label(i);
    const auto nbrs = table.neighbors(i);
    const auto rel = table.relative_logs(i);
    double acc = 0.0;
    std::size_t c = 0;
    // A cluster with n_y <= m has no m-th member other than i itself.
    const std::size_t reachable = std::min(hi, part.count(y) - 1);
    for (std::size_t r = 0; r < nbrs.size() && c < reachable; ++r) {
      if (part.label(nbrs[r]) != y) continue;
      ++c;
      if (c >= lo) acc += w[c] * (rel[r] - rel[c - 1]);
    }
    for (std::size_t m = std::max(lo, c + 1); m <= hi; ++m) {
      acc += w[m] * (rel[last - 1] - rel[m - 1]);
    }
    per_point[i] = acc;
  }
  return static_cast<double>(table.dims()) * order_free_sum(per_point) / static_cast<double>(n);
}

}  // namespace

double digamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("digamma: argument must be > 0");
  double result = 0.0;
  while (x < 10.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // Asymptotic series: ln x - 1/(2x) - sum_n B_2n / (2n x^2n).
  const double series =
      inv2 * (1.0 / 12 -
              inv2 * (1.0 / 120 -
                      inv2 * (1.0 / 252 -
                              inv2 * (1.0 / 240 - inv2 * (1.0 / 132 - inv2 * (691.0 / 32760))))));
  return result + std::log(x) - 0.5 * inv - series;
}

double bias_constant(std::size_t k, std::size_t n) {
  if (k < 1 || k >= n) {
    throw std::invalid_argument("bias_constant: need 1 <= k < n (k=" + std::to_string(k) +
                                ", n=" + std::to_string(n) + ")");
  }
  const double kd = static_cast<double>(k);
  const double nd = static_cast<double>(n);
  return digamma(nd) - digamma(kd) + std::log(2.0 * kd / nd);
}

Score kl_entropy(const NeighborTable& table, std::size_t k) {
  const std::size_t n = table.size();
  if (k < 1 || k >= n) throw std::invalid_argument("kl_entropy: need 1 <= k < N");
  std::vector<double> logs(n);
  for (std::size_t i = 0; i < n; ++i) logs[i] = table.log_distance(i, k);
  const double nd = static_cast<double>(n);
  const double value = std::log(nd / static_cast<double>(k)) +
                       static_cast<double>(table.dims()) * order_free_sum(logs) / nd +
                       bias_constant(k, n);
  return {value, ScoreKind::differential_entropy};
}

Score kl_entropy(const NeighborTable& table, std::span<const std::size_t> subset,
                 std::size_t k) {
  const std::size_t n = subset.size();
  if (k < 1 || n < k + 1) {
    throw std::invalid_argument("kl_entropy: subset of " + std::to_string(n) +
                                " points is too small for k=" + std::to_string(k));
  }
  std::vector<char> member(table.size(), 0);
  for (std::size_t i : subset) member.at(i) = 1;
  std::vector<double> logs;
  logs.reserve(n);
  for (std::size_t i : subset) {
    const auto nbrs = table.neighbors(i);
    std::size_t seen = 0;
    for (std::size_t r = 0; r < nbrs.size(); ++r) {
      if (member[nbrs[r]] && ++seen == k) {
        logs.push_back(table.log_distance(i, r + 1));
        break;
      }
    }
  }
  if (logs.size() != n) throw std::invalid_argument("kl_entropy: duplicate subset indices");
  const double nd = static_cast<double>(n);
  const double value = std::log(nd / static_cast<double>(k)) +
                       static_cast<double>(table.dims()) * order_free_sum(logs) / nd +
                       bias_constant(k, n);
  return {value, ScoreKind::differential_entropy};
}

Score plug_in_entropy(const Partition& part) {
  const double n = static_cast<double>(part.size());
  double h = 0.0;
  for (std::size_t c : part.counts()) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log(p);
  }
  return {std::max(h, 0.0), ScoreKind::discrete_entropy};
}

Score conditional_data_entropy(const NeighborTable& table, const Partition& part,
                               std::size_t k) {
  check_sizes(table, part);
  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(part.n_labels()));
  for (std::size_t i = 0; i < part.size(); ++i) {
    members[static_cast<std::size_t>(part.label(i))].push_back(i);
  }
  const double n = static_cast<double>(part.size());
  double h = 0.0;
  for (const auto& m : members) {
    if (m.empty()) continue;
    if (m.size() < k + 1) {
      throw std::invalid_argument("conditional_data_entropy: undersized cluster of " +
                                  std::to_string(m.size()) + " points for k=" +
                                  std::to_string(k));
    }
    h += static_cast<double>(m.size()) / n * kl_entropy(table, m, k).value;
  }
  return {h, ScoreKind::conditional_entropy};
}

Score consistency_violation(const NeighborTable& table, const Partition& part, std::size_t k) {
  const double value = plug_in_entropy(part).value +
                       conditional_data_entropy(table, part, k).value -
                       kl_entropy(table, k).value;
  return {value, ScoreKind::consistency_violation};
}

double coarse_graining_constant(const Partition& part, std::size_t k) {
  const std::size_t n = part.size();
  double total = 0.0;
  for (std::size_t c : part.counts()) {
    if (c <= k) continue;
    total += bias_constant(k, c) * static_cast<double>(c) / static_cast<double>(n);
  }
  return total - bias_constant(k, n);
}

Score label_uncertainty_k(const NeighborTable& table, const Partition& part, std::size_t k,
                          bool include_constant) {
  check_sizes(table, part);
  if (k < 1 || k > table.row_length()) throw std::out_of_range("label_uncertainty_k: bad rank");
  std::vector<double> w(table.size(), 0.0);
  w[k] = 1.0;
  double value = weighted_log_ratio(table, part, w, k, k);
  if (include_constant) value += coarse_graining_constant(part, k);
  return {value, ScoreKind::label_uncertainty};
}

std::vector<double> resampling_weights(std::size_t k, std::size_t n, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("resampling_weights: alpha must lie in [0, 1)");
  }
  if (k < 1 || k >= n) throw std::invalid_argument("resampling_weights: need 1 <= k < n");
  std::vector<double> w(n, 0.0);
  if (alpha == 0.0) {
    w[k] = 1.0;
    return w;
  }
  const double kd = static_cast<double>(k);
  const double log_keep = kd * std::log1p(-alpha);
  const double log_drop = std::log(alpha);
  const double lg_k = std::lgamma(kd);
  for (std::size_t m = k; m < n; ++m) {
    const double md = static_cast<double>(m);
    const double log_binom = std::lgamma(md) - lg_k - std::lgamma(md - kd + 1.0);
    w[m] = std::exp(log_binom + log_keep + (md - kd) * log_drop);
  }
  return w;
}

Score resampled_label_uncertainty(const NeighborTable& table, const Partition& part,
                                  std::size_t k, double alpha) {
  check_sizes(table, part);
  const auto w = resampling_weights(k, table.size(), alpha);
  const std::size_t hi = alpha == 0.0 ? k : table.row_length();
  return {weighted_log_ratio(table, part, w, k, hi), ScoreKind::label_uncertainty};
}

std::vector<double> total_uncertainty_weights(std::size_t k, std::size_t n) {
  if (k < 1 || k >= n) throw std::invalid_argument("total_uncertainty_weights: need 1 <= k < n");
  std::vector<double> w(n, 0.0);
  const double kd = static_cast<double>(k);
  for (std::size_t m = k; m < n; ++m) {
    const double md = static_cast<double>(m);
    w[m] = kd / (md * (md + 1.0));
  }
  return w;
}

Score total_label_uncertainty(const NeighborTable& table, const Partition& part,
                              std::size_t k) {
  check_sizes(table, part);
  const auto w = total_uncertainty_weights(k, table.size());
  return {weighted_log_ratio(table, part, w, k, table.row_length()),
          ScoreKind::label_uncertainty};
}

Score cvr(const NeighborTable& table, const Partition& part, std::size_t k) {
  const double h = plug_in_entropy(part).value;
  if (part.n_nonempty() < 2 || !(h > 0.0)) {
    throw UndefinedScoreError("CVR is undefined (0/0) for a partition with one nonempty cluster");
  }
  return {total_label_uncertainty(table, part, k).value / h, ScoreKind::cvr};
}

}  // namespace cgclust
