#include "cgclust/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace cgclust {

std::string_view to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::cvr: return "cvr";
    case ObjectiveKind::mi: return "mi";
    case ObjectiveKind::nic: return "nic";
  }
  return "unknown";
}

ObjectiveKind parse_objective(const std::string& name) {
  if (name == "cvr") return ObjectiveKind::cvr;
  if (name == "mi") return ObjectiveKind::mi;
  if (name == "nic") return ObjectiveKind::nic;
  throw std::invalid_argument("unknown objective '" + name + "' (cvr, mi, nic)");
}

bool minimizes(ObjectiveKind kind) { return kind == ObjectiveKind::cvr; }

std::size_t default_rank(ObjectiveKind kind) {
  return kind == ObjectiveKind::cvr ? kDefaultUncertaintyRank : kDefaultEntropyRank;
}

namespace {

std::vector<std::vector<std::size_t>> members_of(const Partition& part) {
  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(part.n_labels()));
  for (std::size_t i = 0; i < part.size(); ++i) {
    members[static_cast<std::size_t>(part.label(i))].push_back(i);
  }
  return members;
}

}  // namespace

std::optional<Score> mi_objective(const NeighborTable& table, const Partition& part,
                                  std::size_t k) {
  if (part.size() != table.size()) throw std::invalid_argument("mi_objective: size mismatch");
  for (std::size_t c : part.counts()) {
    if (c > 0 && c < k + 1) return std::nullopt;
  }
  const double conditional = conditional_data_entropy(table, part, k).value;
  return Score{kl_entropy(table, k).value - conditional, ScoreKind::mutual_information};
}

// sum_{k=1}^{n-1} psi(k) = (n-1) psi(n) - (n-1), so the psi terms cancel
// and the offset is the same for every n.
double meannn_offset(std::size_t n) {
  if (n < 2) throw std::invalid_argument("meannn_offset: need n >= 2");
  return 1.0 + std::numbers::ln2;
}

Score meannn_entropy(const NeighborTable& table, std::span<const std::size_t> subset) {
  const std::size_t n = subset.size();
  if (n < 2) throw std::invalid_argument("meannn_entropy: need at least 2 points");
  std::vector<char> member(table.size(), 0);
  for (std::size_t i : subset) member.at(i) = 1;
  std::vector<double> row_sums;
  row_sums.reserve(n);
  for (std::size_t i : subset) {
    const auto nbrs = table.neighbors(i);
    double s = 0.0;
    for (std::size_t r = 0; r < nbrs.size(); ++r) {
      if (member[nbrs[r]]) s += table.log_distance(i, r + 1);
    }
    row_sums.push_back(s);
  }
  std::sort(row_sums.begin(), row_sums.end());
  double total = 0.0;
  for (double s : row_sums) total += s;
  const double nd = static_cast<double>(n);
  const double value =
      static_cast<double>(table.dims()) * total / (nd * (nd - 1.0)) + meannn_offset(n);
  return {value, ScoreKind::differential_entropy};
}

std::optional<Score> nic_objective(const NeighborTable& table, const Partition& part) {
  if (part.size() != table.size()) throw std::invalid_argument("nic_objective: size mismatch");
  const auto members = members_of(part);
  for (const auto& m : members) {
    if (m.size() == 1) return std::nullopt;
  }
  const double n = static_cast<double>(part.size());
  double value = 0.0;
  for (const auto& m : members) {
    if (m.empty()) continue;
    value -= static_cast<double>(m.size()) / n * meannn_entropy(table, m).value;
  }
  return Score{value, ScoreKind::nic};
}

std::optional<Score> evaluate_objective(ObjectiveKind kind, const NeighborTable& table,
                                        const Partition& part, std::size_t k) {
  switch (kind) {
    case ObjectiveKind::cvr:
      if (part.n_nonempty() < 2) return std::nullopt;
      return cvr(table, part, k);
    case ObjectiveKind::mi: return mi_objective(table, part, k);
    case ObjectiveKind::nic: return nic_objective(table, part);
  }
  return std::nullopt;
}

}  // namespace cgclust
