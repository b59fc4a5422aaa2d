#include "cgclust/metrics.hpp"

#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace cgclust {

namespace {

double pairs(std::size_t n) {
  return n < 2 ? 0.0 : 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
}

}  // namespace

double rand_index(const Partition& p, const Partition& q) {
  if (p.size() != q.size()) throw std::invalid_argument("rand_index: length mismatch");
  const std::size_t n = p.size();
  if (n < 2) throw std::invalid_argument("rand_index: need at least 2 points");

  std::map<std::pair<int, int>, std::size_t> joint;
  for (std::size_t i = 0; i < n; ++i) ++joint[{p.label(i), q.label(i)}];

  double both = 0.0;
  for (const auto& [key, c] : joint) both += pairs(c);
  double in_p = 0.0;
  for (std::size_t c : p.counts()) in_p += pairs(c);
  double in_q = 0.0;
  for (std::size_t c : q.counts()) in_q += pairs(c);

  const double total = pairs(n);
  // agreements = pairs together in both + pairs apart in both
  const double apart_both = total - in_p - in_q + both;
  return (both + apart_both) / total;
}

Partition singleton_partition(std::size_t n) {
  std::vector<int> labels(n);
  std::iota(labels.begin(), labels.end(), 0);
  return Partition(std::move(labels));
}

}  // namespace cgclust
