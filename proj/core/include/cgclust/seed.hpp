#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace cgclust {

class RandomStream;

/// Identifies one reproducible random stream: a root seed plus a derivation
/// path. Equal (root, path) pairs always produce the same stream; streams on
/// different paths are statistically independent.
class SeedSpec {
 public:
  explicit SeedSpec(std::uint64_t root = 0, std::vector<std::uint64_t> path = {})
      : root_(root), path_(std::move(path)) {}

  std::uint64_t root() const { return root_; }
  const std::vector<std::uint64_t>& path() const { return path_; }

  /// Child stream identifier with `index` appended to the path.
  SeedSpec derive(std::uint64_t index) const;

  /// 64-bit key mixing root and path (splitmix64 chain).
  std::uint64_t key() const;

  RandomStream stream() const;

  friend bool operator==(const SeedSpec&, const SeedSpec&) = default;

 private:
  std::uint64_t root_;
  std::vector<std::uint64_t> path_;
};

// Variates are produced by explicit transforms of the raw engine output
// rather than <random> distributions, whose algorithms are
// implementation-defined; streams are therefore identical across toolchains.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t key) : engine_(key) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal (Box-Muller, one variate per call).
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace cgclust
