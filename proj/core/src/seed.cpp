#include "cgclust/seed.hpp"

#include <cmath>
#include <numbers>

namespace cgclust {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

SeedSpec SeedSpec::derive(std::uint64_t index) const {
  auto path = path_;
  path.push_back(index);
  return SeedSpec(root_, std::move(path));
}

std::uint64_t SeedSpec::key() const {
  std::uint64_t h = splitmix64(root_);
  for (std::uint64_t p : path_) h = splitmix64(h ^ splitmix64(p + 0x5851f42d4c957f2dULL));
  return h;
}

RandomStream SeedSpec::stream() const { return RandomStream(key()); }

double RandomStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace cgclust
