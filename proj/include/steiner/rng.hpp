#pragma once

#include <cstdint>

namespace steiner {

// SplitMix64. All randomized code in the library and the CLI draws from this
// stream so results are reproducible across platforms (std:: distributions
// are not portable).
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, m), m > 0
  std::uint64_t below(std::uint64_t m) { return next() % m; }

  // uniform in [0, 1)
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // derive an independent stream
  Rng split() { return Rng(next() ^ 0xd1b54a32d192ed03ULL); }
};

}  // namespace steiner
