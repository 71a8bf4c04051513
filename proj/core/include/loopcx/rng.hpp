#pragma once

#include <cstdint>

namespace loopcx {

// splitmix64: tiny, seedable, and stable across platforms. Every randomized
// battery in the library derives its draws from this generator so a seed
// pins the whole run.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1), 53 mantissa bits
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform in [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform integer in [0, m)
  std::uint64_t below(std::uint64_t m) { return next() % m; }
};

// Independent stream for item `idx` of a batch seeded by `seed`.
inline SplitMix64 stream_for(std::uint64_t seed, std::uint64_t idx) {
  SplitMix64 root(seed ^ (0x5851f42d4c957f2dULL * (idx + 1)));
  root.next();
  return root;
}

}  // namespace loopcx
