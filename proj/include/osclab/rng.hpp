#pragma once

#include <cstdint>

namespace osclab {

// SplitMix64. Small, fast, and bit-identical on every platform, which the
// reproducibility contract needs (std:: distributions are not portable).
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0,1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform integer in [lo, hi], inclusive; unbiased by rejection
  long long uniform_int(long long lo, long long hi) {
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<long long>(next());  // full 64-bit range
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return lo + static_cast<long long>(v % span);
  }
};

// Derive an independent stream seed for trial/worker `stream` off a root seed.
inline std::uint64_t mix_seed(std::uint64_t root, std::uint64_t stream) {
  SplitMix64 g(root ^ (0x632be59bd9b4e019ULL * (stream + 1)));
  g.next();
  return g.next();
}

}  // namespace osclab
