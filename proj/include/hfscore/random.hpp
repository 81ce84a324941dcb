#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hfs {

// splitmix64 finalizer; used to derive independent child seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed of child stream `index` of the stream seeded with `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

// Seedable stream with output that is identical on every platform: the
// engine is std::mt19937_64 (fully specified by the standard) and every
// conversion to a variate is done here rather than by std:: distributions.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  // Uniform on the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform integer in [0, n); n > 0. Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  RandomStream child(std::uint64_t index) { return RandomStream(derive_seed(engine_(), index)); }

 private:
  std::mt19937_64 engine_;
};

// Beta(1, b) by inversion: 1 - U^(1/b).
inline double sample_beta_one(double b, RandomStream& rng) {
  return 1.0 - std::pow(rng.uniform(), 1.0 / b);
}

}  // namespace hfs
