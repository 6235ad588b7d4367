#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace mixbound {

// splitmix64, used for seed expansion and seed derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic seed derivation: hash of (master, stream ids). Trials,
// perturbations and blocks each get their own derived stream so runs are
// reproducible regardless of evaluation order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t s1 = 0,
                                 std::uint64_t s2 = 0, std::uint64_t s3 = 0) {
  std::uint64_t st = master ^ 0xd1b54a32d192ed03ULL;
  std::uint64_t h = splitmix64(st);
  st ^= s1 + 0x8cb92ba72f3d8dd7ULL;
  h ^= splitmix64(st);
  st ^= s2 + 0xe7037ed1a0b428dbULL;
  h ^= splitmix64(st);
  st ^= s3 + 0xa0761d6478bd642fULL;
  h ^= splitmix64(st);
  return h;
}

// xoshiro256** engine. All sampling helpers are implemented here rather than
// through <random> distributions so that output is byte-stable across
// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64(sm);
  }

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Unbiased integer in [0, n). n must be >= 1.
  std::uint64_t uniform_index(std::uint64_t n) {
    const std::uint64_t threshold = -n % n;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // Standard normal via Box-Muller; consumes exactly two uniforms.
  double gaussian() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
  }

  // Draw an index with the given (normalized) probabilities.
  int discrete(const std::vector<double>& probs) {
    const double u = uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
      acc += probs[i];
      if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size()) - 1;
  }

  // Independent child stream; does not consume state of the parent.
  Rng split(std::uint64_t stream) const { return Rng(derive_seed(seed_, 0x5be5e1f9u, stream)); }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t seed_;
  std::uint64_t s_[4];
};

}  // namespace mixbound
