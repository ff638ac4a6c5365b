#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace bayesmi {

// Child-seed derivation for independent streams: the splitmix64 finalizer
// applied to seed advanced by (index+1) golden-ratio increments. Streams for
// distinct indices are decorrelated and the mapping is identical on every
// platform.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// xoshiro256++ generator with explicit uniform/normal transforms.
//
// std::mt19937_64 itself is portable but the standard <random> distributions
// are not; every transform here is spelled out so that identical seeds give
// bitwise-identical doubles on any conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    // Seed expansion per the xoshiro authors: four splitmix64 outputs.
    std::uint64_t sm = seed;
    for (auto& word : state_) {
      sm += 0x9E3779B97F4A7C15ULL;
      std::uint64_t z = sm;
      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
      z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
      word = z ^ (z >> 31);
    }
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0,1) with 53 random mantissa bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via the Marsaglia polar method, caching the second
  // value of each pair. The draw sequence is a pure function of the seed.
  //
  // Polar rather than Box-Muller on purpose: the only libm call is log
  // (sqrt is an exact IEEE instruction), whereas adjacent sin/cos calls get
  // fused into sincos by some compilers, whose results differ from the
  // standalone functions by an ulp for some arguments.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * scale;
    has_spare_ = true;
    return u * scale;
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Integer in [0,n), n > 0. Fixed-point multiply; bias is at most n/2^64.
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Fisher-Yates permutation of {0,...,n-1}.
  std::vector<std::size_t> permutation(std::size_t n) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t i = n; i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(next_below(i));
      std::swap(perm[i - 1], perm[j]);
    }
    return perm;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4] = {};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace bayesmi
