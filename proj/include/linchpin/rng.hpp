#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace linchpin {

// SplitMix64 step; used for seed expansion and substream derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Seeded pseudo-random stream (xoshiro256++ core, SplitMix64 seeding).
///
/// Two streams built from equal seeds produce identical draw sequences,
/// bitwise. Substream i of a stream with seed s is a fresh stream whose
/// seed is the (i+1)-th output of a SplitMix64 sequence started at s, so
/// replicate chains get distinct, well-separated generator states from a
/// single user-facing seed. Not cryptographic.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  std::uint64_t seed() const { return seed_; }

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

  /// Uniform draw on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) {
    if (!(lo < hi)) throw std::domain_error("uniform: requires lo < hi");
    return lo + (hi - lo) * uniform();
  }

  /// Standard normal draw (Marsaglia polar method, spare value cached).
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
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
  }

  /// Derive the seed of substream `index` without constructing it.
  std::uint64_t substream_seed(std::uint64_t index) const {
    std::uint64_t sm = seed_;
    std::uint64_t child = 0;
    for (std::uint64_t i = 0; i <= index; ++i) child = splitmix64(sm);
    return child;
  }

  /// Independent child stream for replicate chains.
  RandomStream substream(std::uint64_t index) const {
    return RandomStream(substream_seed(index));
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t seed_;
  std::uint64_t state_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace linchpin
