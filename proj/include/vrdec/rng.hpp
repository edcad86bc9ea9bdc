#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace vrdec {

inline constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based stream: the k-th output is mix(key + k * golden). Streams for
// different (seed, node, stream) triples are keyed independently, so draws do
// not depend on the order in which nodes are visited.
class StreamRng {
 public:
  using result_type = std::uint64_t;

  explicit StreamRng(std::uint64_t key = 0) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
    ++counter_;
    return splitmix64_mix(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Standard normal by Box-Muller (one value per call, the pair is not cached
  // so the stream position depends only on the call count).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t position() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

enum class StreamId : std::uint64_t {
  BatchSampling = 1,
  SnapshotCoin = 2,
  Generator = 3,
};

inline StreamRng derive_stream(std::uint64_t master_seed, std::uint64_t node,
                               StreamId stream) {
  std::uint64_t k = splitmix64_mix(master_seed ^ 0x6a09e667f3bcc908ULL);
  k = splitmix64_mix(k ^ (node + 0x3c6ef372fe94f82bULL));
  k = splitmix64_mix(k ^ (static_cast<std::uint64_t>(stream) * 0xa54ff53a5f1d36f1ULL));
  return StreamRng(k);
}

}  // namespace vrdec
