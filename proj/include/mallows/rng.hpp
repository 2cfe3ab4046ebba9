#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace mallows {

// Counter-based generator: output k of a stream is a fixed bijective mix of
// (key + k * gamma), i.e. SplitMix64 with an explicit key. Streams are
// addressed by (master_seed, chain, step), so any chain step can be replayed
// without advancing a shared state.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit constexpr CounterRng(std::uint64_t key) : key_(key) {}

  static constexpr CounterRng stream(std::uint64_t master_seed, std::uint64_t chain, std::uint64_t step) {
    std::uint64_t k = mix(master_seed ^ 0x6a09e667f3bcc909ULL);
    k = mix(k ^ (chain * 0xbb67ae8584caa73bULL + 0x3c6ef372fe94f82bULL));
    k = mix(k ^ (step * 0xa54ff53a5f1d36f1ULL + 0x510e527fade682d1ULL));
    return CounterRng(k);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() {
    counter_ += kGamma;
    return mix(key_ + counter_);
  }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1].
  double uniform_open_zero() { return 1.0 - uniform(); }

  // Exponential with rate 1.
  double exponential() { return -std::log(uniform_open_zero()); }

  // Uniform integer in [0, bound), bound >= 1. Lemire's nearly-divisionless method.
  std::uint64_t below(std::uint64_t bound) {
    unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>((*this)()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  std::uint64_t key() const { return key_; }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace mallows
