#pragma once

// Counter-based random stream. Draw n of a stream with key k is
//
//   splitmix64_mix(k + (n + 1) * 0x9e3779b97f4a7c15)
//
// so any draw is a pure function of (key, n). Replica i of a run seeded with
// master_seed uses key = substream_key(master_seed, i), which lets a single
// replica be regenerated without replaying the others.

#include <cstdint>

namespace homodyne {

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t substream_key(std::uint64_t master_seed, std::uint64_t index) {
  return splitmix64_mix(splitmix64_mix(master_seed) + (index + 1) * 0xd1b54a32d192ed03ULL);
}

/// Satisfies UniformRandomBitGenerator. Not shareable between threads; give
/// each worker its own stream.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit constexpr CounterRng(std::uint64_t key, std::uint64_t counter = 0) : key_(key), counter_(counter) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  constexpr result_type operator()() {
    ++counter_;
    return splitmix64_mix(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
  }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  constexpr double uniform_open() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

  constexpr std::uint64_t key() const { return key_; }
  constexpr std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace homodyne
