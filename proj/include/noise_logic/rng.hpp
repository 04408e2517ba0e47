#pragma once

#include <cstdint>
#include <initializer_list>

namespace noise_logic {

// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives a child key from a parent key and a label. Used to build
// hierarchical stream identities such as (seed, trial, train).
constexpr std::uint64_t derive_key(std::uint64_t parent, std::uint64_t label) noexcept {
  return mix64(mix64(parent ^ 0x6a09e667f3bcc909ULL) + mix64(label + 0x9e3779b97f4a7c15ULL));
}

constexpr std::uint64_t derive_key(std::uint64_t parent,
                                   std::initializer_list<std::uint64_t> labels) noexcept {
  for (auto l : labels) parent = derive_key(parent, l);
  return parent;
}

// Counter-based stream: the i-th output is a pure function of (key, i), so a
// stream can be replayed or split without sharing mutable generator state.
class StreamRng {
 public:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  constexpr StreamRng(std::uint64_t seed, std::uint64_t stream_label) noexcept
      : key_(derive_key(seed, stream_label)) {}

  constexpr explicit StreamRng(std::uint64_t key) noexcept : key_(key) {}

  constexpr std::uint64_t at(std::uint64_t counter) const noexcept {
    return mix64(key_ + (counter + 1) * kGamma);
  }

  constexpr std::uint64_t next() noexcept { return at(counter_++); }

  // Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Bernoulli(p); p = 0 never fires and p = 1 always fires.
  constexpr bool bernoulli(double p) noexcept { return uniform() < p; }

  // Uniform integer in [0, bound), modulo with rejection of the biased tail.
  constexpr std::uint64_t below(std::uint64_t bound) noexcept {
    if (bound == 0) return 0;
    const std::uint64_t floor = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= floor) return r % bound;
    }
  }

  constexpr std::uint64_t key() const noexcept { return key_; }
  constexpr std::uint64_t position() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace noise_logic
