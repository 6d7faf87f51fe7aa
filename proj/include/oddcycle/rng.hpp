#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace oddcycle {

// All randomness in a run flows from one 64-bit master seed, expanded into
// independent per-component streams by label ("referee", "source", "alice",
// "bob"). Identical seed + label always yields an identical stream.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label);

// mt19937_64 with hand-rolled bounded/unit draws. The standard distribution
// adaptors are implementation-defined, which would break byte-identical
// output across stdlib versions; these helpers are fully specified.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, bound), bound > 0. Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t bound);

  // Uniform in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return unit() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace oddcycle
