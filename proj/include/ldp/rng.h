// Copyright 2026 The ldpest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LDP_RNG_H_
#define LDP_RNG_H_

#include <cstdint>
#include <random>

namespace ldp {

// Deterministic pseudorandom stream. The engine is std::mt19937_64 (its
// seeding and output sequence are fixed by the standard); the variate
// transforms below are implemented here because the std::* distributions are
// implementation-defined and would break the cross-platform reproducibility
// contract: identical seed => identical draw sequence everywhere.
//
// Streams are splittable: Split(master, index) yields independent streams
// for parallel work, so a simulation is reproducible given (seed, index)
// regardless of thread count.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(Mix(seed)) {}

  // Stream number `index` derived from `master`. Distinct indices give
  // decorrelated streams.
  static Rng Split(uint64_t master, uint64_t index) {
    return Rng(Mix(master) ^ Mix(0x9E3779B97F4A7C15ULL + index));
  }

  uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double UniformDouble() { return (NextU64() >> 11) * 0x1.0p-53; }

  // Uniform on {0, 1, ..., bound-1}; unbiased via rejection.
  uint32_t UniformBelow(uint32_t bound) {
    // Reject the final partial block of the 2^64 range.
    uint64_t threshold = (0 - static_cast<uint64_t>(bound)) % bound;
    for (;;) {
      uint64_t r = NextU64();
      if (r >= threshold) return static_cast<uint32_t>(r % bound);
    }
  }

  bool Bernoulli(double p) { return UniformDouble() < p; }

 private:
  // SplitMix64 finalizer; decorrelates consecutive or otherwise structured
  // seeds before they reach the engine.
  static uint64_t Mix(uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace ldp

#endif  // LDP_RNG_H_
