// Copyright 2026 The FedRidge Authors
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

#ifndef FEDRIDGE_RANDOM_H_
#define FEDRIDGE_RANDOM_H_

#include <cstdint>
#include <random>
#include <span>

namespace fedridge {

// Derives an independent 64-bit seed for `stream` from `seed` using the
// SplitMix64 finalizer. Used everywhere a per-client / per-round / per-trial
// generator is needed so that results do not depend on evaluation order.
uint64_t MixSeed(uint64_t seed, uint64_t stream);

// Convenience overload for two-level derivations, e.g. (seed, round, client).
uint64_t MixSeed(uint64_t seed, uint64_t stream_a, uint64_t stream_b);

// Seedable, cross-platform deterministic generator.
//
// The bit stream is std::mt19937_64 (fully specified by the standard). Uniforms
// take the top 53 bits of each 64-bit word. Normals use the Box-Muller
// transform on two consecutive uniforms:
//   u1 = 1 - U1 in (0, 1],  u2 = U2 in [0, 1)
//   z0 = sqrt(-2 ln u1) cos(2 pi u2),  z1 = sqrt(-2 ln u1) sin(2 pi u2)
// z0 is returned first and z1 is cached for the next call. Nothing here
// depends on the implementation-defined std::*_distribution classes.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of precision.
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  double Normal();
  double Normal(double mean, double stddev) {
    return mean + stddev * Normal();
  }

  // Uniform integer in [0, n). n must be positive.
  uint64_t UniformIndex(uint64_t n);

  // Fisher-Yates, iterating from the back.
  void Shuffle(std::span<int> values);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace fedridge

#endif  // FEDRIDGE_RANDOM_H_
