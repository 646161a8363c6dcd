// Copyright 2026 The GDCS Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GDCS_RNG_HPP_
#define GDCS_RNG_HPP_

#include <cstdint>
#include <random>

namespace gdcs {

// Seeded generator whose derived draws (uniform, Gaussian, bounded index)
// are computed here from raw mt19937_64 output, so a seed reproduces the
// same stream regardless of the standard library in use.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();

  // Standard normal (Marsaglia polar method, spare value cached).
  double normal();

  // Uniform integer in [0, bound), unbiased by rejection.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// SplitMix64 finalizer; the building block of every derived seed.
std::uint64_t mix64(std::uint64_t x);

// Combines a base seed with one more key, order-sensitive.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t key);

}  // namespace gdcs

#endif  // GDCS_RNG_HPP_
