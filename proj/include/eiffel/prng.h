// Copyright 2026 The EIFFeL Authors
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

#ifndef EIFFEL_PRNG_H_
#define EIFFEL_PRNG_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>

namespace eiffel {

// Seeded pseudo-random stream. Every randomized operation in the library takes
// one of these so that runs are reproducible. std::mt19937_64 has a fully
// specified output sequence; the distributions are implemented here because
// the standard ones differ across library vendors.
class Prng {
 public:
  explicit Prng(uint64_t seed) : engine_(seed) {}

  // Independent stream for (seed, label), e.g. one per party.
  static Prng Derive(uint64_t seed, uint64_t label);

  uint64_t NextU64() { return engine_(); }

  // Uniform in [0, bound). bound must be positive.
  uint64_t Uniform(uint64_t bound);

  // Uniform in [0, 1).
  double UniformDouble();

  double Gaussian(double mean, double stddev);

  void Fill(uint8_t* out, size_t len);

 private:
  std::mt19937_64 engine_;
  // Second Box-Muller output, handed out by the next Gaussian call.
  std::optional<double> spare_;
};

// SplitMix64 finalizer, used to derive seeds.
uint64_t MixSeed(uint64_t x);

}  // namespace eiffel

#endif  // EIFFEL_PRNG_H_
