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

#include "eiffel/prng.h"

#include <cmath>

namespace eiffel {

uint64_t MixSeed(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Prng Prng::Derive(uint64_t seed, uint64_t label) {
  return Prng(MixSeed(MixSeed(seed) ^ MixSeed(label + 0x632be59bd9b4e019ULL)));
}

uint64_t Prng::Uniform(uint64_t bound) {
  // Rejection sampling on the top of the range to avoid modulo bias.
  uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

double Prng::UniformDouble() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Prng::Gaussian(double mean, double stddev) {
  if (spare_.has_value()) {
    double z = *spare_;
    spare_.reset();
    return mean + stddev * z;
  }
  // Box-Muller; u1 is kept away from zero.
  double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
  double u2 = UniformDouble();
  double radius = std::sqrt(-2.0 * std::log(u1));
  spare_ = radius * std::sin(2.0 * M_PI * u2);
  return mean + stddev * radius * std::cos(2.0 * M_PI * u2);
}

void Prng::Fill(uint8_t* out, size_t len) {
  size_t i = 0;
  while (i < len) {
    uint64_t x = engine_();
    for (int k = 0; k < 8 && i < len; ++k, ++i) {
      out[i] = static_cast<uint8_t>(x >> (8 * k));
    }
  }
}

}  // namespace eiffel
