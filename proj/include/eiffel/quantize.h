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

#ifndef EIFFEL_QUANTIZE_H_
#define EIFFEL_QUANTIZE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "eiffel/field.h"
#include "eiffel/prng.h"

namespace eiffel {

// Fixed-point encoding: x -> round(clip(x) * 2^scale_bits).
struct QuantParams {
  int scale_bits = 12;
  double clip = 4.0;

  double scale() const { return static_cast<double>(int64_t{1} << scale_bits); }
  // Largest magnitude of a quantized coordinate.
  int64_t max_abs() const;
};

// Clips to [-clip, clip], scales and rounds stochastically so that the
// expected value equals the scaled input.
std::vector<int64_t> QuantizeToInts(std::span<const double> u,
                                    const QuantParams& q, Prng& prng);

// Deterministic nearest rounding, used for public thresholds.
int64_t QuantizeNearest(double x, const QuantParams& q);

std::vector<Fe> IntsToField(const PrimeField& field,
                            std::span<const int64_t> v);

std::vector<Fe> Quantize(const PrimeField& field, std::span<const double> u,
                         const QuantParams& q, Prng& prng);

// Centered lift then division by the scale.
std::vector<double> Dequantize(const PrimeField& field, std::span<const Fe> v,
                               const QuantParams& q);

// Sums of up to n quantized updates must not wrap: n * clip * scale < p / 2.
absl::Status CheckAggregationHeadroom(const PrimeField& field,
                                      const QuantParams& q, size_t n);

// Subsampled randomized Hadamard transform to target_dim coordinates. Norms
// are preserved in expectation. The same seed gives the same projection.
absl::StatusOr<std::vector<double>> RandomProject(std::span<const double> u,
                                                  size_t target_dim,
                                                  uint64_t seed);

}  // namespace eiffel

#endif  // EIFFEL_QUANTIZE_H_
