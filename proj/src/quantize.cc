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

#include "eiffel/quantize.h"

#include <algorithm>
#include <bit>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "eiffel/status.h"

namespace eiffel {

int64_t QuantParams::max_abs() const {
  return static_cast<int64_t>(std::ceil(clip * scale()));
}

std::vector<int64_t> QuantizeToInts(std::span<const double> u,
                                    const QuantParams& q, Prng& prng) {
  std::vector<int64_t> out(u.size());
  for (size_t i = 0; i < u.size(); ++i) {
    double x = std::clamp(u[i], -q.clip, q.clip) * q.scale();
    double lo = std::floor(x);
    int64_t v = static_cast<int64_t>(lo);
    if (prng.UniformDouble() < x - lo) ++v;
    out[i] = v;
  }
  return out;
}

int64_t QuantizeNearest(double x, const QuantParams& q) {
  return static_cast<int64_t>(std::llround(x * q.scale()));
}

std::vector<Fe> IntsToField(const PrimeField& field,
                            std::span<const int64_t> v) {
  std::vector<Fe> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = field.FromInt(v[i]);
  return out;
}

std::vector<Fe> Quantize(const PrimeField& field, std::span<const double> u,
                         const QuantParams& q, Prng& prng) {
  std::vector<int64_t> ints = QuantizeToInts(u, q, prng);
  return IntsToField(field, ints);
}

std::vector<double> Dequantize(const PrimeField& field, std::span<const Fe> v,
                               const QuantParams& q) {
  std::vector<double> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    out[i] = static_cast<double>(field.ToCentered(v[i])) / q.scale();
  }
  return out;
}

absl::Status CheckAggregationHeadroom(const PrimeField& field,
                                      const QuantParams& q, size_t n) {
  long double total = static_cast<long double>(n) * q.clip * q.scale();
  if (q.scale_bits < 0 || q.scale_bits > 40 || q.clip <= 0 ||
      total >= static_cast<long double>(field.modulus()) / 2) {
    return MakeError(ErrorKind::kConfigError,
                     absl::StrCat("quantization: n * clip * 2^scale_bits must "
                                  "stay below p / 2 (n = ",
                                  n, ", clip = ", q.clip,
                                  ", scale_bits = ", q.scale_bits, ")"));
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<double>> RandomProject(std::span<const double> u,
                                                  size_t target_dim,
                                                  uint64_t seed) {
  size_t dim = std::bit_ceil(std::max<size_t>(u.size(), 1));
  if (target_dim == 0 || target_dim > dim) {
    return MakeError(ErrorKind::kBadDimension,
                     absl::StrCat("RandomProject: target dimension ",
                                  target_dim, " not in [1, ", dim, "]"));
  }
  Prng prng(seed);
  std::vector<double> x(dim, 0.0);
  for (size_t i = 0; i < u.size(); ++i) {
    x[i] = (prng.NextU64() & 1) ? u[i] : -u[i];
  }
  for (size_t len = 1; len < dim; len <<= 1) {
    for (size_t i = 0; i < dim; i += 2 * len) {
      for (size_t j = i; j < i + len; ++j) {
        double a = x[j], b = x[j + len];
        x[j] = a + b;
        x[j + len] = a - b;
      }
    }
  }
  // Orthonormal transform is H / sqrt(dim); subsampling then rescales by
  // sqrt(dim / target_dim), so the combined factor is 1 / sqrt(target_dim).
  std::vector<size_t> idx(dim);
  for (size_t i = 0; i < dim; ++i) idx[i] = i;
  for (size_t i = 0; i < target_dim; ++i) {
    std::swap(idx[i], idx[i + prng.Uniform(dim - i)]);
  }
  double factor = 1.0 / std::sqrt(static_cast<double>(target_dim));
  std::vector<double> out(target_dim);
  for (size_t i = 0; i < target_dim; ++i) out[i] = x[idx[i]] * factor;
  return out;
}

}  // namespace eiffel
