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

#ifndef EIFFEL_FIELD_H_
#define EIFFEL_FIELD_H_

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "eiffel/prng.h"

namespace eiffel {

// 2^56 - 2^32 + 1. Prime with two-adicity 32.
inline constexpr uint64_t kDefaultPrime = 0xffffff00000001ULL;
inline constexpr uint64_t kSmallPrime = 17;

// Field element in canonical form [0, p). The modulus lives in PrimeField.
struct Fe {
  uint64_t v = 0;

  friend bool operator==(Fe a, Fe b) = default;
  friend auto operator<=>(Fe a, Fe b) = default;
};

struct OpCounts {
  uint64_t mul = 0;
  uint64_t inv = 0;
  uint64_t group = 0;
};

namespace internal {
extern thread_local OpCounts* current_op_counts;
}  // namespace internal

// Counts field multiplications and inversions (and commitment-group
// operations) performed on this thread while in scope. Scopes nest; the
// innermost one receives the counts.
class ScopedOpCounter {
 public:
  ScopedOpCounter();
  ~ScopedOpCounter();
  ScopedOpCounter(const ScopedOpCounter&) = delete;
  ScopedOpCounter& operator=(const ScopedOpCounter&) = delete;

  const OpCounts& counts() const { return counts_; }

 private:
  OpCounts counts_;
  OpCounts* previous_;
};

inline void CountGroupOps(uint64_t k) {
  if (internal::current_op_counts != nullptr) {
    internal::current_op_counts->group += k;
  }
}

// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool IsPrime(uint64_t n);

class PrimeField {
 public:
  // Fails with InvalidArgument if the modulus is not an odd prime below 2^63.
  static absl::StatusOr<PrimeField> Create(uint64_t modulus);

  static const PrimeField& Default();
  static const PrimeField& Small();

  uint64_t modulus() const { return p_; }

  Fe Zero() const { return Fe{0}; }
  Fe One() const { return Fe{1}; }
  Fe FromU64(uint64_t x) const { return Fe{x % p_}; }
  // Negative values map to p - |x|.
  Fe FromInt(int64_t x) const;
  // Centered representative in (-p/2, p/2].
  int64_t ToCentered(Fe a) const;

  Fe Add(Fe a, Fe b) const {
    uint64_t s = a.v + b.v;
    return Fe{s >= p_ ? s - p_ : s};
  }
  Fe Sub(Fe a, Fe b) const {
    return Fe{a.v >= b.v ? a.v - b.v : a.v + p_ - b.v};
  }
  Fe Neg(Fe a) const { return Fe{a.v == 0 ? 0 : p_ - a.v}; }
  Fe Mul(Fe a, Fe b) const {
    if (internal::current_op_counts != nullptr) {
      ++internal::current_op_counts->mul;
    }
    return Fe{static_cast<uint64_t>(
        (static_cast<unsigned __int128>(a.v) * b.v) % p_)};
  }
  // a*b + c
  Fe MulAdd(Fe a, Fe b, Fe c) const { return Add(Mul(a, b), c); }
  Fe Pow(Fe a, uint64_t e) const;
  // Inverse of a nonzero element.
  Fe Inv(Fe a) const;
  Fe Div(Fe a, Fe b) const { return Mul(a, Inv(b)); }

  // Replaces every element by its inverse with a single field inversion.
  // All elements must be nonzero.
  void BatchInvert(std::span<Fe> values) const;

  Fe Random(Prng& prng) const { return Fe{prng.Uniform(p_)}; }
  Fe RandomNonZero(Prng& prng) const { return Fe{1 + prng.Uniform(p_ - 1)}; }

  // Largest k with 2^k | p - 1.
  int two_adicity() const { return two_adicity_; }
  // Primitive 2^log_n-th root of unity. Requires log_n <= two_adicity().
  Fe RootOfUnity(int log_n) const;

  friend bool operator==(const PrimeField& a, const PrimeField& b) {
    return a.p_ == b.p_;
  }

 private:
  explicit PrimeField(uint64_t p);

  uint64_t p_;
  int two_adicity_ = 0;
  Fe two_adic_root_;
};

}  // namespace eiffel

#endif  // EIFFEL_FIELD_H_
