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

#include "eiffel/field.h"

#include <string>

#include "absl/strings/str_cat.h"
#include "eiffel/status.h"

namespace eiffel {
namespace internal {
thread_local OpCounts* current_op_counts = nullptr;
}  // namespace internal

ScopedOpCounter::ScopedOpCounter() : previous_(internal::current_op_counts) {
  internal::current_op_counts = &counts_;
}

ScopedOpCounter::~ScopedOpCounter() {
  internal::current_op_counts = previous_;
  if (previous_ != nullptr) {
    previous_->mul += counts_.mul;
    previous_->inv += counts_.inv;
    previous_->group += counts_.group;
  }
}

namespace {

uint64_t MulMod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

uint64_t PowMod(uint64_t a, uint64_t e, uint64_t m) {
  uint64_t r = 1 % m;
  a %= m;
  while (e > 0) {
    if (e & 1) r = MulMod(r, a, m);
    a = MulMod(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool IsPrime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t small : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % small == 0) return n == small;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (uint64_t a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL,
                     1795265022ULL}) {
    uint64_t x = PowMod(a % n, d, n);
    if (a % n == 0 || x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = MulMod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

absl::StatusOr<PrimeField> PrimeField::Create(uint64_t modulus) {
  if (modulus < 3 || modulus >= (1ULL << 63) || !IsPrime(modulus)) {
    return MakeError(ErrorKind::kConfigError,
                     absl::StrCat("PrimeField::Create: ", modulus,
                                  " is not an odd prime below 2^63"));
  }
  return PrimeField(modulus);
}

const PrimeField& PrimeField::Default() {
  static const PrimeField* field = new PrimeField(kDefaultPrime);
  return *field;
}

const PrimeField& PrimeField::Small() {
  static const PrimeField* field = new PrimeField(kSmallPrime);
  return *field;
}

PrimeField::PrimeField(uint64_t p) : p_(p) {
  uint64_t odd = p - 1;
  while ((odd & 1) == 0) {
    odd >>= 1;
    ++two_adicity_;
  }
  // Find a quadratic non-residue; its odd part generates the 2-Sylow group.
  for (uint64_t z = 2; z < p; ++z) {
    if (PowMod(z, (p - 1) / 2, p) == p - 1) {
      two_adic_root_ = Fe{PowMod(z, odd, p)};
      break;
    }
  }
}

Fe PrimeField::FromInt(int64_t x) const {
  if (x >= 0) return Fe{static_cast<uint64_t>(x) % p_};
  uint64_t mag = static_cast<uint64_t>(-(x + 1)) + 1;
  return Neg(Fe{mag % p_});
}

int64_t PrimeField::ToCentered(Fe a) const {
  if (a.v > p_ / 2) return -static_cast<int64_t>(p_ - a.v);
  return static_cast<int64_t>(a.v);
}

Fe PrimeField::Pow(Fe a, uint64_t e) const {
  Fe r = One();
  while (e > 0) {
    if (e & 1) r = Mul(r, a);
    a = Mul(a, a);
    e >>= 1;
  }
  return r;
}

Fe PrimeField::Inv(Fe a) const {
  if (internal::current_op_counts != nullptr) {
    ++internal::current_op_counts->inv;
  }
  // Extended Euclid on signed 128-bit values.
  __int128 t = 0, new_t = 1;
  __int128 r = p_, new_r = a.v;
  while (new_r != 0) {
    __int128 q = r / new_r;
    __int128 tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (t < 0) t += p_;
  return Fe{static_cast<uint64_t>(t)};
}

void PrimeField::BatchInvert(std::span<Fe> values) const {
  if (values.empty()) return;
  std::vector<Fe> prefix(values.size());
  Fe acc = One();
  for (size_t i = 0; i < values.size(); ++i) {
    prefix[i] = acc;
    acc = Mul(acc, values[i]);
  }
  Fe inv = Inv(acc);
  for (size_t i = values.size(); i-- > 0;) {
    Fe original = values[i];
    values[i] = Mul(inv, prefix[i]);
    inv = Mul(inv, original);
  }
}

Fe PrimeField::RootOfUnity(int log_n) const {
  Fe w = two_adic_root_;
  for (int k = two_adicity_; k > log_n; --k) w = Mul(w, w);
  return w;
}

}  // namespace eiffel
