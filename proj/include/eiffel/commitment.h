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

#ifndef EIFFEL_COMMITMENT_H_
#define EIFFEL_COMMITMENT_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string_view>

#include "absl/status/statusor.h"
#include "eiffel/field.h"

namespace eiffel {

// Cyclic group of prime order p (the field modulus) with generator g, used for
// Feldman commitments. Elements are fixed-width byte strings.
class CommitmentGroup {
 public:
  virtual ~CommitmentGroup() = default;

  virtual std::string_view name() const = 0;
  virtual size_t element_size() const = 0;

  // Writes g^e.
  virtual void Commit(Fe e, uint8_t* out) const = 0;

  // Checks g^value == prod_k psi[k]^(index^k), where psi holds count
  // consecutive elements.
  virtual bool VerifyShare(uint64_t index, Fe value, const uint8_t* psi,
                           size_t count) const = 0;
};

// Order-p subgroup of Z_q^* for the smallest q = kp + 1 below 2^63 (q = 103 for
// p = 17). Fast; meant for tests and simulation.
absl::StatusOr<std::unique_ptr<CommitmentGroup>> MakeToyGroup(
    const PrimeField& field);

// Order-p subgroup of Z_q^* for a fixed 2048-bit prime q. Only available for
// the default field.
absl::StatusOr<std::unique_ptr<CommitmentGroup>> MakeProductionGroup(
    const PrimeField& field);

}  // namespace eiffel

#endif  // EIFFEL_COMMITMENT_H_
