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

#ifndef EIFFEL_PREDICATES_H_
#define EIFFEL_PREDICATES_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "eiffel/circuit.h"
#include "eiffel/field.h"
#include "eiffel/prng.h"
#include "eiffel/quantize.h"

namespace eiffel {

enum class PredicateKind { kNormBound, kNormBall, kZenoPP, kCosine, kProduct };

// Validation predicate over a quantized update u (integer coordinates). All
// thresholds are in quantized units.
struct PredicateSpec {
  PredicateKind kind = PredicateKind::kNormBound;

  // NormBound: ||u||^2 < rho_sq. NormBall: ||u - reference||^2 <= rho_sq.
  int64_t rho_sq = 0;
  // NormBall center, ZenoPP gradient v, Cosine reference u'.
  std::vector<int64_t> reference;
  // ZenoPP: gamma * <v, u> - rho * ||u||^2 + epsilon >= 0.
  int64_t gamma = 0;
  int64_t rho = 0;
  int64_t epsilon = 0;
  // Cosine: cos_den * <u', u> - cos_num * norm_target >= 0.
  int64_t cos_num = 0;
  int64_t cos_den = 1;
  // ZenoPP and Cosine: |‖u‖^2 - norm_target| <= norm_band.
  int64_t norm_target = 0;
  int64_t norm_band = 0;

  std::vector<PredicateSpec> parts;

  // Bits per inequality witness; 0 derives the smallest width that fits.
  size_t slack_bits = 0;

  static PredicateSpec NormBound(int64_t rho_sq);
  static PredicateSpec NormBall(std::vector<int64_t> center, int64_t rho_sq);
  static PredicateSpec ZenoPP(std::vector<int64_t> v, int64_t gamma,
                              int64_t rho, int64_t epsilon, int64_t norm_target,
                              int64_t norm_band);
  static PredicateSpec Cosine(std::vector<int64_t> reference, int64_t cos_num,
                              int64_t cos_den, int64_t norm_target,
                              int64_t norm_band);
  static PredicateSpec Product(std::vector<PredicateSpec> parts);
};

std::string PredicateKindName(PredicateKind kind);

// Smallest band that honest normalized, stochastically rounded updates stay
// within: ceil(2 sqrt(target * dim) + dim).
int64_t NormBandFor(int64_t norm_target, size_t dim);

// Circuit for a predicate plus what the client needs to build its witness.
// Inputs are the dim update coordinates followed by num_aux slack bits; the
// circuit is zero-on-success.
struct CompiledPredicate {
  struct Inequality {
    // Integer slack; the predicate holds iff 0 <= slack < 2^bits.
    std::function<__int128(std::span<const int64_t>)> slack;
    size_t bits = 0;
    size_t offset = 0;  // first aux input
  };

  Circuit circuit;
  size_t dim = 0;
  size_t num_aux = 0;
  std::vector<Inequality> inequalities;
};

// Fails with SlackOverflow if a slack range cannot be represented, and with
// BadDimension if reference vectors do not match dim.
absl::StatusOr<CompiledPredicate> CompilePredicate(const PrimeField& field,
                                                   const PredicateSpec& spec,
                                                   const QuantParams& quant,
                                                   size_t dim);

// Update coordinates followed by the honest slack bits. For an update that
// violates the predicate the bits are still filled (low bits of the slack) and
// the circuit rejects.
absl::StatusOr<std::vector<Fe>> WitnessInputs(const PrimeField& field,
                                              const CompiledPredicate& pred,
                                              std::span<const int64_t> u);

// Output wire prod_k (phi - c_k); zero iff phi equals one of the constants.
// A single constant costs one affine gate and no multiplications.
Wire EqualityProduct(const PrimeField& field, Circuit& circuit, Wire phi,
                     std::span<const Fe> constants);

// Concatenates zero-on-success circuits over the same inputs into one circuit
// whose outputs are the union of theirs.
absl::StatusOr<Circuit> CombineCircuits(std::span<const Circuit> circuits);

// Random coefficients l_k for the combined check sum_k l_k out_k = 0.
std::vector<Fe> DrawCombination(const PrimeField& field, size_t num_outputs,
                                Prng& prng);

Fe CombineOutputs(const PrimeField& field, const Circuit& circuit,
                  const WireTrace& trace, std::span<const Fe> coeffs);

}  // namespace eiffel

#endif  // EIFFEL_PREDICATES_H_
