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

#ifndef EIFFEL_SNIP_H_
#define EIFFEL_SNIP_H_

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "eiffel/circuit.h"
#include "eiffel/field.h"
#include "eiffel/polynomial.h"
#include "eiffel/prng.h"
#include "eiffel/sharing.h"

namespace eiffel {

struct BeaverTriple {
  Fe a;
  Fe b;
  Fe c;
};

// Proof that a circuit accepts the prover's inputs. f and g interpolate the
// left and right inputs of the M multiplication gates at 1..M, with random
// anchors f(0) and g(0); h = f * g is kept as its values at 0..2M.
struct SnipProof {
  Fe f0;
  Fe g0;
  std::vector<Fe> h_evals;
  BeaverTriple beaver;

  Polynomial HCoefficients(const PrimeField& field) const;
};

// Flat layout used for sharing: [f0, g0, a, b, c, h(0), ..., h(2M)].
inline constexpr size_t kProofHeader = 5;
size_t ProofLength(size_t num_mul_gates);
std::vector<Fe> FlattenProof(const SnipProof& proof);
SnipProof UnflattenProof(std::span<const Fe> flat);

// Evaluates the circuit and builds the proof. Fails with BadArity on an input
// count mismatch and NotApplicable when 2M + 2 >= p.
absl::StatusOr<std::pair<WireTrace, SnipProof>> Prove(
    const PrimeField& field, const Circuit& circuit, std::span<const Fe> inputs,
    Prng& prng);

// Builds a proof from an arbitrary trace. Multiplication outputs are taken
// from the trace as claimed, so a trace that violates a gate yields a proof
// with f * g != h. h beyond M is filled honestly.
SnipProof ProveFromTrace(const PrimeField& field, const Circuit& circuit,
                         const WireTrace& trace, Prng& prng);

// One recipient's shares of one prover's submission.
struct ProofBundle {
  Fe index;
  std::vector<Fe> inputs;
  // Empty for the prover's own bundle.
  std::vector<Fe> proof;
};

struct SplitResult {
  // bundles[j - 1] goes to party j, j = 1..n.
  std::vector<ProofBundle> bundles;
  std::vector<CheckString> input_checks;
  std::vector<CheckString> proof_checks;
};

// Shares the inputs over all n parties and the proof over everyone except the
// prover, both with threshold m + 1.
absl::StatusOr<SplitResult> SplitProof(const Vss& vss,
                                       std::span<const Fe> inputs,
                                       const SnipProof& proof,
                                       size_t prover_index, size_t n, size_t m,
                                       Prng& prng);

// Checks every share in the bundle against the prover's commitments.
bool VerifyBundle(const Vss& vss, const ProofBundle& bundle,
                  std::span<const CheckString> input_checks,
                  std::span<const CheckString> proof_checks, bool check_proof);

// Public randomness drawn by the server after submissions are sealed.
struct Challenge {
  Fe r;
  // Zero-on-success circuits: coefficients l_k for sum_k l_k out_k.
  std::vector<Fe> output_coeffs;
};

// Samples r outside the interpolation nodes 0..2M and fresh output
// coefficients.
Challenge DrawChallenge(const PrimeField& field, const Circuit& circuit,
                        Prng& prng);

// Lagrange weights at r, computed once per challenge and reused for every
// prover.
struct ChallengeWeights {
  Fe r;
  std::vector<Fe> fg;  // nodes 0..M
  std::vector<Fe> h;   // nodes 0..2M
};
ChallengeWeights PrepareChallenge(const PrimeField& field,
                                  const Circuit& circuit, Fe r);

// A verifier's shares of the quantities it derives locally.
struct LocalEvaluation {
  Fe w_out;
  Fe f_r;
  Fe rg_r;  // r * g(r)
  Fe h_r;
  Fe a;
  Fe b;
  Fe c;
};

// The value w_out must reconstruct to for an accepting prover.
Fe ExpectedOutput(const Circuit& circuit);

absl::StatusOr<LocalEvaluation> EvaluateLocal(const PrimeField& field,
                                              const Circuit& circuit,
                                              const ProofBundle& bundle,
                                              const Challenge& challenge,
                                              const ChallengeWeights& weights);

struct BeaverOpeningShares {
  Fe d;  // [f(r)] - [a]
  Fe e;  // [r g(r)] - [b]
};
BeaverOpeningShares BeaverShares(const PrimeField& field,
                                 const LocalEvaluation& local);

// Share of lambda = r (f(r) g(r) - h(r)) from the opened d and e.
Fe BeaverLambdaShare(const PrimeField& field, const LocalEvaluation& local,
                     Fe r, Fe d, Fe e);

// Share of the same lambda without a triple, from the local product of
// degree-m shares and a share of z = 1. The result has degree 2m.
Fe MultiplicativeLambdaShare(const PrimeField& field,
                             const LocalEvaluation& local, Fe r, Fe z_share);

enum class SnipVerdict { kAccepted, kRejected };

struct SummaryCheck {
  SnipVerdict verdict = SnipVerdict::kRejected;
  ReconReport w_out;
  ReconReport lambda;
  bool fell_back = false;
};

// Reconstructs w_out and lambda from verifier shares and accepts iff
// w_out == expected and lambda == 0. Decoding failures are returned as
// errors. lambda uses lambda_threshold (m + 1 for the Beaver path, 2m + 1
// for the multiplicative path).
absl::StatusOr<SummaryCheck> VerifySummaries(
    const PrimeField& field, std::span<const Point> w_out_shares,
    std::span<const Point> lambda_shares, Fe expected,
    const ReconOptions& w_options, const ReconOptions& lambda_options,
    Prng& prng);

}  // namespace eiffel

#endif  // EIFFEL_SNIP_H_
