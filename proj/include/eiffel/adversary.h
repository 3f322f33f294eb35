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

#ifndef EIFFEL_ADVERSARY_H_
#define EIFFEL_ADVERSARY_H_

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "eiffel/bulletin.h"
#include "eiffel/circuit.h"
#include "eiffel/field.h"
#include "eiffel/prng.h"

namespace eiffel {

enum class AttackKind {
  kNone,
  kSignFlip,
  kScaling,
  kAdditiveNoise,
  kMinMax,
  kMinSum
};

// Given the benign updates, returns the direction u^p along which MinMax and
// MinSum push the mean.
using PerturbationFn =
    std::function<std::vector<double>(std::span<const std::vector<double>>)>;

struct AttackSpec {
  AttackKind kind = AttackKind::kNone;
  // SignFlip and Scaling factor.
  double c = 1.0;
  // AdditiveNoise: per-coordinate N(mu, sigma^2).
  double sigma = 1.0;
  double mu = 0.0;
  // Empty means the negated unit mean of the benign updates.
  PerturbationFn perturbation;
};

std::string AttackKindName(AttackKind kind);
absl::StatusOr<AttackKind> ParseAttackKind(std::string_view name);

// Negated mean of the updates scaled to unit length.
std::vector<double> NegatedUnitMean(std::span<const std::vector<double>> u);

// Largest gamma (by bisection) such that mean + gamma * direction stays within
// the MinMax or MinSum distance budget of the benign set. kind must be kMinMax
// or kMinSum; fewer than two benign updates is NotApplicable.
absl::StatusOr<double> SolveAttackGamma(
    AttackKind kind, std::span<const std::vector<double>> benign,
    std::span<const double> direction);

// Poisoned version of u. MinMax and MinSum ignore u and use benign.
absl::StatusOr<std::vector<double>> Poison(
    std::span<const double> u, const AttackSpec& spec,
    std::span<const std::vector<double>> benign, Prng& prng);

// Protocol-level deviations of one malicious client.
struct ClientMisbehavior {
  // Peers whose input shares are corrupted in Round 2.
  std::vector<PartyId> bad_shares_to;
  // On arbitration, reveal the correct share instead of the corrupted one.
  bool reveal_correct = false;
  // Peers flagged without cause in Round 3(i).
  std::vector<PartyId> false_flags;
  // Provers whose summaries this client never posts.
  std::vector<PartyId> withhold_summaries;
  // Random values in place of every summary and digest share.
  bool corrupt_summary_shares = false;
  // Random values in place of the Round 4 aggregate share.
  bool corrupt_aggregate_share = false;
  // Claim acceptance with a proof built from a forged trace.
  bool forge_proof = false;

  bool empty() const;
};

struct MisbehaviorScript {
  std::map<PartyId, ClientMisbehavior> clients;
  // The server lists this honest client in the final C* without cause.
  std::optional<PartyId> server_drop_honest;
};

// Scripted clients must be at most m and all ids must name clients 1..n.
absl::Status ValidateScript(const MisbehaviorScript& script, size_t n,
                            size_t m);

// Whether the protocol rules are guaranteed to exclude this client whatever
// its update is.
bool EjectedByScript(const ClientMisbehavior& behavior, size_t m);

// The misbehaviors of the adversarial test matrix.
enum class MisbehaviorKind {
  kBadShares,
  kFalseFlag,
  kWithholdSummaries,
  kCorruptSummaryShares,
  kCorruptAggregateShare,
  kServerDropHonest
};

std::string MisbehaviorKindName(MisbehaviorKind kind);
absl::StatusOr<MisbehaviorKind> ParseMisbehaviorKind(std::string_view name);

// A randomized script of the given kind for the malicious clients, with
// targets among the honest ones. Variants alternate between the pigeonhole
// and arbitration paths.
MisbehaviorScript MakeScript(MisbehaviorKind kind,
                             std::span<const PartyId> malicious,
                             std::span<const PartyId> honest, size_t m,
                             Prng& prng);

// A trace on the given inputs whose outputs satisfy the circuit's convention,
// obtained by lying about multiplication outputs. Fails with NotApplicable if
// the outputs cannot be steered.
absl::StatusOr<WireTrace> ForgeAcceptingTrace(const PrimeField& field,
                                              const Circuit& circuit,
                                              std::span<const Fe> inputs);

}  // namespace eiffel

#endif  // EIFFEL_ADVERSARY_H_
