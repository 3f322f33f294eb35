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

#ifndef EIFFEL_PROTOCOL_H_
#define EIFFEL_PROTOCOL_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "eiffel/adversary.h"
#include "eiffel/bulletin.h"
#include "eiffel/circuit.h"
#include "eiffel/field.h"
#include "eiffel/sharing.h"

namespace eiffel {

// How verifiers produce their share of the digest lambda. kBeaver opens
// d and e through the server; kMultiplicative multiplies shares locally and
// needs m < (n - 1) / 4.
enum class SummaryPath { kBeaver, kMultiplicative };

std::string SummaryPathName(SummaryPath path);
absl::StatusOr<SummaryPath> ParseSummaryPath(std::string_view name);

struct ProtocolConfig {
  size_t n = 0;
  size_t m = 0;
  ReconStrategy recon = ReconStrategy::kGao;
  SummaryPath path = SummaryPath::kBeaver;
  std::string crypto = "test";
  bool production_group = false;
  // Also decode every summary and aggregate coordinate with Gao and record
  // whether the selected strategy agreed.
  bool gao_shadow = false;
  // After the run, count the shares of each honest client the coalition of
  // malicious clients and server can open.
  bool audit_exposure = false;
  uint64_t seed = 0;
};

// ConfigError unless 4 <= n, m < floor((n - 1) / 3), and the strategy and
// path preconditions hold.
absl::Status ValidateProtocolConfig(const ProtocolConfig& config);

struct ProtocolInputs {
  Circuit circuit;
  // The first `dim` circuit inputs are aggregated; the rest are witness.
  size_t dim = 0;
  // inputs[i - 1] belongs to client i.
  std::vector<std::vector<Fe>> inputs;
  MisbehaviorScript script;
  // Clients controlled by the adversary, for the exposure audit. Scripted
  // clients are always included.
  std::vector<PartyId> malicious;
};

// One-way steps in an honest run: {client, server}.
struct StepCounts {
  size_t client = 0;
  size_t server = 0;
};
StepCounts ExpectedSteps(SummaryPath path);

struct PartyMetrics {
  // One-way steps in order, e.g. "send r2/shares". Arbitration and dispute
  // steps only happen when triggered and are kept apart.
  std::vector<std::string> steps;
  std::vector<std::string> conditional_steps;
  // Encoded bulletin bytes by phase.
  std::map<std::string, uint64_t> bytes_sent;
  OpCounts ops;
};

struct ProverDecision {
  PartyId prover = 0;
  bool accepted = false;
  bool fell_back = false;
  // The selected strategy decoded the same (w_out, lambda) as Gao.
  bool agrees_with_gao = true;
  Fe w_out;
  Fe lambda;
};

// A client's claim that it was listed in the final C* although its
// summaries on the bulletin verify.
struct DisputeTranscript {
  PartyId prover = 0;
  std::vector<Point> w_out_shares;
  std::vector<Point> lambda_shares;
};

struct RunResult {
  bool aborted = false;
  std::string abort_reason;
  std::vector<PartyId> cstar_after_flags;
  std::vector<PartyId> cstar_after_verification;
  std::vector<PartyId> final_cstar;
  // Clients not in the final C*, when the run did not abort.
  std::vector<PartyId> accepted;
  std::vector<Fe> aggregate;
  std::vector<ProverDecision> decisions;
  // Provers whose disputes were upheld.
  std::vector<PartyId> disputes;
  bool aggregate_agrees_with_gao = true;
  // Largest number of distinct plaintext shares of one honest client the
  // coalition could open; filled when audit_exposure is set.
  size_t max_share_exposure = 0;
  // parties[0] is the server, parties[i] client i.
  std::vector<PartyMetrics> parties;
  std::string transcript;
};

// Runs one aggregation round with all parties simulated in id order.
absl::StatusOr<RunResult> RunProtocol(const PrimeField& field,
                                      const ProtocolConfig& config,
                                      const ProtocolInputs& inputs);

}  // namespace eiffel

#endif  // EIFFEL_PROTOCOL_H_
