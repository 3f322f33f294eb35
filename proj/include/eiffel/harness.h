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

#ifndef EIFFEL_HARNESS_H_
#define EIFFEL_HARNESS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "eiffel/adversary.h"
#include "eiffel/predicates.h"
#include "eiffel/protocol.h"
#include "eiffel/quantize.h"
#include "eiffel/sharing.h"

namespace eiffel {

// Parameters of a simulated federated run. Mirrors the flat key=value config
// file; see SetConfigValue for the keys.
struct RunConfig {
  size_t n = 20;
  size_t m = 2;
  // Model dimension (features plus bias).
  size_t d = 16;
  int field_bits = 56;
  PredicateKind predicate = PredicateKind::kNormBound;
  AttackSpec attack;
  // Number of poisoning clients; defaults to m.
  std::optional<size_t> attackers;
  std::optional<MisbehaviorKind> misbehavior;
  ReconStrategy recon = ReconStrategy::kGao;
  SummaryPath path = SummaryPath::kBeaver;
  std::string crypto = "test";
  // 0 disables random projection.
  size_t project_dim = 0;
  uint64_t project_seed = 7;
  QuantParams quant;
  size_t iterations = 1;
  uint64_t seed = 1;
  std::string out;
  bool write_transcript = false;

  size_t samples_per_client = 40;
  size_t public_samples = 400;
  size_t test_samples = 1000;
  double learning_rate = 1.0;
  double separation = 1.0;

  size_t num_attackers() const { return attackers.value_or(m); }
};

// Sets one config key from its text value. ConfigError on an unknown key or
// a malformed value.
absl::Status SetConfigValue(RunConfig& config, std::string_view key,
                            std::string_view value);

// Parses "key = value" lines; blank lines and '#' comments are skipped.
absl::StatusOr<RunConfig> ParseRunConfig(std::string_view text);

// Checks the protocol preconditions and the harness limits before any
// protocol step runs.
absl::Status ValidateRunConfig(const RunConfig& config);

absl::StatusOr<PredicateKind> ParsePredicateKind(std::string_view name);

// --- Synthetic learning task ---

struct Dataset {
  std::vector<std::vector<double>> x;  // last coordinate is a constant 1
  std::vector<int> y;
};

// Two Gaussian classes at +-(separation / 2) along a random unit direction.
class SyntheticTask {
 public:
  SyntheticTask(size_t dim, double separation, uint64_t seed);

  size_t dim() const { return direction_.size() + 1; }
  Dataset Sample(size_t count, Prng& prng) const;

 private:
  std::vector<double> direction_;
  double separation_;
};

// One gradient step on the logistic loss: -lr * grad.
std::vector<double> LocalUpdate(std::span<const double> w, const Dataset& data,
                                double learning_rate);
double Accuracy(std::span<const double> w, const Dataset& data);

// --- Predicates from public data ---

// Statistics of clean updates on the public dataset at the current model.
struct PublicView {
  std::vector<double> full;                 // update on all of D_P
  std::vector<std::vector<double>> chunks;  // updates on client-sized chunks
};

PublicView ComputePublicView(std::span<const double> w,
                             const Dataset& public_data, size_t chunk_size,
                             double learning_rate);

// Thresholds for the predicate, in quantized units, computed from the public
// view. `reference` is the last global update (used by Cosine).
absl::StatusOr<PredicateSpec> DerivePredicate(PredicateKind kind,
                                              const PublicView& view,
                                              std::span<const double> reference,
                                              const QuantParams& quant);

// Zeno++ and Cosine compare against updates rescaled to the norm target.
std::vector<double> NormalizeForPredicate(const PredicateSpec& spec,
                                          std::span<const double> u,
                                          const QuantParams& quant);

// --- Plaintext defense ---

bool PlaintextAccepts(const PredicateSpec& spec, std::span<const int64_t> u);

struct OracleResult {
  std::vector<PartyId> accepted;
  std::vector<int64_t> sum;
};

// Filters the quantized updates (client i at index i - 1) with the predicate
// and sums the accepted ones.
OracleResult PlaintextOracle(const PredicateSpec& spec,
                             std::span<const std::vector<int64_t>> updates);

// --- Iterations ---

struct IterationReport {
  RunResult run;
  PredicateSpec spec;
  size_t num_mul_gates = 0;
  size_t num_gates = 0;
  std::vector<PartyId> malicious;
  std::vector<std::vector<int64_t>> quantized;
  // Plaintext-filter accept set minus clients the script ejects.
  std::vector<PartyId> expected_accepted;
  std::vector<Fe> expected_aggregate;
  bool expect_abort = false;
  // The run matches the oracle: same accepted set and aggregate, or an
  // abort exactly when one is expected.
  bool oracle_agrees = false;
  // Every honest client was accepted (vacuous for aborted runs).
  bool honest_included = false;
};

// Model state carried between iterations.
struct ModelState {
  std::vector<double> w;
  std::vector<double> last_update;
};

// One protocol run on freshly sampled client updates at the given model.
absl::StatusOr<IterationReport> RunIteration(const RunConfig& config,
                                             const SyntheticTask& task,
                                             const ModelState& model,
                                             size_t iteration);

// Convenience form starting from the zero model.
absl::StatusOr<IterationReport> RunIteration(const RunConfig& config);

enum class Arm { kNoDefense, kEiffel, kPlaintextDefense };
std::string ArmName(Arm arm);

struct TrainingPoint {
  size_t iteration = 0;
  Arm arm = Arm::kNoDefense;
  double accuracy = 0;
};

struct TrainingReport {
  std::vector<TrainingPoint> accuracy;
  // Per iteration, the EIFFeL arm's report.
  std::vector<IterationReport> eiffel;
  // Per iteration, the plaintext filter's accept set on the same updates
  // the EIFFeL arm saw (in full dimension).
  std::vector<std::vector<PartyId>> plaintext_accepted;
  // Client decisions where EIFFeL and the plaintext filter agree, and total.
  size_t agreeing_decisions = 0;
  size_t total_decisions = 0;
};

// Trains three arms side by side. With projection on, the EIFFeL arm checks
// projected updates and applies the full-dimension mean of those it accepts.
absl::StatusOr<TrainingReport> RunTraining(const RunConfig& config);

// Metrics and CSV writers.
std::string MetricsJson(const RunConfig& config, const TrainingReport& report);
std::string AccuracyCsv(const TrainingReport& report);
std::string AggregateChecksum(std::span<const Fe> aggregate);

}  // namespace eiffel

#endif  // EIFFEL_HARNESS_H_
