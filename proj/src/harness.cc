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

#include "eiffel/harness.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <utility>

#include "absl/strings/str_cat.h"
#include "eiffel/crypto.h"
#include "eiffel/encoding.h"
#include "eiffel/status.h"
#include "json.hpp"

namespace eiffel {
namespace {

// Threshold margins over what clean public chunks reach.
constexpr double kNormMargin = 1.5;
constexpr double kCosineMargin = 0.25;
constexpr int64_t kCosineDen = 1000;

// Stream labels.
constexpr uint64_t kPublicLabel = 1;
constexpr uint64_t kTestLabel = 2;
constexpr uint64_t kAttackerLabel = 3;
constexpr uint64_t kIterationBase = 1000;

absl::Status ConfigError(std::string_view message) {
  return MakeError(ErrorKind::kConfigError,
                   absl::StrCat("RunConfig: ", std::string(message)));
}

Prng IterationStream(uint64_t seed, size_t iteration, uint64_t label) {
  return Prng::Derive(MixSeed(seed + kIterationBase * (iteration + 1)), label);
}

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double Norm(std::span<const double> a) { return std::sqrt(Dot(a, a)); }

double Dist(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

std::vector<int64_t> QuantizeAllNearest(std::span<const double> u,
                                        const QuantParams& quant) {
  std::vector<int64_t> out(u.size());
  for (size_t i = 0; i < u.size(); ++i) out[i] = QuantizeNearest(u[i], quant);
  return out;
}

__int128 IntDot(std::span<const int64_t> a, std::span<const int64_t> b) {
  __int128 s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += static_cast<__int128>(a[i]) * b[i];
  return s;
}

int64_t IntNormSq(std::span<const int64_t> a) {
  return static_cast<int64_t>(IntDot(a, a));
}

std::vector<double> Rescaled(std::span<const double> u, double target) {
  double norm = Norm(u);
  std::vector<double> out(u.begin(), u.end());
  if (norm == 0) return out;
  for (double& x : out) x *= target / norm;
  return out;
}

template <typename T>
absl::StatusOr<T> ParseNumber(std::string_view key, std::string_view value) {
  T out{};
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (value.empty() || ec != std::errc() || ptr != end) {
    return ConfigError(absl::StrCat("bad value '", std::string(value), "' for ",
                                    std::string(key)));
  }
  return out;
}

absl::StatusOr<bool> ParseBool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  return ConfigError(absl::StrCat("bad value '", std::string(value), "' for ",
                                  std::string(key)));
}

}  // namespace

absl::StatusOr<PredicateKind> ParsePredicateKind(std::string_view name) {
  for (PredicateKind kind :
       {PredicateKind::kNormBound, PredicateKind::kNormBall,
        PredicateKind::kZenoPP, PredicateKind::kCosine}) {
    if (PredicateKindName(kind) == name) return kind;
  }
  return MakeError(ErrorKind::kConfigError,
                   absl::StrCat("ParsePredicateKind: unknown predicate '",
                                std::string(name), "'"));
}

absl::Status SetConfigValue(RunConfig& c, std::string_view key,
                            std::string_view value) {
  auto set = [&]<typename T>(T& field) -> absl::Status {
    EIFFEL_ASSIGN_OR_RETURN(field, ParseNumber<T>(key, value));
    return absl::OkStatus();
  };
  if (key == "n") return set(c.n);
  if (key == "m") return set(c.m);
  if (key == "d") return set(c.d);
  if (key == "field_bits") return set(c.field_bits);
  if (key == "predicate") {
    EIFFEL_ASSIGN_OR_RETURN(c.predicate, ParsePredicateKind(value));
    return absl::OkStatus();
  }
  if (key == "attack") {
    absl::StatusOr<AttackKind> kind = ParseAttackKind(value);
    if (!kind.ok()) return ConfigError(std::string(kind.status().message()));
    c.attack.kind = *kind;
    return absl::OkStatus();
  }
  if (key == "attack_c") return set(c.attack.c);
  if (key == "attack_sigma") return set(c.attack.sigma);
  if (key == "attack_mu") return set(c.attack.mu);
  if (key == "attackers") {
    size_t k;
    EIFFEL_ASSIGN_OR_RETURN(k, ParseNumber<size_t>(key, value));
    c.attackers = k;
    return absl::OkStatus();
  }
  if (key == "misbehavior") {
    if (value == "none") {
      c.misbehavior.reset();
      return absl::OkStatus();
    }
    absl::StatusOr<MisbehaviorKind> kind = ParseMisbehaviorKind(value);
    if (!kind.ok()) return ConfigError(std::string(kind.status().message()));
    c.misbehavior = *kind;
    return absl::OkStatus();
  }
  if (key == "recon") {
    absl::StatusOr<ReconStrategy> s = ParseReconStrategy(value);
    if (!s.ok()) return ConfigError(std::string(s.status().message()));
    c.recon = *s;
    return absl::OkStatus();
  }
  if (key == "path") {
    absl::StatusOr<SummaryPath> p = ParseSummaryPath(value);
    if (!p.ok()) return ConfigError(std::string(p.status().message()));
    c.path = *p;
    return absl::OkStatus();
  }
  if (key == "crypto") {
    c.crypto = std::string(value);
    return absl::OkStatus();
  }
  if (key == "project") {
    if (value == "off" || value == "none") {
      c.project_dim = 0;
      return absl::OkStatus();
    }
    return set(c.project_dim);
  }
  if (key == "project_seed") return set(c.project_seed);
  if (key == "quant_scale_bits") return set(c.quant.scale_bits);
  if (key == "quant_clip") return set(c.quant.clip);
  if (key == "iterations") return set(c.iterations);
  if (key == "seed") return set(c.seed);
  if (key == "out") {
    c.out = std::string(value);
    return absl::OkStatus();
  }
  if (key == "transcript") {
    EIFFEL_ASSIGN_OR_RETURN(c.write_transcript, ParseBool(key, value));
    return absl::OkStatus();
  }
  if (key == "samples_per_client") return set(c.samples_per_client);
  if (key == "public_samples") return set(c.public_samples);
  if (key == "test_samples") return set(c.test_samples);
  if (key == "learning_rate") return set(c.learning_rate);
  if (key == "separation") return set(c.separation);
  return ConfigError(absl::StrCat("unknown key '", std::string(key), "'"));
}

absl::StatusOr<RunConfig> ParseRunConfig(std::string_view text) {
  RunConfig config;
  auto strip = [](std::string_view v) {
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) {
      v.remove_prefix(1);
    }
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) {
      v.remove_suffix(1);
    }
    return v;
  };
  std::istringstream in{std::string(text)};
  std::string raw;
  size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = strip(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      return ConfigError(
          absl::StrCat("line ", line_no, ": expected key = value"));
    }
    EIFFEL_RETURN_IF_ERROR(SetConfigValue(config, strip(line.substr(0, eq)),
                                          strip(line.substr(eq + 1))));
  }
  return config;
}

absl::Status ValidateRunConfig(const RunConfig& c) {
  if (c.field_bits != 56) {
    return ConfigError(absl::StrCat("field_bits ", c.field_bits,
                                    " unsupported; only 56 is available"));
  }
  if (c.d < 2) return ConfigError("d must be at least 2");
  if (c.num_attackers() > c.m) {
    return ConfigError(
        absl::StrCat("attackers ", c.num_attackers(), " exceed m = ", c.m));
  }
  if (c.project_dim > 0) {
    if (c.project_dim > std::bit_ceil(c.d)) {
      return ConfigError(absl::StrCat("project ", c.project_dim,
                                      " exceeds padded dimension ",
                                      std::bit_ceil(c.d)));
    }
  }
  if (c.samples_per_client == 0 || c.public_samples < c.samples_per_client) {
    return ConfigError("public_samples must cover at least one client chunk");
  }
  if (c.iterations == 0) return ConfigError("iterations must be positive");
  if (c.quant.scale_bits < 0 || c.quant.scale_bits > 20 || c.quant.clip <= 0) {
    return ConfigError("quantization parameters out of range");
  }
  ProtocolConfig pc;
  pc.n = c.n;
  pc.m = c.m;
  pc.recon = c.recon;
  pc.path = c.path;
  pc.crypto = c.crypto;
  EIFFEL_RETURN_IF_ERROR(ValidateProtocolConfig(pc));
  return CheckAggregationHeadroom(PrimeField::Default(), c.quant, c.n);
}

SyntheticTask::SyntheticTask(size_t dim, double separation, uint64_t seed)
    : separation_(separation) {
  Prng prng(seed);
  direction_.resize(dim > 1 ? dim - 1 : 1);
  for (double& x : direction_) x = prng.Gaussian(0, 1);
  double norm = Norm(direction_);
  for (double& x : direction_) x /= norm;
}

Dataset SyntheticTask::Sample(size_t count, Prng& prng) const {
  Dataset data;
  data.x.reserve(count);
  data.y.reserve(count);
  for (size_t s = 0; s < count; ++s) {
    int label = static_cast<int>(prng.NextU64() & 1);
    double shift = (label ? 0.5 : -0.5) * separation_;
    std::vector<double> x(direction_.size() + 1, 1.0);
    for (size_t k = 0; k < direction_.size(); ++k) {
      x[k] = direction_[k] * shift + prng.Gaussian(0, 1);
    }
    data.x.push_back(std::move(x));
    data.y.push_back(label);
  }
  return data;
}

std::vector<double> LocalUpdate(std::span<const double> w, const Dataset& data,
                                double learning_rate) {
  std::vector<double> grad(w.size(), 0.0);
  for (size_t s = 0; s < data.x.size(); ++s) {
    double z = Dot(w, data.x[s]);
    double residual = 1.0 / (1.0 + std::exp(-z)) - data.y[s];
    for (size_t k = 0; k < w.size(); ++k) grad[k] += residual * data.x[s][k];
  }
  double scale = data.x.empty() ? 0.0 : -learning_rate / data.x.size();
  for (double& g : grad) g *= scale;
  return grad;
}

double Accuracy(std::span<const double> w, const Dataset& data) {
  if (data.x.empty()) return 0;
  size_t correct = 0;
  for (size_t s = 0; s < data.x.size(); ++s) {
    correct += (Dot(w, data.x[s]) > 0 ? 1 : 0) == data.y[s];
  }
  return static_cast<double>(correct) / data.x.size();
}

PublicView ComputePublicView(std::span<const double> w,
                             const Dataset& public_data, size_t chunk_size,
                             double learning_rate) {
  PublicView view;
  view.full = LocalUpdate(w, public_data, learning_rate);
  for (size_t start = 0; start + chunk_size <= public_data.x.size();
       start += chunk_size) {
    Dataset chunk;
    chunk.x.assign(public_data.x.begin() + start,
                   public_data.x.begin() + start + chunk_size);
    chunk.y.assign(public_data.y.begin() + start,
                   public_data.y.begin() + start + chunk_size);
    view.chunks.push_back(LocalUpdate(w, chunk, learning_rate));
  }
  return view;
}

absl::StatusOr<PredicateSpec> DerivePredicate(PredicateKind kind,
                                              const PublicView& view,
                                              std::span<const double> reference,
                                              const QuantParams& quant) {
  if (view.chunks.empty()) {
    return MakeError(ErrorKind::kConfigError,
                     "DerivePredicate: public view has no chunks");
  }
  const double scale = quant.scale();
  const size_t dim = view.full.size();
  switch (kind) {
    case PredicateKind::kNormBound: {
      double max_norm = 0;
      for (const auto& g : view.chunks) max_norm = std::max(max_norm, Norm(g));
      double rho = kNormMargin * max_norm * scale;
      return PredicateSpec::NormBound(
          static_cast<int64_t>(std::ceil(rho * rho)));
    }
    case PredicateKind::kNormBall: {
      double max_dist = 0;
      for (const auto& g : view.chunks) {
        max_dist = std::max(max_dist, Dist(g, view.full));
      }
      double rho = kNormMargin * max_dist * scale;
      return PredicateSpec::NormBall(
          QuantizeAllNearest(view.full, quant),
          static_cast<int64_t>(std::ceil(rho * rho)));
    }
    case PredicateKind::kZenoPP: {
      // 2<v,u> - ||u||^2 + eps = ||v||^2 - ||u - v||^2 + eps.
      std::vector<int64_t> v = QuantizeAllNearest(view.full, quant);
      int64_t target = IntNormSq(v);
      double target_norm = std::sqrt(static_cast<double>(target)) / scale;
      int64_t max_dist_sq = 0;
      for (const auto& g : view.chunks) {
        std::vector<int64_t> gq =
            QuantizeAllNearest(Rescaled(g, target_norm), quant);
        for (size_t k = 0; k < dim; ++k) gq[k] -= v[k];
        max_dist_sq = std::max(max_dist_sq, IntNormSq(gq));
      }
      int64_t epsilon =
          static_cast<int64_t>(std::ceil(kNormMargin * max_dist_sq)) - target;
      return PredicateSpec::ZenoPP(std::move(v), 2, 1, epsilon, target,
                                   NormBandFor(target, dim));
    }
    case PredicateKind::kCosine: {
      std::span<const double> ref =
          reference.empty() ? std::span<const double>(view.full) : reference;
      if (ref.size() != dim) {
        return MakeError(ErrorKind::kBadDimension,
                         "DerivePredicate: reference dimension mismatch");
      }
      std::vector<int64_t> r = QuantizeAllNearest(ref, quant);
      int64_t target = IntNormSq(r);
      double min_cos = 1.0;
      for (const auto& g : view.chunks) {
        double denom = Norm(g) * Norm(ref);
        min_cos = std::min(min_cos, denom == 0 ? -1.0 : Dot(g, ref) / denom);
      }
      double threshold = std::clamp(min_cos - kCosineMargin, -1.0, 1.0);
      auto num = static_cast<int64_t>(std::floor(threshold * kCosineDen));
      return PredicateSpec::Cosine(std::move(r), num, kCosineDen, target,
                                   NormBandFor(target, dim));
    }
    case PredicateKind::kProduct:
      break;
  }
  return MakeError(
      ErrorKind::kNotApplicable,
      "DerivePredicate: no public-data rule for product predicates");
}

std::vector<double> NormalizeForPredicate(const PredicateSpec& spec,
                                          std::span<const double> u,
                                          const QuantParams& quant) {
  if (spec.kind != PredicateKind::kZenoPP &&
      spec.kind != PredicateKind::kCosine) {
    return std::vector<double>(u.begin(), u.end());
  }
  return Rescaled(
      u, std::sqrt(static_cast<double>(spec.norm_target)) / quant.scale());
}

bool PlaintextAccepts(const PredicateSpec& spec, std::span<const int64_t> u) {
  auto in_band = [&] {
    __int128 diff = static_cast<__int128>(IntNormSq(u)) - spec.norm_target;
    return diff <= spec.norm_band && -diff <= spec.norm_band;
  };
  switch (spec.kind) {
    case PredicateKind::kNormBound:
      return IntDot(u, u) < spec.rho_sq;
    case PredicateKind::kNormBall: {
      __int128 s = 0;
      for (size_t k = 0; k < u.size(); ++k) {
        __int128 diff = static_cast<__int128>(u[k]) - spec.reference[k];
        s += diff * diff;
      }
      return s <= spec.rho_sq;
    }
    case PredicateKind::kZenoPP:
      return in_band() &&
             static_cast<__int128>(spec.gamma) * IntDot(spec.reference, u) -
                     static_cast<__int128>(spec.rho) * IntDot(u, u) +
                     spec.epsilon >=
                 0;
    case PredicateKind::kCosine:
      return in_band() &&
             static_cast<__int128>(spec.cos_den) * IntDot(spec.reference, u) -
                     static_cast<__int128>(spec.cos_num) * spec.norm_target >=
                 0;
    case PredicateKind::kProduct:
      for (const PredicateSpec& part : spec.parts) {
        if (!PlaintextAccepts(part, u)) return false;
      }
      return true;
  }
  return false;
}

OracleResult PlaintextOracle(const PredicateSpec& spec,
                             std::span<const std::vector<int64_t>> updates) {
  OracleResult result;
  if (!updates.empty()) result.sum.assign(updates[0].size(), 0);
  for (size_t i = 0; i < updates.size(); ++i) {
    if (!PlaintextAccepts(spec, updates[i])) continue;
    result.accepted.push_back(static_cast<PartyId>(i + 1));
    for (size_t k = 0; k < updates[i].size(); ++k)
      result.sum[k] += updates[i][k];
  }
  return result;
}

namespace {

// Data that does not depend on the model: the public dataset, the attacker
// set and one iteration's client datasets.
struct RoundData {
  const Dataset* public_data = nullptr;
  std::vector<PartyId> malicious;
  std::vector<Dataset> clients;
};

Dataset SamplePublicData(const RunConfig& config, const SyntheticTask& task) {
  Prng prng = Prng::Derive(config.seed, kPublicLabel);
  return task.Sample(config.public_samples, prng);
}

RoundData SampleRoundData(const RunConfig& config, const SyntheticTask& task,
                          const Dataset& public_data, size_t iteration) {
  RoundData data;
  data.public_data = &public_data;
  Prng pick = Prng::Derive(config.seed, kAttackerLabel);
  std::vector<PartyId> ids;
  for (PartyId i = 1; i <= config.n; ++i) ids.push_back(i);
  for (size_t i = 0; i < config.num_attackers(); ++i) {
    std::swap(ids[i], ids[i + pick.Uniform(ids.size() - i)]);
  }
  data.malicious.assign(ids.begin(), ids.begin() + config.num_attackers());
  std::sort(data.malicious.begin(), data.malicious.end());
  for (PartyId i = 1; i <= config.n; ++i) {
    Prng prng = IterationStream(config.seed, iteration, i);
    data.clients.push_back(task.Sample(config.samples_per_client, prng));
  }
  return data;
}

// Client updates at one model, before any predicate-specific processing.
struct RawRound {
  const Dataset* public_data = nullptr;
  std::vector<PartyId> malicious;
  std::vector<std::vector<double>> updates;  // poisoned, full dimension
};

absl::StatusOr<RawRound> ComputeRound(const RunConfig& config,
                                      const RoundData& data,
                                      const ModelState& model,
                                      size_t iteration) {
  RawRound round;
  round.public_data = data.public_data;
  round.malicious = data.malicious;
  std::vector<std::vector<double>> benign;
  for (PartyId i = 1; i <= config.n; ++i) {
    round.updates.push_back(
        LocalUpdate(model.w, data.clients[i - 1], config.learning_rate));
    if (!std::binary_search(round.malicious.begin(), round.malicious.end(),
                            i)) {
      benign.push_back(round.updates.back());
    }
  }
  for (PartyId i : round.malicious) {
    Prng attack_prng =
        IterationStream(config.seed, iteration, kAttackerLabel + i * 7919);
    EIFFEL_ASSIGN_OR_RETURN(
        round.updates[i - 1],
        Poison(round.updates[i - 1], config.attack, benign, attack_prng));
  }
  return round;
}

// A predicate and quantized updates in one space (full or projected).
struct Check {
  PredicateSpec spec;
  std::vector<std::vector<int64_t>> quantized;
};

absl::StatusOr<Check> BuildCheck(const RunConfig& config, const RawRound& round,
                                 const ModelState& model, size_t iteration,
                                 bool project) {
  auto map =
      [&](std::span<const double> u) -> absl::StatusOr<std::vector<double>> {
    if (!project) return std::vector<double>(u.begin(), u.end());
    return RandomProject(u, config.project_dim, config.project_seed);
  };
  PublicView view =
      ComputePublicView(model.w, *round.public_data, config.samples_per_client,
                        config.learning_rate);
  EIFFEL_ASSIGN_OR_RETURN(view.full, map(view.full));
  for (auto& g : view.chunks) {
    EIFFEL_ASSIGN_OR_RETURN(g, map(g));
  }
  std::vector<double> reference;
  if (!model.last_update.empty()) {
    EIFFEL_ASSIGN_OR_RETURN(reference, map(model.last_update));
  }
  Check check;
  EIFFEL_ASSIGN_OR_RETURN(check.spec, DerivePredicate(config.predicate, view,
                                                      reference, config.quant));
  for (PartyId i = 1; i <= config.n; ++i) {
    std::vector<double> u;
    EIFFEL_ASSIGN_OR_RETURN(u, map(round.updates[i - 1]));
    u = NormalizeForPredicate(check.spec, u, config.quant);
    Prng q =
        IterationStream(config.seed, iteration, (project ? 2 : 1) * 100003 + i);
    check.quantized.push_back(QuantizeToInts(u, config.quant, q));
  }
  return check;
}

absl::StatusOr<IterationReport> RunCheck(const RunConfig& config,
                                         const RawRound& round, Check check,
                                         size_t iteration) {
  const PrimeField& field = PrimeField::Default();
  IterationReport report;
  report.spec = std::move(check.spec);
  report.quantized = std::move(check.quantized);
  report.malicious = round.malicious;
  const size_t dim = report.quantized.front().size();

  EIFFEL_ASSIGN_OR_RETURN(
      CompiledPredicate pred,
      CompilePredicate(field, report.spec, config.quant, dim));
  report.num_mul_gates = pred.circuit.num_mul_gates();
  report.num_gates = pred.circuit.gates().size();

  ProtocolConfig pc;
  pc.n = config.n;
  pc.m = config.m;
  pc.recon = config.recon;
  pc.path = config.path;
  pc.crypto = config.crypto;
  pc.gao_shadow = config.recon != ReconStrategy::kGao;
  pc.audit_exposure = true;
  pc.seed = MixSeed(config.seed + kIterationBase * (iteration + 1));

  ProtocolInputs inputs;
  inputs.circuit = pred.circuit;
  inputs.dim = dim;
  inputs.malicious = round.malicious;
  for (const auto& u : report.quantized) {
    EIFFEL_ASSIGN_OR_RETURN(std::vector<Fe> w, WitnessInputs(field, pred, u));
    inputs.inputs.push_back(std::move(w));
  }
  std::vector<PartyId> honest;
  for (PartyId i = 1; i <= config.n; ++i) {
    if (!std::binary_search(round.malicious.begin(), round.malicious.end(),
                            i)) {
      honest.push_back(i);
    }
  }
  if (config.misbehavior.has_value()) {
    Prng script_prng = IterationStream(config.seed, iteration, 77);
    inputs.script = MakeScript(*config.misbehavior, round.malicious, honest,
                               config.m, script_prng);
  }

  OracleResult oracle = PlaintextOracle(report.spec, report.quantized);
  for (PartyId i : oracle.accepted) {
    auto it = inputs.script.clients.find(i);
    if (it != inputs.script.clients.end() &&
        EjectedByScript(it->second, config.m)) {
      continue;
    }
    report.expected_accepted.push_back(i);
  }
  report.expected_aggregate.assign(dim, Fe{0});
  for (PartyId i : report.expected_accepted) {
    for (size_t k = 0; k < dim; ++k) {
      report.expected_aggregate[k] =
          field.Add(report.expected_aggregate[k],
                    field.FromInt(report.quantized[i - 1][k]));
    }
  }
  if (inputs.script.server_drop_honest.has_value()) {
    report.expect_abort = std::binary_search(report.expected_accepted.begin(),
                                             report.expected_accepted.end(),
                                             *inputs.script.server_drop_honest);
  }

  EIFFEL_ASSIGN_OR_RETURN(report.run, RunProtocol(field, pc, inputs));
  if (report.expect_abort) {
    report.oracle_agrees = report.run.aborted;
  } else {
    report.oracle_agrees = !report.run.aborted &&
                           report.run.accepted == report.expected_accepted &&
                           report.run.aggregate == report.expected_aggregate;
  }
  report.honest_included = true;
  if (!report.run.aborted) {
    for (PartyId i : honest) {
      bool passes = PlaintextAccepts(report.spec, report.quantized[i - 1]);
      bool accepted = std::binary_search(report.run.accepted.begin(),
                                         report.run.accepted.end(), i);
      if (passes && !accepted) report.honest_included = false;
    }
  }
  return report;
}

ModelState InitialModel(const RunConfig& config) {
  return ModelState{std::vector<double>(config.d, 0.0), {}};
}

}  // namespace

absl::StatusOr<IterationReport> RunIteration(const RunConfig& config,
                                             const SyntheticTask& task,
                                             const ModelState& model,
                                             size_t iteration) {
  EIFFEL_RETURN_IF_ERROR(ValidateRunConfig(config));
  Dataset public_data = SamplePublicData(config, task);
  RoundData data = SampleRoundData(config, task, public_data, iteration);
  EIFFEL_ASSIGN_OR_RETURN(RawRound round,
                          ComputeRound(config, data, model, iteration));
  EIFFEL_ASSIGN_OR_RETURN(
      Check check,
      BuildCheck(config, round, model, iteration, config.project_dim > 0));
  return RunCheck(config, round, std::move(check), iteration);
}

absl::StatusOr<IterationReport> RunIteration(const RunConfig& config) {
  SyntheticTask task(config.d, config.separation, config.seed);
  return RunIteration(config, task, InitialModel(config), 0);
}

std::string ArmName(Arm arm) {
  switch (arm) {
    case Arm::kNoDefense:
      return "no_defense";
    case Arm::kEiffel:
      return "eiffel";
    case Arm::kPlaintextDefense:
      return "plaintext_defense";
  }
  return "unknown";
}

namespace {

// Applies the mean of the given updates, or nothing if there are none.
void ApplyMean(ModelState& model,
               std::span<const std::vector<double>> updates) {
  if (updates.empty()) return;
  std::vector<double> mean(model.w.size(), 0.0);
  for (const auto& u : updates) {
    for (size_t k = 0; k < mean.size(); ++k) mean[k] += u[k];
  }
  for (size_t k = 0; k < mean.size(); ++k) {
    mean[k] /= updates.size();
    model.w[k] += mean[k];
  }
  model.last_update = std::move(mean);
}

// Applies sum / count where sum is in quantized units.
void ApplyQuantizedMean(ModelState& model, std::span<const double> sum,
                        size_t count) {
  if (count == 0) return;
  std::vector<double> mean(sum.size());
  for (size_t k = 0; k < sum.size(); ++k) {
    mean[k] = sum[k] / count;
    model.w[k] += mean[k];
  }
  model.last_update = std::move(mean);
}

std::vector<double> SumOf(const Check& check, std::span<const PartyId> ids,
                          const QuantParams& quant) {
  std::vector<int64_t> sum(check.quantized.front().size(), 0);
  for (PartyId i : ids) {
    for (size_t k = 0; k < sum.size(); ++k) sum[k] += check.quantized[i - 1][k];
  }
  std::vector<double> out(sum.size());
  for (size_t k = 0; k < sum.size(); ++k) out[k] = sum[k] / quant.scale();
  return out;
}

std::vector<PartyId> ExpectedFromPlaintext(const Check& check) {
  return PlaintextOracle(check.spec, check.quantized).accepted;
}

}  // namespace

absl::StatusOr<TrainingReport> RunTraining(const RunConfig& config) {
  EIFFEL_RETURN_IF_ERROR(ValidateRunConfig(config));
  const bool project = config.project_dim > 0;
  SyntheticTask task(config.d, config.separation, config.seed);
  Prng test_prng = Prng::Derive(config.seed, kTestLabel);
  Dataset test = task.Sample(config.test_samples, test_prng);

  ModelState none = InitialModel(config);
  ModelState eiffel = none;
  ModelState plain = none;
  TrainingReport report;

  Dataset public_data = SamplePublicData(config, task);
  for (size_t it = 0; it < config.iterations; ++it) {
    RoundData data = SampleRoundData(config, task, public_data, it);
    // No defense: plain mean of the raw poisoned updates.
    {
      EIFFEL_ASSIGN_OR_RETURN(RawRound round,
                              ComputeRound(config, data, none, it));
      ApplyMean(none, round.updates);
    }
    // Plaintext defense: full-dimension filter on quantized updates.
    {
      EIFFEL_ASSIGN_OR_RETURN(RawRound round,
                              ComputeRound(config, data, plain, it));
      EIFFEL_ASSIGN_OR_RETURN(Check check,
                              BuildCheck(config, round, plain, it, false));
      std::vector<PartyId> ids = ExpectedFromPlaintext(check);
      ApplyQuantizedMean(plain, SumOf(check, ids, config.quant), ids.size());
    }
    // EIFFeL, on the same client data at its own model.
    {
      EIFFEL_ASSIGN_OR_RETURN(RawRound round,
                              ComputeRound(config, data, eiffel, it));
      EIFFEL_ASSIGN_OR_RETURN(Check full,
                              BuildCheck(config, round, eiffel, it, false));
      Check checked = full;
      if (project) {
        EIFFEL_ASSIGN_OR_RETURN(checked,
                                BuildCheck(config, round, eiffel, it, true));
      }
      EIFFEL_ASSIGN_OR_RETURN(IterationReport r,
                              RunCheck(config, round, std::move(checked), it));
      std::vector<PartyId> plain_ids = ExpectedFromPlaintext(full);
      if (!r.run.aborted) {
        for (PartyId i = 1; i <= config.n; ++i) {
          bool a = std::binary_search(r.run.accepted.begin(),
                                      r.run.accepted.end(), i);
          bool b = std::binary_search(plain_ids.begin(), plain_ids.end(), i);
          report.agreeing_decisions += a == b;
          ++report.total_decisions;
        }
        // Projected aggregates cannot be mapped back, so the projected arm
        // applies the full-dimension updates of the clients it accepted.
        std::vector<double> sum =
            project ? SumOf(full, r.run.accepted, config.quant)
                    : Dequantize(PrimeField::Default(), r.run.aggregate,
                                 config.quant);
        ApplyQuantizedMean(eiffel, sum, r.run.accepted.size());
      }
      report.plaintext_accepted.push_back(std::move(plain_ids));
      report.eiffel.push_back(std::move(r));
    }
    report.accuracy.push_back({it, Arm::kNoDefense, Accuracy(none.w, test)});
    report.accuracy.push_back({it, Arm::kEiffel, Accuracy(eiffel.w, test)});
    report.accuracy.push_back(
        {it, Arm::kPlaintextDefense, Accuracy(plain.w, test)});
  }
  return report;
}

std::string AggregateChecksum(std::span<const Fe> aggregate) {
  std::vector<uint8_t> bytes;
  for (Fe x : aggregate) {
    for (int b = 0; b < 8; ++b)
      bytes.push_back(static_cast<uint8_t>(x.v >> (8 * b)));
  }
  std::array<uint8_t, 32> digest = Sha256(bytes);
  return HexEncode(std::span<const uint8_t>(digest.data(), 8));
}

std::string MetricsJson(const RunConfig& config, const TrainingReport& report) {
  using nlohmann::json;
  json out;
  out["config"] = {
      {"n", config.n},
      {"m", config.m},
      {"d", config.d},
      {"predicate", PredicateKindName(config.predicate)},
      {"attack", AttackKindName(config.attack.kind)},
      {"attackers", config.num_attackers()},
      {"misbehavior",
       config.misbehavior ? MisbehaviorKindName(*config.misbehavior) : "none"},
      {"recon", ReconStrategyName(config.recon)},
      {"path", SummaryPathName(config.path)},
      {"crypto", config.crypto},
      {"project", config.project_dim},
      {"iterations", config.iterations},
      {"seed", config.seed},
  };
  json iterations = json::array();
  for (size_t it = 0; it < report.eiffel.size(); ++it) {
    const IterationReport& r = report.eiffel[it];
    json parties = json::array();
    for (size_t id = 0; id < r.run.parties.size(); ++id) {
      const PartyMetrics& p = r.run.parties[id];
      uint64_t bytes = 0;
      for (const auto& [phase, b] : p.bytes_sent) bytes += b;
      parties.push_back({{"id", id},
                         {"steps", p.steps.size()},
                         {"conditional_steps", p.conditional_steps.size()},
                         {"bytes_sent", bytes},
                         {"bytes_by_phase", p.bytes_sent},
                         {"field_mul", p.ops.mul},
                         {"field_inv", p.ops.inv},
                         {"group_ops", p.ops.group}});
    }
    iterations.push_back({
        {"iteration", it},
        {"aborted", r.run.aborted},
        {"abort_reason", r.run.abort_reason},
        {"malicious", r.malicious},
        {"cstar_after_flags", r.run.cstar_after_flags},
        {"cstar_after_verification", r.run.cstar_after_verification},
        {"final_cstar", r.run.final_cstar},
        {"accepted", r.run.accepted},
        {"plaintext_accepted", report.plaintext_accepted[it]},
        {"oracle_agrees", r.oracle_agrees},
        {"aggregate_checksum", AggregateChecksum(r.run.aggregate)},
        {"mul_gates", r.num_mul_gates},
        {"max_share_exposure", r.run.max_share_exposure},
        {"parties", parties},
    });
  }
  out["iterations"] = iterations;
  out["decision_agreement"] = {{"agreeing", report.agreeing_decisions},
                               {"total", report.total_decisions}};
  return out.dump(2);
}

std::string AccuracyCsv(const TrainingReport& report) {
  std::ostringstream out;
  out << "iteration,arm,accuracy\n";
  for (const TrainingPoint& p : report.accuracy) {
    out << p.iteration << "," << ArmName(p.arm) << "," << p.accuracy << "\n";
  }
  return out.str();
}

}  // namespace eiffel
