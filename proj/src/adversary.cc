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

#include "eiffel/adversary.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "absl/strings/str_cat.h"
#include "eiffel/status.h"

namespace eiffel {
namespace {

constexpr int kBisectionSteps = 60;

double Distance(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

std::vector<double> Mean(std::span<const std::vector<double>> u) {
  std::vector<double> mean(u[0].size(), 0.0);
  for (const auto& v : u) {
    for (size_t i = 0; i < mean.size(); ++i) mean[i] += v[i];
  }
  for (double& x : mean) x /= static_cast<double>(u.size());
  return mean;
}

std::vector<double> Along(std::span<const double> base,
                          std::span<const double> direction, double gamma) {
  std::vector<double> out(base.begin(), base.end());
  for (size_t i = 0; i < out.size(); ++i) out[i] += gamma * direction[i];
  return out;
}

std::vector<PartyId> Pick(std::span<const PartyId> from, size_t k, Prng& prng) {
  std::vector<PartyId> pool(from.begin(), from.end());
  for (size_t i = 0; i < pool.size(); ++i) {
    std::swap(pool[i], pool[i + prng.Uniform(pool.size() - i)]);
  }
  pool.resize(std::min(k, pool.size()));
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

std::string AttackKindName(AttackKind kind) {
  switch (kind) {
    case AttackKind::kNone:
      return "none";
    case AttackKind::kSignFlip:
      return "sign_flip";
    case AttackKind::kScaling:
      return "scaling";
    case AttackKind::kAdditiveNoise:
      return "additive_noise";
    case AttackKind::kMinMax:
      return "min_max";
    case AttackKind::kMinSum:
      return "min_sum";
  }
  return "unknown";
}

absl::StatusOr<AttackKind> ParseAttackKind(std::string_view name) {
  for (AttackKind k :
       {AttackKind::kNone, AttackKind::kSignFlip, AttackKind::kScaling,
        AttackKind::kAdditiveNoise, AttackKind::kMinMax, AttackKind::kMinSum}) {
    if (AttackKindName(k) == name) return k;
  }
  return MakeError(
      ErrorKind::kConfigError,
      absl::StrCat("ParseAttackKind: unknown attack '",
                   absl::string_view(name.data(), name.size()), "'"));
}

std::vector<double> NegatedUnitMean(std::span<const std::vector<double>> u) {
  std::vector<double> mean = Mean(u);
  double norm = 0;
  for (double x : mean) norm += x * x;
  norm = std::sqrt(norm);
  for (double& x : mean) x = norm > 0 ? -x / norm : 0.0;
  return mean;
}

absl::StatusOr<double> SolveAttackGamma(
    AttackKind kind, std::span<const std::vector<double>> benign,
    std::span<const double> direction) {
  if (benign.size() < 2) {
    return MakeError(ErrorKind::kNotApplicable,
                     "SolveAttackGamma: needs at least two benign updates");
  }
  if (kind != AttackKind::kMinMax && kind != AttackKind::kMinSum) {
    return MakeError(ErrorKind::kNotApplicable,
                     "SolveAttackGamma: not a distance-budget attack");
  }
  double budget = 0;
  for (const auto& a : benign) {
    double sum = 0;
    for (const auto& b : benign) {
      double dist = Distance(a, b);
      if (kind == AttackKind::kMinMax) {
        budget = std::max(budget, dist);
      } else {
        sum += dist;
      }
    }
    if (kind == AttackKind::kMinSum) budget = std::max(budget, sum);
  }
  std::vector<double> mean = Mean(benign);
  auto feasible = [&](double gamma) {
    std::vector<double> x = Along(mean, direction, gamma);
    double cost = 0;
    for (const auto& b : benign) {
      double dist = Distance(x, b);
      cost = kind == AttackKind::kMinMax ? std::max(cost, dist) : cost + dist;
    }
    return cost <= budget;
  };
  // The constraint is convex in gamma and holds at 0, so the feasible set is
  // an interval starting at 0.
  double hi = 1.0;
  while (feasible(hi) && hi < 1e12) hi *= 2;
  double lo = 0.0;
  for (int step = 0; step < kBisectionSteps; ++step) {
    double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

absl::StatusOr<std::vector<double>> Poison(
    std::span<const double> u, const AttackSpec& spec,
    std::span<const std::vector<double>> benign, Prng& prng) {
  std::vector<double> out(u.begin(), u.end());
  switch (spec.kind) {
    case AttackKind::kNone:
      break;
    case AttackKind::kSignFlip:
      for (double& x : out) x *= -spec.c;
      break;
    case AttackKind::kScaling:
      for (double& x : out) x *= spec.c;
      break;
    case AttackKind::kAdditiveNoise:
      for (double& x : out) x += prng.Gaussian(spec.mu, spec.sigma);
      break;
    case AttackKind::kMinMax:
    case AttackKind::kMinSum: {
      if (benign.size() < 2) {
        return MakeError(ErrorKind::kNotApplicable,
                         "Poison: needs at least two benign updates");
      }
      std::vector<double> direction = spec.perturbation
                                          ? spec.perturbation(benign)
                                          : NegatedUnitMean(benign);
      EIFFEL_ASSIGN_OR_RETURN(double gamma,
                              SolveAttackGamma(spec.kind, benign, direction));
      out = Along(Mean(benign), direction, gamma);
      break;
    }
  }
  return out;
}

bool ClientMisbehavior::empty() const {
  return bad_shares_to.empty() && false_flags.empty() &&
         withhold_summaries.empty() && !corrupt_summary_shares &&
         !corrupt_aggregate_share && !forge_proof;
}

absl::Status ValidateScript(const MisbehaviorScript& script, size_t n,
                            size_t m) {
  auto in_range = [n](PartyId id) { return id >= 1 && id <= n; };
  if (script.clients.size() > m) {
    return MakeError(ErrorKind::kConfigError,
                     absl::StrCat("ValidateScript: ", script.clients.size(),
                                  " scripted clients exceed m = ", m));
  }
  for (const auto& [id, b] : script.clients) {
    bool ok = in_range(id);
    for (const auto* list :
         {&b.bad_shares_to, &b.false_flags, &b.withhold_summaries}) {
      for (PartyId peer : *list) ok = ok && in_range(peer) && peer != id;
    }
    if (!ok) {
      return MakeError(ErrorKind::kConfigError,
                       absl::StrCat("ValidateScript: bad party id in script "
                                    "for client ",
                                    id));
    }
  }
  if (script.server_drop_honest.has_value() &&
      (!in_range(*script.server_drop_honest) ||
       script.clients.contains(*script.server_drop_honest))) {
    return MakeError(ErrorKind::kConfigError,
                     "ValidateScript: server must drop an unscripted client");
  }
  return absl::OkStatus();
}

bool EjectedByScript(const ClientMisbehavior& b, size_t m) {
  if (b.forge_proof) return true;
  if (!b.bad_shares_to.empty() &&
      (b.bad_shares_to.size() >= m + 1 || !b.reveal_correct)) {
    return true;
  }
  if (b.false_flags.size() >= m + 1) return true;
  return !b.withhold_summaries.empty();
}

std::string MisbehaviorKindName(MisbehaviorKind kind) {
  switch (kind) {
    case MisbehaviorKind::kBadShares:
      return "bad_shares";
    case MisbehaviorKind::kFalseFlag:
      return "false_flag";
    case MisbehaviorKind::kWithholdSummaries:
      return "withhold_summaries";
    case MisbehaviorKind::kCorruptSummaryShares:
      return "corrupt_summary_shares";
    case MisbehaviorKind::kCorruptAggregateShare:
      return "corrupt_aggregate_share";
    case MisbehaviorKind::kServerDropHonest:
      return "server_drop_honest";
  }
  return "unknown";
}

absl::StatusOr<MisbehaviorKind> ParseMisbehaviorKind(std::string_view name) {
  for (MisbehaviorKind k :
       {MisbehaviorKind::kBadShares, MisbehaviorKind::kFalseFlag,
        MisbehaviorKind::kWithholdSummaries,
        MisbehaviorKind::kCorruptSummaryShares,
        MisbehaviorKind::kCorruptAggregateShare,
        MisbehaviorKind::kServerDropHonest}) {
    if (MisbehaviorKindName(k) == name) return k;
  }
  return MakeError(
      ErrorKind::kConfigError,
      absl::StrCat("ParseMisbehaviorKind: unknown misbehavior '",
                   absl::string_view(name.data(), name.size()), "'"));
}

MisbehaviorScript MakeScript(MisbehaviorKind kind,
                             std::span<const PartyId> malicious,
                             std::span<const PartyId> honest, size_t m,
                             Prng& prng) {
  MisbehaviorScript script;
  if (kind == MisbehaviorKind::kServerDropHonest) {
    if (!honest.empty()) {
      script.server_drop_honest = honest[prng.Uniform(honest.size())];
    }
    return script;
  }
  for (PartyId id : malicious) {
    ClientMisbehavior b;
    switch (kind) {
      case MisbehaviorKind::kBadShares:
        switch (prng.Uniform(3)) {
          case 0:
            b.bad_shares_to = Pick(honest, m + 1, prng);
            break;
          case 1:
            b.bad_shares_to = Pick(honest, 1, prng);
            break;
          default:
            b.bad_shares_to = Pick(honest, 1 + prng.Uniform(m), prng);
            b.reveal_correct = true;
            break;
        }
        break;
      case MisbehaviorKind::kFalseFlag:
        b.false_flags = Pick(
            honest, prng.Uniform(2) == 0 ? 1 + prng.Uniform(m) : m + 1, prng);
        break;
      case MisbehaviorKind::kWithholdSummaries:
        b.withhold_summaries =
            Pick(honest, prng.Uniform(2) == 0 ? honest.size() : 1, prng);
        break;
      case MisbehaviorKind::kCorruptSummaryShares:
        b.corrupt_summary_shares = true;
        break;
      case MisbehaviorKind::kCorruptAggregateShare:
        b.corrupt_aggregate_share = true;
        break;
      case MisbehaviorKind::kServerDropHonest:
        break;
    }
    script.clients.emplace(id, std::move(b));
  }
  return script;
}

absl::StatusOr<WireTrace> ForgeAcceptingTrace(const PrimeField& field,
                                              const Circuit& circuit,
                                              std::span<const Fe> inputs) {
  EIFFEL_ASSIGN_OR_RETURN(WireTrace honest, Evaluate(field, circuit, inputs));
  const std::vector<Gate>& gates = circuit.gates();
  const size_t num_in = circuit.num_inputs();
  const size_t num_mul = circuit.num_mul_gates();
  std::vector<size_t> mul_index(gates.size(), 0);
  for (size_t k = 0; k < num_mul; ++k) mul_index[circuit.mul_gates()[k]] = k;

  // Outputs are affine in the claimed multiplication outputs z. Row k of A is
  // the gradient of output k, found by a backward pass over the affine gates.
  const std::vector<Wire>& outs = circuit.outputs();
  Fe one = Fe{1};
  std::vector<std::vector<Fe>> rows;
  std::vector<Fe> rhs;
  for (size_t k = 0; k < outs.size(); ++k) {
    std::vector<Fe> adj(circuit.num_wires(), Fe{0});
    adj[outs[k]] = one;
    std::vector<Fe> row(num_mul, Fe{0});
    for (size_t g = gates.size(); g-- > 0;) {
      Fe a = adj[num_in + g];
      if (a.v == 0) continue;
      const Gate& gate = gates[g];
      switch (gate.kind) {
        case GateKind::kAdd:
          adj[gate.left] = field.Add(adj[gate.left], a);
          adj[gate.right] = field.Add(adj[gate.right], a);
          break;
        case GateKind::kAddConst:
          adj[gate.left] = field.Add(adj[gate.left], a);
          break;
        case GateKind::kMulConst:
          adj[gate.left] =
              field.Add(adj[gate.left], field.Mul(a, gate.constant));
          break;
        case GateKind::kMul:
          row[mul_index[g]] = a;
          break;
      }
    }
    Fe target =
        circuit.convention() == OutputConvention::kOneOnSuccess ? one : Fe{0};
    rows.push_back(std::move(row));
    rhs.push_back(field.Sub(target, honest.values[outs[k]]));
  }

  // Solve A delta = target - out by Gaussian elimination; free variables are 0.
  std::vector<Fe> delta(num_mul, Fe{0});
  std::vector<size_t> pivots;
  size_t rank = 0;
  for (size_t col = 0; col < num_mul && rank < rows.size(); ++col) {
    size_t sel = rank;
    while (sel < rows.size() && rows[sel][col].v == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[sel], rows[rank]);
    std::swap(rhs[sel], rhs[rank]);
    Fe inv = field.Inv(rows[rank][col]);
    for (Fe& x : rows[rank]) x = field.Mul(x, inv);
    rhs[rank] = field.Mul(rhs[rank], inv);
    for (size_t i = 0; i < rows.size(); ++i) {
      if (i == rank || rows[i][col].v == 0) continue;
      Fe factor = rows[i][col];
      for (size_t c = col; c < num_mul; ++c) {
        rows[i][c] = field.Sub(rows[i][c], field.Mul(factor, rows[rank][c]));
      }
      rhs[i] = field.Sub(rhs[i], field.Mul(factor, rhs[rank]));
    }
    pivots.push_back(col);
    ++rank;
  }
  for (size_t i = rank; i < rows.size(); ++i) {
    if (rhs[i].v != 0) {
      return MakeError(ErrorKind::kNotApplicable,
                       "ForgeAcceptingTrace: outputs cannot be steered");
    }
  }
  for (size_t i = 0; i < rank; ++i) delta[pivots[i]] = rhs[i];

  // Replay the affine gates with the claimed multiplication outputs z0 + delta.
  WireTrace forged;
  forged.values.assign(inputs.begin(), inputs.end());
  for (size_t g = 0; g < gates.size(); ++g) {
    const Gate& gate = gates[g];
    const std::vector<Fe>& v = forged.values;
    Fe out;
    switch (gate.kind) {
      case GateKind::kAdd:
        out = field.Add(v[gate.left], v[gate.right]);
        break;
      case GateKind::kAddConst:
        out = field.Add(v[gate.left], gate.constant);
        break;
      case GateKind::kMulConst:
        out = field.Mul(v[gate.left], gate.constant);
        break;
      case GateKind::kMul:
        out = field.Add(honest.values[num_in + g], delta[mul_index[g]]);
        break;
    }
    forged.values.push_back(out);
  }
  return forged;
}

}  // namespace eiffel
