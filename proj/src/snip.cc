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

#include "eiffel/snip.h"

#include "absl/strings/str_cat.h"
#include "eiffel/status.h"

namespace eiffel {
size_t ProofLength(size_t num_mul_gates) {
  return kProofHeader + 2 * num_mul_gates + 1;
}

std::vector<Fe> FlattenProof(const SnipProof& proof) {
  std::vector<Fe> flat = {proof.f0, proof.g0, proof.beaver.a, proof.beaver.b,
                          proof.beaver.c};
  flat.insert(flat.end(), proof.h_evals.begin(), proof.h_evals.end());
  return flat;
}

SnipProof UnflattenProof(std::span<const Fe> flat) {
  SnipProof proof;
  proof.f0 = flat[0];
  proof.g0 = flat[1];
  proof.beaver = {flat[2], flat[3], flat[4]};
  proof.h_evals.assign(flat.begin() + kProofHeader, flat.end());
  return proof;
}

Polynomial SnipProof::HCoefficients(const PrimeField& field) const {
  std::vector<Point> pts;
  for (size_t k = 0; k < h_evals.size(); ++k)
    pts.push_back({Fe{k}, h_evals[k]});
  return *Interpolate(field, pts);
}

SnipProof ProveFromTrace(const PrimeField& field, const Circuit& circuit,
                         const WireTrace& trace, Prng& prng) {
  size_t m = circuit.num_mul_gates();
  std::vector<Fe> f(m + 1), g(m + 1);
  SnipProof proof;
  proof.f0 = field.Random(prng);
  proof.g0 = field.Random(prng);
  f[0] = proof.f0;
  g[0] = proof.g0;
  proof.h_evals.resize(2 * m + 1);
  proof.h_evals[0] = field.Mul(f[0], g[0]);
  for (size_t k = 1; k <= m; ++k) {
    size_t gate = circuit.mul_gates()[k - 1];
    f[k] = trace.values[circuit.gates()[gate].left];
    g[k] = trace.values[circuit.gates()[gate].right];
    proof.h_evals[k] = trace.values[circuit.num_inputs() + gate];
  }
  std::vector<Fe> f_ext = ExtendConsecutive(field, f, m);
  std::vector<Fe> g_ext = ExtendConsecutive(field, g, m);
  for (size_t j = 0; j < m; ++j) {
    proof.h_evals[m + 1 + j] = field.Mul(f_ext[j], g_ext[j]);
  }
  proof.beaver.a = field.Random(prng);
  proof.beaver.b = field.Random(prng);
  proof.beaver.c = field.Mul(proof.beaver.a, proof.beaver.b);
  return proof;
}

absl::StatusOr<std::pair<WireTrace, SnipProof>> Prove(
    const PrimeField& field, const Circuit& circuit, std::span<const Fe> inputs,
    Prng& prng) {
  EIFFEL_RETURN_IF_ERROR(circuit.Validate());
  if (2 * circuit.num_mul_gates() + 2 >= field.modulus()) {
    return MakeError(ErrorKind::kNotApplicable,
                     "Prove: 2M + 2 must be below the field modulus");
  }
  EIFFEL_ASSIGN_OR_RETURN(WireTrace trace, Evaluate(field, circuit, inputs));
  SnipProof proof = ProveFromTrace(field, circuit, trace, prng);
  return std::make_pair(std::move(trace), std::move(proof));
}

absl::StatusOr<SplitResult> SplitProof(const Vss& vss,
                                       std::span<const Fe> inputs,
                                       const SnipProof& proof,
                                       size_t prover_index, size_t n, size_t m,
                                       Prng& prng) {
  if (prover_index < 1 || prover_index > n) {
    return MakeError(ErrorKind::kConfigError,
                     "SplitProof: prover index out of range");
  }
  std::vector<Fe> all, others;
  for (size_t j = 1; j <= n; ++j) {
    all.push_back(Fe{j});
    if (j != prover_index) others.push_back(Fe{j});
  }
  EIFFEL_ASSIGN_OR_RETURN(VectorSharing in,
                          vss.ShareVector(inputs, all, m + 1, prng));
  std::vector<Fe> flat = FlattenProof(proof);
  EIFFEL_ASSIGN_OR_RETURN(VectorSharing pf,
                          vss.ShareVector(flat, others, m + 1, prng));
  SplitResult out;
  out.input_checks = std::move(in.checks);
  out.proof_checks = std::move(pf.checks);
  size_t other = 0;
  for (size_t j = 1; j <= n; ++j) {
    ProofBundle bundle;
    bundle.index = Fe{j};
    bundle.inputs = std::move(in.shares[j - 1]);
    if (j != prover_index) bundle.proof = std::move(pf.shares[other++]);
    out.bundles.push_back(std::move(bundle));
  }
  return out;
}

bool VerifyBundle(const Vss& vss, const ProofBundle& bundle,
                  std::span<const CheckString> input_checks,
                  std::span<const CheckString> proof_checks, bool check_proof) {
  if (bundle.inputs.size() != input_checks.size()) return false;
  for (size_t k = 0; k < input_checks.size(); ++k) {
    if (!vss.Verify({bundle.index, bundle.inputs[k]}, input_checks[k])) {
      return false;
    }
  }
  if (!check_proof) return true;
  if (bundle.proof.size() != proof_checks.size()) return false;
  for (size_t k = 0; k < proof_checks.size(); ++k) {
    if (!vss.Verify({bundle.index, bundle.proof[k]}, proof_checks[k])) {
      return false;
    }
  }
  return true;
}

Challenge DrawChallenge(const PrimeField& field, const Circuit& circuit,
                        Prng& prng) {
  uint64_t nodes = 2 * circuit.num_mul_gates() + 1;
  Challenge ch;
  ch.r = Fe{nodes + prng.Uniform(field.modulus() - nodes)};
  if (circuit.convention() == OutputConvention::kZeroOnSuccess) {
    ch.output_coeffs.resize(circuit.outputs().size());
    for (Fe& l : ch.output_coeffs) l = field.Random(prng);
  } else {
    ch.output_coeffs = {field.One()};
  }
  return ch;
}

ChallengeWeights PrepareChallenge(const PrimeField& field,
                                  const Circuit& circuit, Fe r) {
  size_t m = circuit.num_mul_gates();
  return {r, ConsecutiveLagrangeWeights(field, m + 1, r),
          ConsecutiveLagrangeWeights(field, 2 * m + 1, r)};
}

Fe ExpectedOutput(const Circuit& circuit) {
  return circuit.convention() == OutputConvention::kOneOnSuccess ? Fe{1}
                                                                 : Fe{0};
}

absl::StatusOr<LocalEvaluation> EvaluateLocal(const PrimeField& field,
                                              const Circuit& circuit,
                                              const ProofBundle& bundle,
                                              const Challenge& challenge,
                                              const ChallengeWeights& weights) {
  size_t m = circuit.num_mul_gates();
  if (bundle.inputs.size() != circuit.num_inputs() ||
      bundle.proof.size() != ProofLength(m) ||
      challenge.output_coeffs.size() != circuit.outputs().size() ||
      weights.fg.size() != m + 1) {
    return MakeError(ErrorKind::kBadArity,
                     "EvaluateLocal: bundle does not match the circuit");
  }
  const std::vector<Fe>& proof = bundle.proof;
  std::vector<Fe> wires(bundle.inputs);
  wires.reserve(circuit.num_wires());
  size_t mul = 0;
  for (const Gate& g : circuit.gates()) {
    switch (g.kind) {
      case GateKind::kAdd:
        wires.push_back(field.Add(wires[g.left], wires[g.right]));
        break;
      case GateKind::kMul:
        ++mul;
        wires.push_back(proof[kProofHeader + mul]);
        break;
      case GateKind::kAddConst:
        // Adding a public constant to every share shifts the secret by it.
        wires.push_back(field.Add(wires[g.left], g.constant));
        break;
      case GateKind::kMulConst:
        wires.push_back(field.Mul(wires[g.left], g.constant));
        break;
    }
  }
  LocalEvaluation out;
  Fe f_r = field.Mul(weights.fg[0], proof[0]);
  Fe g_r = field.Mul(weights.fg[0], proof[1]);
  for (size_t k = 1; k <= m; ++k) {
    const Gate& g = circuit.gates()[circuit.mul_gates()[k - 1]];
    f_r = field.MulAdd(weights.fg[k], wires[g.left], f_r);
    g_r = field.MulAdd(weights.fg[k], wires[g.right], g_r);
  }
  Fe h_r = field.Zero();
  for (size_t k = 0; k <= 2 * m; ++k) {
    h_r = field.MulAdd(weights.h[k], proof[kProofHeader + k], h_r);
  }
  Fe w_out = field.Zero();
  for (size_t k = 0; k < circuit.outputs().size(); ++k) {
    w_out = field.MulAdd(challenge.output_coeffs[k],
                         wires[circuit.outputs()[k]], w_out);
  }
  out.w_out = w_out;
  out.f_r = f_r;
  out.rg_r = field.Mul(weights.r, g_r);
  out.h_r = h_r;
  out.a = proof[2];
  out.b = proof[3];
  out.c = proof[4];
  return out;
}

BeaverOpeningShares BeaverShares(const PrimeField& field,
                                 const LocalEvaluation& local) {
  return {field.Sub(local.f_r, local.a), field.Sub(local.rg_r, local.b)};
}

Fe BeaverLambdaShare(const PrimeField& field, const LocalEvaluation& local,
                     Fe r, Fe d, Fe e) {
  Fe acc = field.Mul(d, e);
  acc = field.MulAdd(d, local.b, acc);
  acc = field.MulAdd(e, local.a, acc);
  acc = field.Add(acc, local.c);
  return field.Sub(acc, field.Mul(r, local.h_r));
}

Fe MultiplicativeLambdaShare(const PrimeField& field,
                             const LocalEvaluation& local, Fe r, Fe z_share) {
  return field.Sub(field.Mul(local.f_r, local.rg_r),
                   field.Mul(field.Mul(r, local.h_r), z_share));
}

absl::StatusOr<SummaryCheck> VerifySummaries(
    const PrimeField& field, std::span<const Point> w_out_shares,
    std::span<const Point> lambda_shares, Fe expected,
    const ReconOptions& w_options, const ReconOptions& lambda_options,
    Prng& prng) {
  SummaryCheck check;
  bool fb_w = false, fb_l = false;
  EIFFEL_ASSIGN_OR_RETURN(
      check.w_out,
      ReconstructWithStrategy(field, w_out_shares, w_options, prng, &fb_w));
  EIFFEL_ASSIGN_OR_RETURN(check.lambda,
                          ReconstructWithStrategy(field, lambda_shares,
                                                  lambda_options, prng, &fb_l));
  check.fell_back = fb_w || fb_l;
  bool ok = check.w_out.secret == expected && check.lambda.secret.v == 0;
  check.verdict = ok ? SnipVerdict::kAccepted : SnipVerdict::kRejected;
  return check;
}

}  // namespace eiffel
