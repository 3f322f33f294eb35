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

// Acceptance suite. Runs each criterion and prints one PASS/FAIL line.
// Usage: acceptance_test [criterion ...]; no arguments runs all of them.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "eiffel/adversary.h"
#include "eiffel/commitment.h"
#include "eiffel/harness.h"
#include "eiffel/polynomial.h"
#include "eiffel/predicates.h"
#include "eiffel/protocol.h"
#include "eiffel/sharing.h"
#include "eiffel/snip.h"
#include "eiffel/status.h"

namespace eiffel {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Largest m with m < floor((n - 1) / 3).
size_t MaxM(size_t n) { return (n - 1) / 3 - 1; }

size_t IntSqrt(size_t n) {
  size_t r = 0;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

double Binomial(size_t n, size_t k) {
  if (k > n) return 0;
  double r = 1;
  for (size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// --- 1. Robust reconstruction capacity ---

// Every assignment of {clean, erased, corrupted} to the n shares, decoded at
// t = m + 1 for each admissible m. Within capacity the secret must come back
// exactly; at capacity the decoder may fail but never return a wrong secret.
// Corrupted shares either take random values or lie on a second polynomial
// that agrees with the true one on t - 1 clean shares.
Outcome RobustCapacity() {
  const PrimeField& f = PrimeField::Default();
  Prng prng(101);
  size_t within = 0, at = 0, at_failed = 0, bad = 0;
  for (size_t n : {7, 10}) {
    for (size_t m = 0; m <= MaxM(n); ++m) {
      const size_t t = m + 1;
      size_t patterns = 1;
      for (size_t i = 0; i < n; ++i) patterns *= 3;
      for (size_t code = 0; code < patterns; ++code) {
        std::vector<int> kind(n);
        size_t q = 0, e = 0;
        for (size_t i = 0, c = code; i < n; ++i, c /= 3) {
          kind[i] = static_cast<int>(c % 3);
          q += kind[i] == 2;
          e += kind[i] == 1;
        }
        if (2 * q + e > n - t + 1) continue;
        const bool inside = 2 * q + e < n - t + 1;
        std::vector<Fe> coeffs(t);
        for (Fe& c : coeffs) c = f.Random(prng);
        Polynomial truth(coeffs);
        // Second polynomial through t - 1 clean shares.
        std::vector<size_t> anchors;
        for (size_t i = 0; i < n && anchors.size() + 1 < t; ++i) {
          if (kind[i] == 0) anchors.push_back(i);
        }
        Polynomial lie = truth;
        const bool structured = (code & 1) && anchors.size() + 1 == t;
        if (structured) {
          Polynomial vanish({f.One()});
          for (size_t i : anchors) {
            vanish =
                PolyMul(f, vanish, Polynomial({f.Neg(Fe{i + 1}), f.One()}));
          }
          lie = PolyAdd(f, truth, PolyScale(f, vanish, f.RandomNonZero(prng)));
        }
        std::vector<Point> pts;
        for (size_t i = 0; i < n; ++i) {
          Fe x{i + 1};
          if (kind[i] == 1) continue;
          Fe y = PolyEval(f, truth, x);
          if (kind[i] == 2) {
            Fe z = structured ? PolyEval(f, lie, x) : f.Random(prng);
            y = z == y ? f.Add(y, f.One()) : z;
          }
          pts.push_back({x, y});
        }
        absl::StatusOr<ReconReport> r = RobustReconstruct(f, pts, t);
        const Fe secret = PolyEval(f, truth, Fe{0});
        if (inside) {
          ++within;
          if (!r.ok() || r->secret != secret) ++bad;
        } else {
          ++at;
          if (!r.ok()) {
            ++at_failed;
            if (!IsErrorKind(r.status(), ErrorKind::kDecodeFailure) &&
                !IsErrorKind(r.status(), ErrorKind::kInsufficientShares)) {
              ++bad;
            }
          } else if (r->secret != secret) {
            ++bad;
          }
        }
      }
    }
  }
  return {bad == 0,
          absl::StrFormat("%d within-capacity patterns exact, %d at-capacity "
                          "patterns (%d DecodeFailure, rest correct), %d wrong",
                          within, at, at_failed, bad)};
}

// --- Matrix driver shared by criteria 4, 6 and 7 ---

struct Cell {
  AttackKind attack;
  PredicateKind predicate;
  MisbehaviorKind misbehavior;
  ReconStrategy recon;
  size_t n;
};

RunConfig CellConfig(const Cell& cell, uint64_t seed) {
  RunConfig c;
  c.n = cell.n;
  c.m = MaxM(cell.n);
  if (cell.recon == ReconStrategy::kPartition) {
    c.m = std::min(c.m, IntSqrt(cell.n) - 2);
  }
  c.d = 8;
  c.predicate = cell.predicate;
  c.attack.kind = cell.attack;
  if (cell.attack == AttackKind::kSignFlip) c.attack.c = 3;
  if (cell.attack == AttackKind::kScaling) c.attack.c = 4;
  if (cell.attack == AttackKind::kAdditiveNoise) c.attack.sigma = 0.3;
  c.misbehavior = cell.misbehavior;
  c.recon = cell.recon;
  c.seed = seed;
  return c;
}

struct MatrixRun {
  Cell cell;
  size_t m = 0;
  absl::StatusOr<IterationReport> report;
};

const std::vector<MatrixRun>& Matrix() {
  static const std::vector<MatrixRun>* runs = [] {
    auto* out = new std::vector<MatrixRun>;
    uint64_t seed = 1;
    for (AttackKind a : {AttackKind::kSignFlip, AttackKind::kScaling,
                         AttackKind::kAdditiveNoise, AttackKind::kMinMax,
                         AttackKind::kMinSum}) {
      for (PredicateKind p :
           {PredicateKind::kNormBound, PredicateKind::kNormBall,
            PredicateKind::kZenoPP, PredicateKind::kCosine}) {
        for (MisbehaviorKind b :
             {MisbehaviorKind::kBadShares, MisbehaviorKind::kFalseFlag,
              MisbehaviorKind::kWithholdSummaries,
              MisbehaviorKind::kCorruptSummaryShares,
              MisbehaviorKind::kCorruptAggregateShare,
              MisbehaviorKind::kServerDropHonest}) {
          for (ReconStrategy r :
               {ReconStrategy::kGao, ReconStrategy::kProbabilistic,
                ReconStrategy::kPartition}) {
            for (size_t n : {7, 10, 20}) {
              Cell cell{a, p, b, r, n};
              RunConfig config = CellConfig(cell, seed++);
              out->push_back({cell, config.m, RunIteration(config)});
            }
          }
        }
      }
    }
    return out;
  }();
  return *runs;
}

std::string CellName(const Cell& c) {
  return absl::StrCat(AttackKindName(c.attack), "/",
                      PredicateKindName(c.predicate), "/",
                      MisbehaviorKindName(c.misbehavior), "/",
                      ReconStrategyName(c.recon), "/n=", c.n);
}

// --- 2. Completeness ---

Outcome Completeness() {
  const PredicateKind predicates[] = {
      PredicateKind::kNormBound, PredicateKind::kNormBall,
      PredicateKind::kZenoPP, PredicateKind::kCosine};
  const size_t ns[] = {7, 10, 20};
  const size_t ds[] = {4, 8, 16};
  size_t honest_valid = 0, accepted = 0, errors = 0, mismatches = 0;
  for (size_t i = 0; i < 500; ++i) {
    RunConfig c;
    c.n = ns[i % 3];
    c.path = (i / 3) % 2 ? SummaryPath::kMultiplicative : SummaryPath::kBeaver;
    c.m = MaxM(c.n);
    if (c.path == SummaryPath::kMultiplicative) {
      while (4 * c.m >= c.n - 1) --c.m;
    }
    c.d = ds[(i / 6) % 3];
    c.predicate = predicates[(i / 18) % 4];
    // The m malicious clients corrupt every summary share they post.
    c.misbehavior = MisbehaviorKind::kCorruptSummaryShares;
    c.seed = 5000 + i;
    absl::StatusOr<IterationReport> r = RunIteration(c);
    if (!r.ok() || r->run.aborted) {
      ++errors;
      continue;
    }
    mismatches += !r->oracle_agrees;
    for (PartyId id = 1; id <= c.n; ++id) {
      if (std::binary_search(r->malicious.begin(), r->malicious.end(), id)) {
        continue;
      }
      if (!PlaintextAccepts(r->spec, r->quantized[id - 1])) continue;
      ++honest_valid;
      accepted += std::binary_search(r->run.accepted.begin(),
                                     r->run.accepted.end(), id);
    }
  }
  return {errors == 0 && mismatches == 0 && honest_valid > 0 &&
              accepted == honest_valid,
          absl::StrFormat("500 runs with malicious verifiers: %d/%d honest "
                          "valid updates accepted, %d oracle mismatches, %d "
                          "errors",
                          accepted, honest_valid, mismatches, errors)};
}

// --- 3. Soundness ---

// Verifies one prover with honest verifiers 2..n on the Beaver path.
absl::StatusOr<SnipVerdict> VerifyWithHonestVerifiers(
    const Vss& vss, const Circuit& circuit, std::span<const Fe> inputs,
    const SnipProof& proof, const Challenge& challenge, size_t n, size_t m,
    Prng& prng) {
  const PrimeField& f = vss.field();
  EIFFEL_ASSIGN_OR_RETURN(SplitResult split,
                          SplitProof(vss, inputs, proof, 1, n, m, prng));
  ChallengeWeights weights = PrepareChallenge(f, circuit, challenge.r);
  std::vector<LocalEvaluation> locals;
  std::vector<Point> w_pts, d_pts, e_pts, l_pts;
  for (size_t j = 2; j <= n; ++j) {
    const ProofBundle& b = split.bundles[j - 1];
    if (!VerifyBundle(vss, b, split.input_checks, split.proof_checks, true)) {
      return SnipVerdict::kRejected;
    }
    EIFFEL_ASSIGN_OR_RETURN(LocalEvaluation local,
                            EvaluateLocal(f, circuit, b, challenge, weights));
    BeaverOpeningShares de = BeaverShares(f, local);
    w_pts.push_back({Fe{j}, local.w_out});
    d_pts.push_back({Fe{j}, de.d});
    e_pts.push_back({Fe{j}, de.e});
    locals.push_back(local);
  }
  EIFFEL_ASSIGN_OR_RETURN(ReconReport d, RobustReconstruct(f, d_pts, m + 1));
  EIFFEL_ASSIGN_OR_RETURN(ReconReport e, RobustReconstruct(f, e_pts, m + 1));
  for (size_t j = 2; j <= n; ++j) {
    l_pts.push_back({Fe{j}, BeaverLambdaShare(f, locals[j - 2], challenge.r,
                                              d.secret, e.secret)});
  }
  ReconOptions opt{ReconStrategy::kGao, m + 1};
  EIFFEL_ASSIGN_OR_RETURN(
      SummaryCheck check,
      VerifySummaries(f, w_pts, l_pts, ExpectedOutput(circuit), opt, opt,
                      prng));
  return check.verdict;
}

// Over p = 17, counts accepting challenges r in F_17 for a forged proof and
// compares with the roots of t (f g - h)(t) - alpha computed from
// coefficient-form interpolants.
struct SmallFieldTally {
  size_t proofs = 0;
  size_t mismatches = 0;
  size_t false_accepts = 0;
};

SmallFieldTally SmallFieldSoundness() {
  const PrimeField& f = PrimeField::Small();
  std::unique_ptr<CommitmentGroup> group = *MakeToyGroup(f);
  Vss vss(f, *group);
  SmallFieldTally tally;
  Prng prng(17);
  // Two 1-on-success circuits with 2 and 3 multiplication gates.
  std::vector<Circuit> circuits;
  {
    Circuit c(2);
    Wire xy = c.Mul(0, 1);
    Wire xx = c.Mul(0, 0);
    c.AddOutput(c.Add(xy, xx));
    circuits.push_back(c);
  }
  {
    Circuit c(2);
    Wire xx = c.Mul(0, 0);
    Wire xxy = c.Mul(xx, 1);
    Wire yy = c.Mul(1, 1);
    c.AddOutput(c.Add(xxy, yy));
    circuits.push_back(c);
  }
  for (const Circuit& c : circuits) {
    const size_t M = c.num_mul_gates();
    const Wire last = c.outputs().front();
    const Wire lied = static_cast<Wire>(c.num_inputs() + c.mul_gates().back());
    for (uint64_t x = 0; x < 17; ++x) {
      for (uint64_t y = 0; y < 17; ++y) {
        std::vector<Fe> in = {Fe{x}, Fe{y}};
        WireTrace trace = *Evaluate(f, c, in);
        if (trace.values[last] == f.One()) continue;
        // Lie about the last multiplication so the output reads 1.
        Fe delta = f.Sub(f.One(), trace.values[last]);
        trace.values[lied] = f.Add(trace.values[lied], delta);
        trace.values[last] = f.One();
        SnipProof proof = ProveFromTrace(f, c, trace, prng);
        Fe alpha = f.FromU64(prng.Uniform(3));
        proof.beaver.c = f.Sub(f.Mul(proof.beaver.a, proof.beaver.b), alpha);

        std::vector<Point> fp = {{Fe{0}, proof.f0}}, gp = {{Fe{0}, proof.g0}};
        for (size_t k = 1; k <= M; ++k) {
          const Gate& g = c.gates()[c.mul_gates()[k - 1]];
          fp.push_back({Fe{k}, trace.values[g.left]});
          gp.push_back({Fe{k}, trace.values[g.right]});
        }
        Polynomial diff =
            PolySub(f, PolyMul(f, *Interpolate(f, fp), *Interpolate(f, gp)),
                    proof.HCoefficients(f));
        size_t roots = 0;
        for (uint64_t t = 0; t < 17; ++t) {
          roots += f.Sub(f.Mul(Fe{t}, PolyEval(f, diff, Fe{t})), alpha).v == 0;
        }
        size_t accepts = 0;
        for (uint64_t r = 0; r < 17; ++r) {
          Challenge ch{Fe{r}, {f.One()}};
          absl::StatusOr<SnipVerdict> v =
              VerifyWithHonestVerifiers(vss, c, in, proof, ch, 4, 1, prng);
          accepts += v.ok() && *v == SnipVerdict::kAccepted;
        }
        ++tally.proofs;
        tally.mismatches += accepts != roots;
        tally.false_accepts += accepts;
      }
    }
  }
  return tally;
}

Outcome Soundness() {
  const PrimeField& f = PrimeField::Default();
  std::unique_ptr<CommitmentGroup> group = *MakeToyGroup(f);
  Vss vss(f, *group);
  QuantParams quant{4, 4.0};
  const size_t dim = 4;
  CompiledPredicate pred =
      *CompilePredicate(f, PredicateSpec::NormBound(400), quant, dim);
  Prng prng(33);
  size_t trials = 0, accepted = 0, errors = 0, skipped = 0;
  while (trials < 10000) {
    std::vector<int64_t> u(dim);
    for (int64_t& x : u) x = static_cast<int64_t>(prng.Uniform(121)) - 60;
    if (PlaintextAccepts(PredicateSpec::NormBound(400), u)) continue;
    std::vector<Fe> inputs = *WitnessInputs(f, pred, u);
    absl::StatusOr<WireTrace> forged =
        ForgeAcceptingTrace(f, pred.circuit, inputs);
    if (!forged.ok()) {
      ++skipped;
      continue;
    }
    SnipProof proof = ProveFromTrace(f, pred.circuit, *forged, prng);
    if (trials % 2 == 1) {
      // Also cheat on the triple.
      proof.beaver.c = f.Add(proof.beaver.c, f.RandomNonZero(prng));
    }
    Challenge ch = DrawChallenge(f, pred.circuit, prng);
    absl::StatusOr<SnipVerdict> v = VerifyWithHonestVerifiers(
        vss, pred.circuit, inputs, proof, ch, 7, 1, prng);
    ++trials;
    if (!v.ok()) {
      ++errors;
    } else if (*v == SnipVerdict::kAccepted) {
      ++accepted;
    }
  }
  SmallFieldTally small = SmallFieldSoundness();
  return {accepted == 0 && errors == 0 && skipped == 0 &&
              small.mismatches == 0 && small.proofs > 0,
          absl::StrFormat("p=2^56-2^32+1: %d/%d forged proofs accepted (M=%d); "
                          "p=17: %d forged proofs, accept count == root count "
                          "for all but %d (%d accepting challenges in total)",
                          accepted, trials, pred.circuit.num_mul_gates(),
                          small.proofs, small.mismatches, small.false_accepts)};
}

// --- 4. Integrity matrix ---

Outcome Integrity() {
  size_t ok = 0, aborts = 0, honest_missing = 0;
  std::string first_failure;
  for (const MatrixRun& run : Matrix()) {
    bool good = run.report.ok() && run.report->oracle_agrees &&
                run.report->honest_included;
    if (good && run.cell.misbehavior == MisbehaviorKind::kServerDropHonest &&
        run.report->expect_abort) {
      good = run.report->run.aborted && run.report->run.aggregate.empty();
    }
    if (run.report.ok()) {
      aborts += run.report->run.aborted;
      honest_missing += !run.report->honest_included;
    }
    ok += good;
    if (!good && first_failure.empty()) {
      first_failure = absl::StrCat(
          "; first failure ", CellName(run.cell), ": ",
          run.report.ok() ? "mismatch"
                          : std::string(run.report.status().message()));
    }
  }
  const size_t total = Matrix().size();
  return {ok == total && total == 1080,
          absl::StrFormat("%d/%d runs match the plaintext oracle exactly "
                          "(%d aborted, all expected), honest clients missing "
                          "in %d%s",
                          ok, total, aborts, honest_missing, first_failure)};
}

// --- 5. Abort safety ---

Outcome AbortSafety() {
  const PredicateKind predicates[] = {
      PredicateKind::kNormBound, PredicateKind::kNormBall,
      PredicateKind::kZenoPP, PredicateKind::kCosine};
  const size_t ns[] = {7, 10, 20};
  size_t trials = 0, aborted = 0, leaked = 0, attempts = 0;
  while (trials < 200 && attempts < 400) {
    RunConfig c;
    c.n = ns[attempts % 3];
    c.m = MaxM(c.n);
    c.d = 8;
    c.predicate = predicates[(attempts / 3) % 4];
    c.attack.kind = attempts % 2 ? AttackKind::kSignFlip : AttackKind::kNone;
    c.attack.c = 3;
    c.misbehavior = MisbehaviorKind::kServerDropHonest;
    c.seed = 90000 + attempts;
    ++attempts;
    absl::StatusOr<IterationReport> r = RunIteration(c);
    if (!r.ok()) return {false, std::string(r.status().message())};
    // Only drops of a client whose update is valid count as trials.
    if (!r->expect_abort) continue;
    ++trials;
    aborted += r->run.aborted;
    leaked += !r->run.aggregate.empty();
  }
  return {trials == 200 && aborted == trials && leaked == 0,
          absl::StrFormat("%d/%d runs dropping a valid honest client aborted, "
                          "%d produced an aggregate",
                          aborted, trials, leaked)};
}

// --- 6. Share exposure ---

Outcome Exposure() {
  size_t ok = 0, max_seen = 0, with_reveals = 0;
  for (const MatrixRun& run : Matrix()) {
    if (!run.report.ok()) continue;
    size_t exposure = run.report->run.max_share_exposure;
    max_seen = std::max(max_seen, exposure);
    ok += exposure <= run.m;
    with_reveals += run.cell.misbehavior == MisbehaviorKind::kBadShares;
  }
  return {
      ok == Matrix().size(),
      absl::StrFormat("%d/%d matrix runs expose at most m shares per honest "
                      "client (largest exposure %d, %d runs with "
                      "arbitration scripts)",
                      ok, Matrix().size(), max_seen, with_reveals)};
}

// --- 7. Optimization equivalence ---

// Decodes (w_out, lambda) for one prover via both digest paths from the same
// verifier shares.
struct PathPair {
  Fe w_beaver, w_mult, l_beaver, l_mult;
};

absl::StatusOr<PathPair> DecodeBothPaths(const Vss& vss, const Circuit& circuit,
                                         std::span<const Fe> inputs,
                                         const SnipProof& proof, size_t n,
                                         size_t m, Prng& prng) {
  const PrimeField& f = vss.field();
  EIFFEL_ASSIGN_OR_RETURN(SplitResult split,
                          SplitProof(vss, inputs, proof, 1, n, m, prng));
  Challenge ch = DrawChallenge(f, circuit, prng);
  ChallengeWeights weights = PrepareChallenge(f, circuit, ch.r);
  std::vector<Fe> xs;
  for (size_t j = 2; j <= n; ++j) xs.push_back(Fe{j});
  EIFFEL_ASSIGN_OR_RETURN(auto z, vss.Share(f.One(), xs, m + 1, prng));
  std::vector<LocalEvaluation> locals;
  std::vector<Point> w_pts, d_pts, e_pts, lb_pts, lm_pts;
  for (size_t j = 2; j <= n; ++j) {
    EIFFEL_ASSIGN_OR_RETURN(
        LocalEvaluation local,
        EvaluateLocal(f, circuit, split.bundles[j - 1], ch, weights));
    BeaverOpeningShares de = BeaverShares(f, local);
    w_pts.push_back({Fe{j}, local.w_out});
    d_pts.push_back({Fe{j}, de.d});
    e_pts.push_back({Fe{j}, de.e});
    lm_pts.push_back({Fe{j}, MultiplicativeLambdaShare(
                                 f, local, ch.r, z.first.points[j - 2].y)});
    locals.push_back(local);
  }
  EIFFEL_ASSIGN_OR_RETURN(ReconReport d, RobustReconstruct(f, d_pts, m + 1));
  EIFFEL_ASSIGN_OR_RETURN(ReconReport e, RobustReconstruct(f, e_pts, m + 1));
  for (size_t j = 2; j <= n; ++j) {
    lb_pts.push_back(
        {Fe{j}, BeaverLambdaShare(f, locals[j - 2], ch.r, d.secret, e.secret)});
  }
  PathPair out;
  EIFFEL_ASSIGN_OR_RETURN(ReconReport w, RobustReconstruct(f, w_pts, m + 1));
  out.w_beaver = out.w_mult = w.secret;
  EIFFEL_ASSIGN_OR_RETURN(ReconReport lb, RobustReconstruct(f, lb_pts, m + 1));
  EIFFEL_ASSIGN_OR_RETURN(ReconReport lm,
                          RobustReconstruct(f, lm_pts, 2 * m + 1));
  out.l_beaver = lb.secret;
  out.l_mult = lm.secret;
  return out;
}

// Wrong-accept rate of the probabilistic decoder against a prover whose
// shares lie on a second polynomial at m - e + 1 points, chosen to also agree
// with the true polynomial at t - 1 clean points.
struct McResult {
  size_t n, m, e;
  double rate;
  double exact;
  double bound;
};

McResult ProbabilisticMonteCarlo(size_t n, size_t m, size_t e, Prng& prng) {
  const PrimeField& f = PrimeField::Default();
  const size_t t = m + 1, present = n - e, k = m - e + 1;
  const size_t trials = 10000;
  size_t wrong = 0;
  for (size_t trial = 0; trial < trials; ++trial) {
    std::vector<Fe> coeffs(t);
    for (Fe& c : coeffs) c = f.Random(prng);
    Polynomial truth(coeffs);
    // Present shares are x = 1..present; the adversary uses the first k as
    // its corrupted shares and the next t - 1 as anchors.
    Polynomial vanish({f.One()});
    for (size_t i = k; i < k + t - 1; ++i) {
      vanish = PolyMul(f, vanish, Polynomial({f.Neg(Fe{i + 1}), f.One()}));
    }
    Polynomial lie =
        PolyAdd(f, truth, PolyScale(f, vanish, f.RandomNonZero(prng)));
    std::vector<Point> pts;
    for (size_t i = 0; i < present; ++i) {
      Fe x{i + 1};
      pts.push_back({x, PolyEval(f, i < k ? lie : truth, x)});
    }
    absl::StatusOr<ReconReport> r =
        ProbabilisticReconstruct(f, pts, t, m, e, prng);
    wrong += r.ok() && r->secret != PolyEval(f, truth, Fe{0});
  }
  // Both subsets of size s must contain all k + t - 1 adversarial points.
  const size_t s = 3 * m - 2 * e + 1, target = k + t - 1;
  double one = Binomial(present - target, s - target) / Binomial(present, s);
  return {n,         m,
          e,         static_cast<double>(wrong) / trials,
          one * one, 1.0 / Binomial(n - e, 3 * m - 2 * e + 2)};
}

// Partition decoding against m + 2 corrupted shares on a second polynomial
// that agrees with the truth at m clean points, the least needed to fill two
// partitions.
McResult PartitionMonteCarlo(size_t n, size_t m, Prng& prng) {
  const PrimeField& f = PrimeField::Default();
  const size_t t = m + 1, k = m + 2, q = k;
  const size_t trials = 10000;
  size_t wrong = 0;
  for (size_t trial = 0; trial < trials; ++trial) {
    std::vector<Fe> coeffs(t);
    for (Fe& c : coeffs) c = f.Random(prng);
    Polynomial truth(coeffs);
    Polynomial vanish({f.One()});
    for (size_t i = k; i < k + m; ++i) {
      vanish = PolyMul(f, vanish, Polynomial({f.Neg(Fe{i + 1}), f.One()}));
    }
    Polynomial lie =
        PolyAdd(f, truth, PolyScale(f, vanish, f.RandomNonZero(prng)));
    std::vector<Point> pts;
    for (size_t i = 0; i < n; ++i) {
      Fe x{i + 1};
      pts.push_back({x, PolyEval(f, i < k ? lie : truth, x)});
    }
    absl::StatusOr<ReconReport> r =
        PartitionReconstruct(f, pts, t, n / t, prng);
    wrong += r.ok() && r->secret != PolyEval(f, truth, Fe{0});
  }
  return {n,   m,
          q,   static_cast<double>(wrong) / trials,
          0.0, 1.0 / Binomial(n - m - 1, 2 * (m + 1) - q)};
}

Outcome OptimizationEquivalence() {
  // (a) Strategies against Gao on the matrix.
  size_t strategy_runs = 0, strategy_ok = 0;
  for (const MatrixRun& run : Matrix()) {
    if (run.cell.recon == ReconStrategy::kGao || !run.report.ok()) continue;
    ++strategy_runs;
    bool agree = run.report->run.aggregate_agrees_with_gao;
    for (const ProverDecision& d : run.report->run.decisions) {
      agree = agree && d.agrees_with_gao;
    }
    strategy_ok += agree;
  }

  // (b) Beaver and multiplicative paths on the same shares.
  const PrimeField& f = PrimeField::Default();
  std::unique_ptr<CommitmentGroup> group = *MakeToyGroup(f);
  Vss vss(f, *group);
  QuantParams quant{4, 4.0};
  CompiledPredicate pred =
      *CompilePredicate(f, PredicateSpec::NormBound(900), quant, 4);
  Prng prng(71);

  // A third each: valid inputs with honest proofs, invalid inputs with honest
  // proofs (w_out != 0) and invalid inputs with forged traces (lambda != 0).
  const PredicateSpec bound = PredicateSpec::NormBound(900);
  size_t pairs = 0, same = 0, nonzero_w = 0, nonzero_lambda = 0;
  for (size_t i = 0; i < 200; ++i) {
    const size_t n = i % 2 ? 10 : 7, m = i % 2 ? 2 : 1;
    const bool want_valid = i % 3 == 0;
    std::vector<int64_t> u(4);
    do {
      for (int64_t& x : u) x = static_cast<int64_t>(prng.Uniform(61)) - 30;
    } while (PlaintextAccepts(bound, u) != want_valid);
    std::vector<Fe> inputs = *WitnessInputs(f, pred, u);
    SnipProof proof;
    if (i % 3 == 2) {
      absl::StatusOr<WireTrace> forged =
          ForgeAcceptingTrace(f, pred.circuit, inputs);
      if (!forged.ok()) continue;
      proof = ProveFromTrace(f, pred.circuit, *forged, prng);
    } else {
      proof = Prove(f, pred.circuit, inputs, prng)->second;
    }
    absl::StatusOr<PathPair> pp =
        DecodeBothPaths(vss, pred.circuit, inputs, proof, n, m, prng);
    if (!pp.ok()) continue;
    ++pairs;
    same += pp->w_beaver == pp->w_mult && pp->l_beaver == pp->l_mult;
    nonzero_w += pp->w_beaver != Fe{0};
    nonzero_lambda += pp->l_beaver != Fe{0};
  }

  // (c) Monte Carlo wrong-accept rates.
  std::vector<McResult> mc;
  Prng mc_prng(404);
  mc.push_back(ProbabilisticMonteCarlo(7, 1, 0, mc_prng));
  mc.push_back(ProbabilisticMonteCarlo(10, 2, 0, mc_prng));
  mc.push_back(ProbabilisticMonteCarlo(10, 2, 1, mc_prng));
  mc.push_back(ProbabilisticMonteCarlo(13, 3, 1, mc_prng));
  mc.push_back(PartitionMonteCarlo(9, 1, mc_prng));
  mc.push_back(PartitionMonteCarlo(16, 2, mc_prng));
  bool mc_ok = true;
  std::string mc_text;
  for (size_t i = 0; i < mc.size(); ++i) {
    const McResult& r = mc[i];
    mc_ok = mc_ok && r.rate < 10 * r.bound;
    absl::StrAppend(&mc_text, i < 4 ? " prob" : " part",
                    absl::StrFormat("(n=%d,m=%d,%s=%d) %.4f<10*%.4f", r.n, r.m,
                                    i < 4 ? "e" : "q", r.e, r.rate, r.bound));
    if (i < 4)
      absl::StrAppend(&mc_text, absl::StrFormat(" [exact %.4f]", r.exact));
    absl::StrAppend(&mc_text, ";");
  }
  return {strategy_runs > 0 && strategy_ok == strategy_runs && pairs == 200 &&
              same == pairs && mc_ok,
          absl::StrFormat("strategies agree with Gao in %d/%d matrix runs; "
                          "Beaver == multiplicative (w_out, lambda) in %d/%d "
                          "pairs (%d with w_out != 0, %d with lambda != 0); "
                          "Monte Carlo:%s",
                          strategy_ok, strategy_runs, same, pairs, nonzero_w,
                          nonzero_lambda, mc_text)};
}

// --- 8. Message accounting ---

Outcome MessageAccounting() {
  const std::vector<std::string> beaver_client = {
      "send r1/keys",      "recv r1",    "send r2/shares",    "recv r2",
      "send r3i/flags",    "recv chal",  "send r3ii/summary", "recv open",
      "send r3iii/lambda", "recv final", "send r4/aggregate", "recv out"};
  const std::vector<std::string> beaver_server = {
      "send r1/valid",    "recv r3i",     "send chal/cstar",
      "recv r3ii",        "send open/de", "recv r3iii",
      "send final/cstar", "recv r4",      "send out/aggregate"};
  size_t runs = 0, ok = 0;
  std::set<std::pair<size_t, size_t>> counts;
  std::string first_failure;
  for (SummaryPath path :
       {SummaryPath::kBeaver, SummaryPath::kMultiplicative}) {
    for (size_t n : {7, 10, 20}) {
      for (size_t d : {4, 64, 256}) {
        RunConfig c;
        c.n = n;
        c.m = 1;
        c.d = d;
        c.path = path;
        c.attackers = 0;
        c.seed = n * 1000 + d;
        absl::StatusOr<IterationReport> r = RunIteration(c);
        ++runs;
        if (!r.ok() || r->run.aborted) continue;
        const StepCounts want = ExpectedSteps(path);
        bool good = r->run.parties[0].steps.size() == want.server;
        if (path == SummaryPath::kBeaver) {
          good = good && r->run.parties[0].steps == beaver_server;
        }
        for (PartyId i = 1; i <= n; ++i) {
          const PartyMetrics& p = r->run.parties[i];
          good = good && p.steps.size() == want.client &&
                 p.conditional_steps.empty();
          if (path == SummaryPath::kBeaver)
            good = good && p.steps == beaver_client;
          counts.insert({p.steps.size(), r->run.parties[0].steps.size()});
        }
        ok += good;
        if (!good && first_failure.empty()) {
          first_failure = absl::StrCat(
              "; first failure ", SummaryPathName(path), " n=", n, " d=", d);
        }
      }
    }
  }
  return {ok == runs,
          absl::StrFormat("%d/%d honest runs over n in {7,10,20}, d in "
                          "{4,64,256}: Beaver 12 client / 9 server one-way "
                          "steps, multiplicative 10 / 7%s",
                          ok, runs, first_failure)};
}

// --- 9. Training arms ---

Outcome TrainingArms() {
  RunConfig c;
  c.n = 20;
  c.m = 2;
  c.d = 16;
  c.separation = 2;
  c.predicate = PredicateKind::kNormBound;
  c.attack.kind = AttackKind::kSignFlip;
  c.attack.c = 12;
  c.iterations = 20;
  c.seed = 9;
  absl::StatusOr<TrainingReport> r = RunTraining(c);
  if (!r.ok()) return {false, std::string(r.status().message())};
  size_t same_sets = 0, same_acc = 0;
  for (size_t it = 0; it < c.iterations; ++it) {
    same_sets += r->eiffel[it].run.accepted == r->plaintext_accepted[it];
    same_acc +=
        r->accuracy[3 * it + 1].accuracy == r->accuracy[3 * it + 2].accuracy;
  }
  const double final_none = r->accuracy[3 * (c.iterations - 1)].accuracy;
  const double final_eiffel = r->accuracy[3 * (c.iterations - 1) + 1].accuracy;

  size_t agree = 0, total = 0;
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    RunConfig p = c;
    p.d = 4096;
    p.project_dim = 512;
    p.project_seed = 1000 + seed;
    p.attack.c = 3;
    p.seed = seed;
    absl::StatusOr<TrainingReport> pr = RunTraining(p);
    if (!pr.ok()) return {false, std::string(pr.status().message())};
    agree += pr->agreeing_decisions;
    total += pr->total_decisions;
  }
  const double agreement = total ? static_cast<double>(agree) / total : 0;
  return {same_sets == c.iterations && same_acc == c.iterations &&
              total == 20 * 20 * 10 && agreement >= 0.95,
          absl::StrFormat("n=20 m=2 sign-flip + norm-bound: identical accepted "
                          "sets %d/%d, identical accuracy %d/%d (final %.3f vs "
                          "%.3f without defense); projection 4096->512 "
                          "decision agreement %d/%d = %.4f",
                          same_sets, c.iterations, same_acc, c.iterations,
                          final_eiffel, final_none, agree, total, agreement)};
}

// --- 10. Complexity probe ---

Outcome Complexity() {
  struct Sample {
    size_t n, d;
    double ops;
  };
  std::vector<Sample> samples;
  const size_t m = 2;
  for (size_t n : {10, 20, 40}) {
    for (size_t d : {64, 256, 1024}) {
      RunConfig c;
      c.n = n;
      c.m = m;
      c.d = d;
      c.attackers = 0;
      c.seed = 3;
      absl::StatusOr<IterationReport> r = RunIteration(c);
      if (!r.ok()) return {false, std::string(r.status().message())};
      double ops = 0;
      for (PartyId i = 1; i <= n; ++i) {
        const OpCounts& o = r->run.parties[i].ops;
        ops += static_cast<double>(o.mul + o.inv);
      }
      samples.push_back({n, d, ops / n});
    }
  }
  // Least squares in log space: log c = mean(log(ops / (m n d))).
  double log_c = 0;
  for (const Sample& s : samples) log_c += std::log(s.ops / (m * s.n * s.d));
  const double c = std::exp(log_c / samples.size());
  double worst = 1;
  std::string table;
  for (const Sample& s : samples) {
    double ratio = s.ops / (c * m * s.n * s.d);
    worst = std::max(worst, std::max(ratio, 1 / ratio));
    absl::StrAppend(&table, absl::StrFormat(" (%d,%d):%.2f", s.n, s.d, ratio));
  }
  return {worst <= 2.0,
          absl::StrFormat("client field ops per run ~ %.2f * m n d; worst "
                          "ratio %.2f over (n,d):%s",
                          c, worst, table)};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace eiffel

int main(int argc, char** argv) {
  using eiffel::Criterion;
  const std::vector<Criterion> criteria = {
      {1, "robust reconstruction capacity", eiffel::RobustCapacity},
      {2, "proof completeness", eiffel::Completeness},
      {3, "proof soundness", eiffel::Soundness},
      {4, "integrity over the adversarial matrix", eiffel::Integrity},
      {5, "abort on dropped honest client", eiffel::AbortSafety},
      {6, "share exposure at most m", eiffel::Exposure},
      {7, "optimization equivalence", eiffel::OptimizationEquivalence},
      {8, "message accounting", eiffel::MessageAccounting},
      {9, "training arm equivalence", eiffel::TrainingArms},
      {10, "complexity probe", eiffel::Complexity},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failures = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.contains(c.id)) continue;
    auto start = std::chrono::steady_clock::now();
    eiffel::Outcome out = c.run();
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("[%s] %d %s: %s (%.1f s)\n", out.pass ? "PASS" : "FAIL", c.id,
                c.name, out.detail.c_str(), secs);
    std::fflush(stdout);
    failures += !out.pass;
  }
  return failures == 0 ? 0 : 1;
}
