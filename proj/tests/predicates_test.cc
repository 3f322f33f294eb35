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

#include "eiffel/predicates.h"

#include <cmath>
#include <vector>

#include "eiffel/status.h"
#include "gtest/gtest.h"

namespace eiffel {
namespace {

using int128 = __int128;

int128 Sq(std::span<const int64_t> u) {
  int128 a = 0;
  for (int64_t x : u) a += int128{x} * x;
  return a;
}

int128 Dot(std::span<const int64_t> a, std::span<const int64_t> b) {
  int128 acc = 0;
  for (size_t i = 0; i < a.size(); ++i) acc += int128{a[i]} * b[i];
  return acc;
}

// Plaintext predicate semantics, written directly from the definitions.
bool Oracle(const PredicateSpec& s, std::span<const int64_t> u) {
  switch (s.kind) {
    case PredicateKind::kNormBound:
      return Sq(u) < s.rho_sq;
    case PredicateKind::kNormBall: {
      int128 d = 0;
      for (size_t j = 0; j < u.size(); ++j) {
        int128 x = int128{u[j]} - s.reference[j];
        d += x * x;
      }
      return d <= s.rho_sq;
    }
    case PredicateKind::kZenoPP: {
      int128 n = Sq(u);
      bool band =
          n >= s.norm_target - s.norm_band && n <= s.norm_target + s.norm_band;
      return band && s.gamma * Dot(s.reference, u) - s.rho * n + s.epsilon >= 0;
    }
    case PredicateKind::kCosine: {
      int128 n = Sq(u);
      bool band =
          n >= s.norm_target - s.norm_band && n <= s.norm_target + s.norm_band;
      return band && s.cos_den * Dot(s.reference, u) -
                             int128{s.cos_num} * s.norm_target >=
                         0;
    }
    case PredicateKind::kProduct:
      for (const auto& p : s.parts) {
        if (!Oracle(p, u)) return false;
      }
      return true;
  }
  return false;
}

bool Accepts(const PrimeField& f, const CompiledPredicate& pred,
             std::span<const int64_t> u) {
  auto inputs = WitnessInputs(f, pred, u);
  EXPECT_TRUE(inputs.ok());
  auto trace = Evaluate(f, pred.circuit, *inputs);
  EXPECT_TRUE(trace.ok());
  return IsAccepting(pred.circuit, *trace);
}

TEST(PredicatesTest, NormBoundStrictInequality) {
  const PrimeField& f = PrimeField::Default();
  QuantParams q{0, 10.0};
  std::vector<int64_t> u = {3, 4};
  auto accept = CompilePredicate(f, PredicateSpec::NormBound(26), q, 2);
  ASSERT_TRUE(accept.ok());
  EXPECT_TRUE(Accepts(f, *accept, u));
  auto reject = CompilePredicate(f, PredicateSpec::NormBound(25), q, 2);
  ASSERT_TRUE(reject.ok());
  EXPECT_FALSE(Accepts(f, *reject, u));
}

TEST(PredicatesTest, NonBooleanSlackBitIsCaught) {
  const PrimeField& f = PrimeField::Default();
  QuantParams q{0, 10.0};
  auto pred = CompilePredicate(f, PredicateSpec::NormBound(26), q, 2);
  ASSERT_TRUE(pred.ok());
  std::vector<int64_t> u = {3, 4};
  auto inputs = *WitnessInputs(f, *pred, u);
  // slack = 0; writing 2 into the bit of weight 1 and -2 elsewhere would
  // still sum correctly, so the bit constraint alone has to fire.
  inputs[2] = Fe{2};
  inputs[3] = f.Neg(Fe{1});
  auto trace = Evaluate(f, pred->circuit, inputs);
  EXPECT_FALSE(IsAccepting(pred->circuit, *trace));
}

TEST(PredicatesTest, NormBoundMultiplicationCount) {
  const PrimeField& f = PrimeField::Default();
  QuantParams q{8, 1.0};
  for (size_t d : {1, 8, 100}) {
    auto pred = CompilePredicate(f, PredicateSpec::NormBound(1 << 20), q, d);
    ASSERT_TRUE(pred.ok());
    ASSERT_EQ(pred->inequalities.size(), 1u);
    EXPECT_EQ(pred->inequalities[0].bits, 20u);  // rho^2 - 1 < 2^20
    EXPECT_EQ(pred->circuit.num_mul_gates(), d + pred->num_aux);
  }
}

TEST(PredicatesTest, NormBallWithZeroDistanceAccepts) {
  const PrimeField& f = PrimeField::Default();
  QuantParams q{4, 4.0};
  std::vector<int64_t> v = {5, -7, 12};
  for (int64_t rho_sq : {1, 2, 100}) {
    auto pred = CompilePredicate(f, PredicateSpec::NormBall(v, rho_sq), q, 3);
    ASSERT_TRUE(pred.ok());
    EXPECT_TRUE(Accepts(f, *pred, v));
  }
}

TEST(PredicatesTest, ZenoOnEqualVectorsFollowsSignRule) {
  const PrimeField& f = PrimeField::Default();
  QuantParams q{4, 4.0};
  std::vector<int64_t> v = {10, -3, 7, 1};
  int64_t n = static_cast<int64_t>(Sq(v));
  for (int64_t gamma : {0, 1, 2, 5}) {
    for (int64_t rho : {0, 1, 2, 6}) {
      for (int64_t eps : {-400, -1, 0, 1, 400}) {
        auto spec =
            PredicateSpec::ZenoPP(v, gamma, rho, eps, n, NormBandFor(n, 4));
        auto pred = CompilePredicate(f, spec, q, 4);
        ASSERT_TRUE(pred.ok());
        bool want = (gamma - rho) * n + eps >= 0;
        EXPECT_EQ(Accepts(f, *pred, v), want)
            << gamma << " " << rho << " " << eps;
      }
    }
  }
}

TEST(PredicatesTest, BuildersAgreeWithPlaintextOracle) {
  const PrimeField& f = PrimeField::Default();
  QuantParams q{5, 1.0};  // |u_j| <= 32
  size_t d = 6;
  Prng prng(17);
  auto random_vec = [&](int64_t bound) {
    std::vector<int64_t> u(d);
    for (int64_t& x : u) {
      x = static_cast<int64_t>(prng.Uniform(2 * bound + 1)) - bound;
    }
    return u;
  };
  std::vector<int64_t> ref = random_vec(32);
  int64_t t = static_cast<int64_t>(Sq(ref));
  int64_t band = NormBandFor(t, d) * 20;
  std::vector<PredicateSpec> specs = {
      PredicateSpec::NormBound(2000),
      PredicateSpec::NormBall(ref, 3000),
      PredicateSpec::ZenoPP(ref, 3, 2, 500, t, band),
      PredicateSpec::Cosine(ref, 1, 4, t, band),
      PredicateSpec::Product(
          {PredicateSpec::NormBound(2500), PredicateSpec::NormBall(ref, 4000)}),
  };
  for (const PredicateSpec& spec : specs) {
    auto pred = CompilePredicate(f, spec, q, d);
    ASSERT_TRUE(pred.ok()) << pred.status();
    int accepted = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<int64_t> u = random_vec(32);
      // Bias half the samples towards the reference so both outcomes occur.
      if (trial % 2 == 0) {
        for (size_t j = 0; j < d; ++j) {
          u[j] = ref[j] + static_cast<int64_t>(prng.Uniform(9)) - 4;
          u[j] = std::clamp<int64_t>(u[j], -32, 32);
        }
      }
      bool want = Oracle(spec, u);
      accepted += want;
      ASSERT_EQ(Accepts(f, *pred, u), want) << PredicateKindName(spec.kind);
    }
    EXPECT_GT(accepted, 0) << PredicateKindName(spec.kind);
    EXPECT_LT(accepted, 1000) << PredicateKindName(spec.kind);
  }
}

TEST(PredicatesTest, SlackOverflowIsReported) {
  const PrimeField& f = PrimeField::Default();
  QuantParams q{4, 1.0};
  PredicateSpec spec = PredicateSpec::NormBound(1 << 20);
  spec.slack_bits = 8;
  EXPECT_TRUE(IsErrorKind(CompilePredicate(f, spec, q, 4).status(),
                          ErrorKind::kSlackOverflow));
  // Over p = 17 even tiny ranges wrap.
  const PrimeField& small = PrimeField::Small();
  EXPECT_TRUE(IsErrorKind(
      CompilePredicate(small, PredicateSpec::NormBound(10), q, 4).status(),
      ErrorKind::kSlackOverflow));
}

TEST(PredicatesTest, DimensionMismatchIsReported) {
  const PrimeField& f = PrimeField::Default();
  QuantParams q{4, 1.0};
  EXPECT_TRUE(IsErrorKind(
      CompilePredicate(f, PredicateSpec::NormBall({1, 2}, 5), q, 3).status(),
      ErrorKind::kBadDimension));
  auto pred = CompilePredicate(f, PredicateSpec::NormBound(5), q, 3);
  std::vector<int64_t> u = {1};
  EXPECT_TRUE(IsErrorKind(WitnessInputs(f, *pred, u).status(),
                          ErrorKind::kBadDimension));
}

TEST(PredicatesTest, EqualityProductIsZeroExactlyOnMembers) {
  const PrimeField& f = PrimeField::Small();
  std::vector<Fe> constants = {Fe{2}, Fe{5}, Fe{11}};
  Circuit c(1);
  c.AddOutput(EqualityProduct(f, c, 0, constants));
  EXPECT_EQ(c.num_mul_gates(), 2u);
  for (uint64_t x = 0; x < 17; ++x) {
    std::vector<Fe> in = {Fe{x}};
    Fe out = Evaluate(f, c, in)->values[c.outputs()[0]];
    bool member = x == 2 || x == 5 || x == 11;
    EXPECT_EQ(out.v == 0, member) << x;
  }
  Circuit single(1);
  std::vector<Fe> one = {Fe{4}};
  single.AddOutput(EqualityProduct(f, single, 0, one));
  EXPECT_EQ(single.num_mul_gates(), 0u);
  EXPECT_EQ(single.gates().size(), 1u);
}

TEST(PredicatesTest, CombinedCheckCatchesSingleFailure) {
  const PrimeField& f = PrimeField::Default();
  // Three zero-on-success predicates on one input: x - 1, x - 1, x - 2.
  std::vector<Circuit> parts;
  for (uint64_t c : {1, 1, 2}) {
    Circuit part(1);
    part.set_convention(OutputConvention::kZeroOnSuccess);
    part.AddOutput(part.AddConst(0, f.Neg(Fe{c})));
    parts.push_back(part);
  }
  auto combined = CombineCircuits(parts);
  ASSERT_TRUE(combined.ok());
  EXPECT_EQ(combined->outputs().size(), 3u);
  std::vector<Fe> in = {Fe{1}};
  WireTrace trace = *Evaluate(f, *combined, in);
  Prng prng(23);
  int false_accepts = 0;
  for (int trial = 0; trial < 100000; ++trial) {
    std::vector<Fe> l = DrawCombination(f, 3, prng);
    false_accepts += CombineOutputs(f, *combined, trace, l).v == 0;
  }
  EXPECT_EQ(false_accepts, 0);

  // Single predicate: the check reduces to l * out = 0.
  std::vector<Circuit> one = {parts[0]};
  auto single = CombineCircuits(one);
  WireTrace ok_trace = *Evaluate(f, *single, in);
  std::vector<Fe> l = DrawCombination(f, 1, prng);
  EXPECT_EQ(CombineOutputs(f, *single, ok_trace, l), Fe{0});
}

}  // namespace
}  // namespace eiffel
