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

#include "eiffel/circuit.h"

#include <vector>

#include "eiffel/predicates.h"
#include "eiffel/status.h"
#include "gtest/gtest.h"

namespace eiffel {
namespace {

// One-pass validator: every gate equation holds on the trace.
bool TraceSatisfiesGates(const PrimeField& f, const Circuit& c,
                         const WireTrace& t) {
  if (t.values.size() != c.num_wires()) return false;
  for (size_t k = 0; k < c.gates().size(); ++k) {
    const Gate& g = c.gates()[k];
    Fe out = t.values[c.num_inputs() + k];
    Fe l = t.values[g.left];
    Fe want;
    switch (g.kind) {
      case GateKind::kAdd:
        want = f.Add(l, t.values[g.right]);
        break;
      case GateKind::kMul:
        want = f.Mul(l, t.values[g.right]);
        break;
      case GateKind::kAddConst:
        want = f.Add(l, g.constant);
        break;
      case GateKind::kMulConst:
        want = f.Mul(l, g.constant);
        break;
    }
    if (want != out) return false;
  }
  return true;
}

TEST(CircuitTest, MultipliesOverSmallField) {
  const PrimeField& f = PrimeField::Small();
  Circuit c(2);
  c.AddOutput(c.Mul(0, 1));
  ASSERT_TRUE(c.Validate().ok());
  EXPECT_EQ(c.num_mul_gates(), 1u);
  std::vector<Fe> in = {Fe{3}, Fe{4}};
  auto trace = Evaluate(f, c, in);
  ASSERT_TRUE(trace.ok());
  EXPECT_EQ(trace->values[c.outputs()[0]], Fe{12});
  EXPECT_TRUE(TraceSatisfiesGates(f, c, *trace));
}

TEST(CircuitTest, ArityMismatchIsReported) {
  const PrimeField& f = PrimeField::Small();
  Circuit c(2);
  c.AddOutput(c.Mul(0, 1));
  std::vector<Fe> in = {Fe{3}};
  EXPECT_TRUE(IsErrorKind(Evaluate(f, c, in).status(), ErrorKind::kBadArity));
}

TEST(CircuitTest, ValidateRejectsForwardReferences) {
  Circuit c(1);
  c.Add(0, 5);
  c.AddOutput(1);
  EXPECT_TRUE(IsErrorKind(c.Validate(), ErrorKind::kBadArity));
  Circuit no_output(1);
  no_output.Mul(0, 0);
  EXPECT_FALSE(no_output.Validate().ok());
}

TEST(CircuitTest, ParsesTextFormat) {
  const PrimeField& f = PrimeField::Small();
  auto c = Circuit::FromText(
      "inputs 2 output 4 muls 1\nMUL 0 1\nADDC 2 5\nMULC 3 2\n", f);
  ASSERT_TRUE(c.ok()) << c.status();
  std::vector<Fe> in = {Fe{3}, Fe{4}};
  auto trace = Evaluate(f, *c, in);
  // (3 * 4 + 5) * 2 = 34 = 0 mod 17
  EXPECT_EQ(trace->values[4], Fe{0});
  EXPECT_EQ(c->ToText(),
            "inputs 2 output 4 muls 1\nMUL 0 1\nADDC 2 5\nMULC 3 2\n");
}

TEST(CircuitTest, TextRejectsMalformedInput) {
  const PrimeField& f = PrimeField::Small();
  EXPECT_FALSE(Circuit::FromText("", f).ok());
  EXPECT_FALSE(
      Circuit::FromText("inputs 2 output 2 muls 2\nMUL 0 1\n", f).ok());
  EXPECT_FALSE(
      Circuit::FromText("inputs 2 output 2 muls 1\nPOW 0 1\n", f).ok());
  EXPECT_FALSE(
      Circuit::FromText("inputs 2 output 3 muls 1\nMUL 0 3\n", f).ok());
}

TEST(CircuitTest, CompiledPredicatesRoundTripThroughText) {
  const PrimeField& f = PrimeField::Default();
  QuantParams q{4, 2.0};
  auto pred = CompilePredicate(
      f,
      PredicateSpec::Product({PredicateSpec::NormBound(400),
                              PredicateSpec::NormBall({1, -2, 3}, 900)}),
      q, 3);
  ASSERT_TRUE(pred.ok()) << pred.status();
  std::string text = pred->circuit.ToText();
  auto parsed = Circuit::FromText(text, f);
  ASSERT_TRUE(parsed.ok()) << parsed.status();
  EXPECT_TRUE(*parsed == pred->circuit);
  EXPECT_EQ(parsed->ToText(), text);
}

}  // namespace
}  // namespace eiffel
