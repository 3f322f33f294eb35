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

#include "eiffel/field.h"

#include <cstdint>
#include <vector>

#include "eiffel/status.h"
#include "gtest/gtest.h"

namespace eiffel {
namespace {

bool TrialDivisionPrime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

TEST(FieldTest, IsPrimeMatchesTrialDivision) {
  for (uint64_t n = 0; n < 50000; ++n) {
    ASSERT_EQ(IsPrime(n), TrialDivisionPrime(n)) << n;
  }
  EXPECT_TRUE(IsPrime(kDefaultPrime));
  EXPECT_TRUE(IsPrime((1ULL << 61) - 1));
  EXPECT_FALSE(IsPrime(kDefaultPrime - 2));
}

TEST(FieldTest, CreateRejectsComposites) {
  EXPECT_FALSE(PrimeField::Create(15).ok());
  EXPECT_TRUE(
      IsErrorKind(PrimeField::Create(15).status(), ErrorKind::kConfigError));
  EXPECT_TRUE(PrimeField::Create(101).ok());
}

TEST(FieldTest, DefaultFieldHasLargeTwoAdicSubgroup) {
  const PrimeField& f = PrimeField::Default();
  EXPECT_EQ(f.two_adicity(), 32);
  Fe w = f.RootOfUnity(32);
  EXPECT_EQ(f.Pow(w, 1ULL << 31), f.Neg(f.One()));
  EXPECT_EQ(f.Pow(w, 1ULL << 32), f.One());
}

TEST(FieldTest, SignedEncodingRoundTrips) {
  const PrimeField& f = PrimeField::Default();
  EXPECT_EQ(f.FromInt(-3).v, kDefaultPrime - 3);
  for (int64_t x : {0LL, 1LL, -1LL, 123456789LL, -987654321LL}) {
    EXPECT_EQ(f.ToCentered(f.FromInt(x)), x);
  }
  const PrimeField& s = PrimeField::Small();
  EXPECT_EQ(s.FromInt(-1).v, 16u);
  EXPECT_EQ(s.ToCentered(Fe{9}), -8);
  EXPECT_EQ(s.ToCentered(Fe{8}), 8);
}

TEST(FieldTest, InverseAndBatchInverse) {
  const PrimeField& f = PrimeField::Default();
  Prng prng(7);
  std::vector<Fe> values;
  for (int i = 0; i < 200; ++i) {
    Fe a = f.RandomNonZero(prng);
    EXPECT_EQ(f.Mul(a, f.Inv(a)), f.One());
    values.push_back(a);
  }
  std::vector<Fe> inverted = values;
  f.BatchInvert(inverted);
  for (size_t i = 0; i < values.size(); ++i) {
    EXPECT_EQ(inverted[i], f.Inv(values[i]));
  }
  const PrimeField& s = PrimeField::Small();
  for (uint64_t a = 1; a < 17; ++a) {
    EXPECT_EQ((a * s.Inv(Fe{a}).v) % 17, 1u);
  }
}

TEST(FieldTest, ArithmeticMatchesWideIntegers) {
  const PrimeField& f = PrimeField::Default();
  Prng prng(11);
  for (int i = 0; i < 1000; ++i) {
    Fe a = f.Random(prng), b = f.Random(prng);
    unsigned __int128 p = kDefaultPrime;
    EXPECT_EQ(f.Add(a, b).v,
              static_cast<uint64_t>((a.v + (unsigned __int128)b.v) % p));
    EXPECT_EQ(f.Sub(a, b).v, static_cast<uint64_t>((a.v + p - b.v) % p));
    EXPECT_EQ(f.Mul(a, b).v,
              static_cast<uint64_t>(((unsigned __int128)a.v * b.v) % p));
  }
}

TEST(FieldTest, OpCounterScopesNest) {
  const PrimeField& f = PrimeField::Default();
  ScopedOpCounter outer;
  f.Mul(Fe{2}, Fe{3});
  {
    ScopedOpCounter inner;
    f.Mul(Fe{2}, Fe{3});
    f.Mul(Fe{2}, Fe{3});
    f.Inv(Fe{5});
    EXPECT_EQ(inner.counts().mul, 2u);
    EXPECT_EQ(inner.counts().inv, 1u);
  }
  EXPECT_EQ(outer.counts().mul, 3u);
  EXPECT_EQ(outer.counts().inv, 1u);
}

TEST(PrngTest, SameSeedSameStream) {
  Prng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.NextU64(), b.NextU64());
  Prng c = Prng::Derive(42, 1), d = Prng::Derive(42, 2);
  EXPECT_NE(c.NextU64(), d.NextU64());
}

TEST(PrngTest, UniformStaysInRange) {
  Prng prng(3);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 7000; ++i) ++counts[prng.Uniform(7)];
  for (int c : counts) {
    EXPECT_GT(c, 850);
    EXPECT_LT(c, 1150);
  }
}

}  // namespace
}  // namespace eiffel
