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

#include <algorithm>
#include <memory>
#include <set>
#include <thread>
#include <vector>

#include "eiffel/bulletin.h"
#include "eiffel/crypto.h"
#include "eiffel/encoding.h"
#include "eiffel/sharing.h"
#include "eiffel/status.h"
#include "gtest/gtest.h"

namespace eiffel {
namespace {

std::vector<uint8_t> Bytes(std::string_view s) {
  return std::vector<uint8_t>(s.begin(), s.end());
}

class CryptoSuiteTest : public ::testing::TestWithParam<std::string> {
 protected:
  void SetUp() override { suite_ = *MakeCryptoSuite(GetParam()); }
  std::unique_ptr<CryptoSuite> suite_;
};

TEST_P(CryptoSuiteTest, AgreementIsSymmetric) {
  Prng prng(1);
  KeyPair a = suite_->GenerateKeyPair(prng);
  KeyPair b = suite_->GenerateKeyPair(prng);
  EXPECT_EQ(*suite_->Agree(a.secret_key, b.public_key),
            *suite_->Agree(b.secret_key, a.public_key));
}

TEST_P(CryptoSuiteTest, DistinctPairsGiveDistinctKeys) {
  Prng prng(2);
  std::set<SharedKey> keys;
  for (int i = 0; i < 100; ++i) {
    KeyPair a = suite_->GenerateKeyPair(prng);
    KeyPair b = suite_->GenerateKeyPair(prng);
    keys.insert(*suite_->Agree(a.secret_key, b.public_key));
  }
  EXPECT_EQ(keys.size(), 100u);
}

TEST_P(CryptoSuiteTest, TamperedPublicKeyIsRejectedOrUseless) {
  Prng prng(3);
  KeyPair a = suite_->GenerateKeyPair(prng);
  KeyPair b = suite_->GenerateKeyPair(prng);
  SharedKey good = *suite_->Agree(b.secret_key, a.public_key);
  std::vector<uint8_t> msg = Bytes("share bundle");
  std::vector<uint8_t> ct = suite_->Encrypt(good, msg, {}, prng);
  int rejected = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<uint8_t> pk = a.public_key;
    size_t bit = prng.Uniform(pk.size() * 8);
    pk[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
    absl::StatusOr<SharedKey> key = suite_->Agree(b.secret_key, pk);
    if (!key.ok()) {
      EXPECT_TRUE(IsErrorKind(key.status(), ErrorKind::kBadKey));
      ++rejected;
      continue;
    }
    EXPECT_FALSE(suite_->Decrypt(*key, ct, {}).has_value());
  }
  if (GetParam() == "standard") EXPECT_GT(rejected, 0);
}

TEST_P(CryptoSuiteTest, RoundTripAndWrongKey) {
  Prng prng(4);
  KeyPair a = suite_->GenerateKeyPair(prng);
  KeyPair b = suite_->GenerateKeyPair(prng);
  KeyPair c = suite_->GenerateKeyPair(prng);
  SharedKey ab = *suite_->Agree(a.secret_key, b.public_key);
  SharedKey ac = *suite_->Agree(a.secret_key, c.public_key);
  std::vector<uint8_t> msg(100);
  prng.Fill(msg.data(), msg.size());
  std::vector<uint8_t> ad = Bytes("1->2");
  std::vector<uint8_t> ct = suite_->Encrypt(ab, msg, ad, prng);
  EXPECT_EQ(*suite_->Decrypt(ab, ct, ad), msg);
  EXPECT_FALSE(suite_->Decrypt(ac, ct, ad).has_value());
  EXPECT_FALSE(suite_->Decrypt(ab, ct, Bytes("1->3")).has_value());
  EXPECT_FALSE(suite_->Decrypt(ab, {ct.data(), 10}, ad).has_value());
  EXPECT_EQ(*suite_->Decrypt(ab, suite_->Encrypt(ab, {}, ad, prng), ad),
            std::vector<uint8_t>());
}

TEST_P(CryptoSuiteTest, EveryByteCorruptionFails) {
  Prng prng(5);
  KeyPair a = suite_->GenerateKeyPair(prng);
  KeyPair b = suite_->GenerateKeyPair(prng);
  SharedKey key = *suite_->Agree(a.secret_key, b.public_key);
  std::vector<uint8_t> msg = Bytes("0123456789abcdef");
  int trials = 0;
  while (trials < 1000) {
    std::vector<uint8_t> ct = suite_->Encrypt(key, msg, {}, prng);
    for (size_t pos = 0; pos < ct.size() && trials < 1000; ++pos, ++trials) {
      std::vector<uint8_t> bad = ct;
      bad[pos] ^= static_cast<uint8_t>(1 + prng.Uniform(255));
      EXPECT_FALSE(suite_->Decrypt(key, bad, {}).has_value()) << pos;
    }
  }
}

TEST_P(CryptoSuiteTest, SameSeedSameCiphertext) {
  Prng p1(6), p2(6);
  KeyPair a1 = suite_->GenerateKeyPair(p1);
  KeyPair a2 = suite_->GenerateKeyPair(p2);
  EXPECT_EQ(a1.public_key, a2.public_key);
  SharedKey key = *suite_->Agree(a1.secret_key, a1.public_key);
  EXPECT_EQ(suite_->Encrypt(key, Bytes("x"), {}, p1),
            suite_->Encrypt(key, Bytes("x"), {}, p2));
}

INSTANTIATE_TEST_SUITE_P(Suites, CryptoSuiteTest,
                         ::testing::Values("test", "standard"));

TEST(CryptoTest, UnknownSuite) {
  EXPECT_TRUE(
      IsErrorKind(MakeCryptoSuite("rot13").status(), ErrorKind::kConfigError));
}

TEST(SignerTest, SignVerify) {
  Prng prng(7);
  Signer s = Signer::Generate(prng);
  Signer other = Signer::Generate(prng);
  std::vector<uint8_t> msg = Bytes("hello");
  std::vector<uint8_t> sig = s.Sign(msg);
  EXPECT_TRUE(VerifySignature(s.public_key(), msg, sig));
  EXPECT_FALSE(VerifySignature(other.public_key(), msg, sig));
  msg[0] ^= 1;
  EXPECT_FALSE(VerifySignature(s.public_key(), msg, sig));
}

TEST(EncodingTest, IntegersAreLittleEndian) {
  ByteWriter w;
  w.PutU32(0x01020304);
  w.PutFe(Fe{0x0a0b});
  EXPECT_EQ(HexEncode(w.bytes()), "040302010b0a000000000000");
}

TEST(EncodingTest, RoundTripAndTruncation) {
  const PrimeField& f = PrimeField::Default();
  ByteWriter w;
  w.PutFeVector(std::vector<Fe>{Fe{1}, Fe{f.modulus() - 1}});
  w.PutString("tag");
  std::vector<uint8_t> bytes = w.Take();
  ByteReader r(bytes);
  EXPECT_EQ(*r.FeVector(f), (std::vector<Fe>{Fe{1}, Fe{f.modulus() - 1}}));
  EXPECT_EQ(*r.String(), "tag");
  EXPECT_TRUE(r.ExpectDone().ok());
  for (size_t len = 0; len < bytes.size(); ++len) {
    ByteReader t({bytes.data(), len});
    absl::StatusOr<std::vector<Fe>> v = t.FeVector(f);
    absl::StatusOr<std::string> s =
        v.ok() ? t.String() : absl::StatusOr<std::string>(v.status());
    EXPECT_FALSE(s.ok() && t.done()) << len;
  }
}

TEST(EncodingTest, NonCanonicalFieldElementRejected) {
  const PrimeField& f = PrimeField::Default();
  ByteWriter w;
  w.PutU64(f.modulus());
  ByteReader r(w.bytes());
  EXPECT_TRUE(IsErrorKind(r.ReadFe(f).status(), ErrorKind::kBadEncoding));
}

TEST(EncodingTest, HexRoundTrip) {
  std::vector<uint8_t> data = {0, 1, 0xab, 0xff};
  EXPECT_EQ(HexEncode(data), "0001abff");
  EXPECT_EQ(*HexDecode("0001ABff"), data);
  EXPECT_FALSE(HexDecode("abc").ok());
  EXPECT_FALSE(HexDecode("zz").ok());
}

TEST(EncodingTest, ShareSetAndCheckStringRoundTrip) {
  const PrimeField& f = PrimeField::Default();
  auto group = *MakeToyGroup(f);
  Vss vss(f, *group);
  Prng prng(8);
  std::vector<Fe> xs = {Fe{1}, Fe{2}, Fe{3}, Fe{4}};
  auto [shares, check] = *vss.Share(Fe{42}, xs, 2, prng);
  EXPECT_EQ(*DeserializeShareSet(f, SerializeShareSet(shares)), shares);
  EXPECT_EQ(*DeserializeCheckString(SerializeCheckString(check)), check);
  std::vector<uint8_t> bytes = SerializeShareSet(shares);
  bytes[0] = kSchemaVersion + 1;
  EXPECT_FALSE(DeserializeShareSet(f, bytes).ok());
}

class BulletinTest : public ::testing::Test {
 protected:
  void SetUp() override {
    Prng prng(9);
    for (PartyId id = 0; id <= 3; ++id) {
      signers_.push_back(Signer::Generate(prng));
      ASSERT_TRUE(board_
                      .Register(id, signers_[id].public_key(),
                                signers_[id].Sign(RegistrationMessage(id)))
                      .ok());
    }
  }
  Bulletin board_;
  std::vector<Signer> signers_;
};

TEST_F(BulletinTest, AppendThenRead) {
  uint64_t seq = *board_.Post(signers_[1], 1, "r1/keys", Bytes("pk1"));
  EXPECT_EQ(seq, 0u);
  std::optional<BulletinEntry> e = board_.Find(1, "r1/keys");
  ASSERT_TRUE(e.has_value());
  EXPECT_EQ(e->payload, Bytes("pk1"));
  EXPECT_EQ(board_.Read("r1/keys").size(), 1u);
  EXPECT_EQ(board_.ReadByAuthor(1).size(), 1u);
  EXPECT_FALSE(board_.Find(2, "r1/keys").has_value());
}

TEST_F(BulletinTest, RejectsWrongSignerAndImpersonation) {
  // Client 2 signs an entry claiming to be client 1.
  absl::StatusOr<uint64_t> s = board_.Post(signers_[2], 1, "r1/keys", {});
  EXPECT_TRUE(IsErrorKind(s.status(), ErrorKind::kRejected));
  EXPECT_EQ(board_.size(), 0u);
  // Re-registering an existing id with a fresh key.
  Prng prng(10);
  Signer thief = Signer::Generate(prng);
  EXPECT_TRUE(IsErrorKind(board_.Register(1, thief.public_key(),
                                          thief.Sign(RegistrationMessage(1))),
                          ErrorKind::kRejected));
  // Registration proof made for another id.
  EXPECT_TRUE(IsErrorKind(board_.Register(7, thief.public_key(),
                                          thief.Sign(RegistrationMessage(8))),
                          ErrorKind::kRejected));
  EXPECT_TRUE(IsErrorKind(board_.Post(thief, 9, "r1/keys", {}).status(),
                          ErrorKind::kRejected));
}

TEST_F(BulletinTest, RejectsStaleSeqAndDuplicates) {
  ASSERT_TRUE(board_.Post(signers_[1], 1, "r1/keys", {}).ok());
  EXPECT_FALSE(board_.Post(signers_[1], 1, "r1/keys", {}).ok());
  BulletinEntry e;
  e.seq = 0;
  e.author = 2;
  e.round_tag = "r1/keys";
  e.signature = signers_[2].Sign(EntrySigningBytes(0, 2, "r1/keys", {}));
  EXPECT_FALSE(board_.Append(e).ok());
  e.seq = 1;
  EXPECT_FALSE(board_.Append(e).ok());  // signature covers seq 0
  e.signature = signers_[2].Sign(EntrySigningBytes(1, 2, "r1/keys", {}));
  EXPECT_EQ(*board_.Append(e), 1u);
}

TEST_F(BulletinTest, SealedPhaseIsClosed) {
  ASSERT_TRUE(board_.Post(signers_[1], 1, "r2/shares", {}).ok());
  EXPECT_FALSE(board_.Seal(signers_[1], "r2").ok());
  ASSERT_TRUE(board_.Seal(signers_[0], "r2").ok());
  EXPECT_TRUE(board_.IsSealed("r2"));
  EXPECT_FALSE(board_.IsSealed("r3"));
  EXPECT_TRUE(IsErrorKind(board_.Post(signers_[2], 2, "r2/shares", {}).status(),
                          ErrorKind::kRejected));
  EXPECT_FALSE(board_.Seal(signers_[0], "r2").ok());
  EXPECT_TRUE(board_.Post(signers_[2], 2, "r3/flags", {}).ok());
}

TEST_F(BulletinTest, ConcurrentAppendsAgreeOnOrder) {
  constexpr int kPerWriter = 50;
  std::vector<std::thread> writers;
  std::vector<std::vector<uint64_t>> prefix_sizes(3);
  for (PartyId id = 1; id <= 3; ++id) {
    writers.emplace_back([&, id] {
      for (int k = 0; k < kPerWriter; ++k) {
        ASSERT_TRUE(board_
                        .Post(signers_[id], id, "log/" + std::to_string(k),
                              Bytes(std::to_string(id)))
                        .ok());
        prefix_sizes[id - 1].push_back(board_.size());
      }
    });
  }
  std::vector<BulletinEntry> early = board_.Snapshot();
  for (auto& t : writers) t.join();
  std::vector<BulletinEntry> log = board_.Snapshot();
  ASSERT_EQ(log.size(), 3u * kPerWriter);
  for (size_t i = 0; i < log.size(); ++i) EXPECT_EQ(log[i].seq, i);
  // A snapshot taken mid-run is a prefix of the final log.
  ASSERT_LE(early.size(), log.size());
  for (size_t i = 0; i < early.size(); ++i) EXPECT_EQ(early[i], log[i]);
  for (const auto& sizes : prefix_sizes) {
    EXPECT_TRUE(std::is_sorted(sizes.begin(), sizes.end()));
  }
}

TEST_F(BulletinTest, TranscriptRoundTrip) {
  ASSERT_TRUE(board_.Post(signers_[1], 1, "r1/keys", Bytes("a")).ok());
  ASSERT_TRUE(board_.Post(signers_[2], 2, "r1/keys", Bytes("bb")).ok());
  ASSERT_TRUE(board_.Seal(signers_[0], "r1").ok());
  std::string text = board_.ExportTranscript();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
  std::vector<BulletinEntry> parsed = *ParseTranscript(text);
  EXPECT_EQ(parsed, board_.Snapshot());
  for (const BulletinEntry& e : parsed) {
    EXPECT_TRUE(VerifySignature(
        *board_.PublicKey(e.author),
        EntrySigningBytes(e.seq, e.author, e.round_tag, e.payload),
        e.signature));
  }
  text[3] = text[3] == '0' ? '1' : '0';
  EXPECT_FALSE(ParseTranscript(text).ok());
}

}  // namespace
}  // namespace eiffel
