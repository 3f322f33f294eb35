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

#include "eiffel/commitment.h"

#include <openssl/bn.h>

#include <array>
#include <cstring>
#include <vector>

#include "absl/strings/str_cat.h"
#include "eiffel/status.h"

namespace eiffel {
namespace {

// 2048-bit prime with (q - 1) divisible by the default field modulus, and an
// element of order exactly that modulus.
constexpr char kProductionModulusHex[] =
    "c7e81c6de051c03199d66944fb1328fe125d974d795d8e9439c60bf0efbddf6a"
    "dc2d4342e1e5cbf1b90acbb4ee5ac21328ef89ecdb6b6d04ece240bf1982b6de"
    "39ba98549f7d8b42941d12d1c96ea51ae733cceb24c16923a0d886e9faa7be0f"
    "243af91e892a921c46b80f334b22db32f3413fe68e7889b7b3dcf2d63a893a6d"
    "85f8205e5bc21f0845d010dd8c7856cbbdb96db41ce46f6895976395ca746602"
    "7ccd66103b7fbaddaa1b36f5916a1809677c6571e42fdabb0126d7413212000e"
    "4d368be7a4e079e1595ff16cdcd9fa08de664110ec873003b2ce381b2a20dd3f"
    "c3158c2dcbfa58c623c243ec7c18c771d41fcb2e48bf94b9e56eae98b877809d";
constexpr char kProductionGeneratorHex[] =
    "73d5ca175f131d9fce532c6c72faee97e74f552b806de00e348f9864b0e9d529"
    "98ca2b1193caeb2db42d5dc0d13c60ca6447d206b9496eee1877aa8559b29ba8"
    "3817d25d369d0a10a4d89ca72b3675dc3f75dff66bc7fa1c0f0a73f8d9dd548d"
    "02e1d90153ac5348d754a4c6558f7ef09d58f87505f9c4407eb6fa38e3deadee"
    "ac5e93c03b838b2ebf3075a685b550aa318ef9572540897e3be3964760bd64cb"
    "6c5197915b5905753de8b0e26345c2e730b3e006aa1fa2ab32ff200e62ebbaf0"
    "99ade7917385815901214de141b51b03e2b63359172e5c8d0f88bb1df4c20955"
    "5188c22eaaddf3cf13c9272217a680e0553052d4b57d35e22976eda70fbcf3a7";

uint64_t MulMod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

uint64_t PowMod(uint64_t a, uint64_t e, uint64_t m) {
  uint64_t r = 1;
  while (e > 0) {
    if (e & 1) r = MulMod(r, a, m);
    a = MulMod(a, a, m);
    e >>= 1;
  }
  return r;
}

class ToyGroup : public CommitmentGroup {
 public:
  ToyGroup(uint64_t q, uint64_t g) : q_(q), g_(g) {
    // Fixed-base table: table_[w][b] = g^(b * 256^w).
    uint64_t base = g_;
    for (auto& window : table_) {
      window[0] = 1;
      for (int b = 1; b < 256; ++b) window[b] = MulMod(window[b - 1], base, q_);
      base = MulMod(window[255], base, q_);
    }
  }

  std::string_view name() const override { return "toy"; }
  size_t element_size() const override { return 8; }

  void Commit(Fe e, uint8_t* out) const override {
    uint64_t r = Exp(e.v);
    std::memcpy(out, &r, 8);
  }

  bool VerifyShare(uint64_t index, Fe value, const uint8_t* psi,
                   size_t count) const override {
    if (count == 0) return false;
    // Horner in the exponent: ((psi_{t-1})^j psi_{t-2})^j ... psi_0.
    uint64_t acc = Load(psi, count - 1);
    uint64_t ops = 0;
    for (size_t k = count - 1; k-- > 0;) {
      acc = MulMod(PowSmall(acc, index, ops), Load(psi, k), q_);
      ++ops;
    }
    CountGroupOps(ops + 8);
    return acc == Exp(value.v);
  }

  uint64_t modulus() const { return q_; }

 private:
  static uint64_t Load(const uint8_t* psi, size_t k) {
    uint64_t x;
    std::memcpy(&x, psi + 8 * k, 8);
    return x;
  }

  uint64_t Exp(uint64_t e) const {
    uint64_t r = 1;
    for (int w = 0; e != 0; ++w, e >>= 8) {
      r = MulMod(r, table_[w][e & 0xff], q_);
    }
    return r;
  }

  uint64_t PowSmall(uint64_t a, uint64_t e, uint64_t& ops) const {
    uint64_t r = 1;
    while (e > 0) {
      if (e & 1) {
        r = MulMod(r, a, q_);
        ++ops;
      }
      e >>= 1;
      if (e > 0) {
        a = MulMod(a, a, q_);
        ++ops;
      }
    }
    return r;
  }

  uint64_t q_;
  uint64_t g_;
  std::array<std::array<uint64_t, 256>, 8> table_;
};

struct BnDeleter {
  void operator()(BIGNUM* b) const { BN_free(b); }
  void operator()(BN_CTX* c) const { BN_CTX_free(c); }
  void operator()(BN_MONT_CTX* m) const { BN_MONT_CTX_free(m); }
};
using BnPtr = std::unique_ptr<BIGNUM, BnDeleter>;
using BnCtxPtr = std::unique_ptr<BN_CTX, BnDeleter>;
using BnMontPtr = std::unique_ptr<BN_MONT_CTX, BnDeleter>;

BnPtr BnFromHex(const char* hex) {
  BIGNUM* b = nullptr;
  BN_hex2bn(&b, hex);
  return BnPtr(b);
}

class ProductionGroup : public CommitmentGroup {
 public:
  ProductionGroup()
      : q_(BnFromHex(kProductionModulusHex)),
        g_(BnFromHex(kProductionGeneratorHex)),
        mont_(BN_MONT_CTX_new()) {
    BnCtxPtr ctx(BN_CTX_new());
    BN_MONT_CTX_set(mont_.get(), q_.get(), ctx.get());
    size_ = BN_num_bytes(q_.get());
  }

  std::string_view name() const override { return "production"; }
  size_t element_size() const override { return size_; }

  void Commit(Fe e, uint8_t* out) const override {
    BnCtxPtr ctx(BN_CTX_new());
    BnPtr r = Exp(g_.get(), e.v, ctx.get());
    BN_bn2binpad(r.get(), out, static_cast<int>(size_));
  }

  bool VerifyShare(uint64_t index, Fe value, const uint8_t* psi,
                   size_t count) const override {
    if (count == 0) return false;
    BnCtxPtr ctx(BN_CTX_new());
    BnPtr acc = Load(psi, count - 1);
    if (acc == nullptr) return false;
    for (size_t k = count - 1; k-- > 0;) {
      BnPtr psi_k = Load(psi, k);
      if (psi_k == nullptr) return false;
      BnPtr powered = Exp(acc.get(), index, ctx.get());
      BN_mod_mul(acc.get(), powered.get(), psi_k.get(), q_.get(), ctx.get());
    }
    CountGroupOps(count * 8 + 80);
    BnPtr lhs = Exp(g_.get(), value.v, ctx.get());
    return BN_cmp(lhs.get(), acc.get()) == 0;
  }

 private:
  BnPtr Load(const uint8_t* psi, size_t k) const {
    BnPtr b(BN_bin2bn(psi + k * size_, static_cast<int>(size_), nullptr));
    if (b == nullptr || BN_is_zero(b.get()) || BN_cmp(b.get(), q_.get()) >= 0) {
      return nullptr;
    }
    return b;
  }

  BnPtr Exp(const BIGNUM* base, uint64_t e, BN_CTX* ctx) const {
    BnPtr exponent(BN_new());
    BN_set_word(exponent.get(), e);
    BnPtr r(BN_new());
    BN_mod_exp_mont(r.get(), base, exponent.get(), q_.get(), ctx, mont_.get());
    return r;
  }

  BnPtr q_;
  BnPtr g_;
  BnMontPtr mont_;
  size_t size_;
};

}  // namespace

absl::StatusOr<std::unique_ptr<CommitmentGroup>> MakeToyGroup(
    const PrimeField& field) {
  uint64_t p = field.modulus();
  for (uint64_t k = 2; p <= ((1ULL << 63) - 2) / k; k += 2) {
    uint64_t q = k * p + 1;
    if (!IsPrime(q)) continue;
    for (uint64_t h = 2; h < q; ++h) {
      uint64_t g = PowMod(h, k, q);
      if (g != 1) return std::make_unique<ToyGroup>(q, g);
    }
  }
  return MakeError(ErrorKind::kConfigError,
                   absl::StrCat("MakeToyGroup: no prime q = kp + 1 below "
                                "2^63 for p = ",
                                p));
}

absl::StatusOr<std::unique_ptr<CommitmentGroup>> MakeProductionGroup(
    const PrimeField& field) {
  if (field.modulus() != kDefaultPrime) {
    return MakeError(ErrorKind::kConfigError,
                     "MakeProductionGroup: only defined for the default "
                     "field");
  }
  return std::make_unique<ProductionGroup>();
}

}  // namespace eiffel
