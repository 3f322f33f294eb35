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

#include "eiffel/crypto.h"

#include <openssl/bn.h>
#include <openssl/ec.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/obj_mac.h>
#include <openssl/params.h>
#include <openssl/sha.h>

#include <cstring>

#include "absl/strings/str_cat.h"
#include "eiffel/status.h"

namespace eiffel {
namespace {

constexpr size_t kNonceSize = 12;
constexpr size_t kTagSize = 16;

std::array<uint8_t, 32> HmacSha256(const SharedKey& key,
                                   std::span<const uint8_t> data) {
  std::array<uint8_t, 32> out;
  unsigned int len = 0;
  HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), data.data(),
       data.size(), out.data(), &len);
  return out;
}

// HMAC-SHA256 under one key, reset between messages without rehashing the
// key pads.
class KeyedHmac {
 public:
  explicit KeyedHmac(const SharedKey& key) {
    static EVP_MAC* const mac = EVP_MAC_fetch(nullptr, "HMAC", nullptr);
    ctx_ = EVP_MAC_CTX_new(mac);
    char digest[] = "SHA256";
    OSSL_PARAM params[] = {
        OSSL_PARAM_construct_utf8_string("digest", digest, 0),
        OSSL_PARAM_construct_end()};
    EVP_MAC_init(ctx_, key.data(), key.size(), params);
  }
  ~KeyedHmac() { EVP_MAC_CTX_free(ctx_); }
  KeyedHmac(const KeyedHmac&) = delete;
  KeyedHmac& operator=(const KeyedHmac&) = delete;

  std::array<uint8_t, 32> Compute(std::span<const uint8_t> data) {
    std::array<uint8_t, 32> out;
    size_t len = 0;
    EVP_MAC_init(ctx_, nullptr, 0, nullptr);
    EVP_MAC_update(ctx_, data.data(), data.size());
    EVP_MAC_final(ctx_, out.data(), &len, out.size());
    return out;
  }

 private:
  EVP_MAC_CTX* ctx_;
};

// --- Toy suite ---

constexpr uint64_t kToyPrime = (1ULL << 61) - 1;
constexpr uint64_t kToyGenerator = 37;

uint64_t ToyMul(uint64_t a, uint64_t b) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) %
                               kToyPrime);
}

uint64_t ToyPow(uint64_t a, uint64_t e) {
  uint64_t r = 1;
  while (e > 0) {
    if (e & 1) r = ToyMul(r, a);
    a = ToyMul(a, a);
    e >>= 1;
  }
  return r;
}

std::vector<uint8_t> U64Bytes(uint64_t x) {
  std::vector<uint8_t> out(8);
  for (int i = 0; i < 8; ++i) out[i] = static_cast<uint8_t>(x >> (8 * i));
  return out;
}

std::optional<uint64_t> BytesU64(std::span<const uint8_t> b) {
  if (b.size() != 8) return std::nullopt;
  uint64_t x = 0;
  for (int i = 0; i < 8; ++i) x |= uint64_t{b[i]} << (8 * i);
  return x;
}

class TestCrypto : public CryptoSuite {
 public:
  std::string_view name() const override { return "test"; }

  KeyPair GenerateKeyPair(Prng& prng) const override {
    uint64_t sk = 2 + prng.Uniform(kToyPrime - 3);
    return {U64Bytes(ToyPow(kToyGenerator, sk)), U64Bytes(sk)};
  }

  absl::StatusOr<SharedKey> Agree(
      std::span<const uint8_t> secret_key,
      std::span<const uint8_t> peer_public_key) const override {
    std::optional<uint64_t> sk = BytesU64(secret_key);
    std::optional<uint64_t> pk = BytesU64(peer_public_key);
    if (!sk.has_value() || !pk.has_value() || *pk <= 1 ||
        *pk >= kToyPrime - 1) {
      return MakeError(ErrorKind::kBadKey, "TestCrypto::Agree: invalid key");
    }
    std::vector<uint8_t> material = U64Bytes(ToyPow(*pk, *sk));
    const char kLabel[] = "eiffel-toy-ka";
    material.insert(material.end(), kLabel, kLabel + sizeof(kLabel) - 1);
    return Sha256(material);
  }

  std::vector<uint8_t> Encrypt(const SharedKey& key,
                               std::span<const uint8_t> plaintext,
                               std::span<const uint8_t> associated,
                               Prng& prng) const override {
    std::vector<uint8_t> out(kNonceSize + plaintext.size() + kTagSize);
    prng.Fill(out.data(), kNonceSize);
    Xor(key, out.data(), plaintext, out.data() + kNonceSize);
    auto tag =
        Tag(key, associated, {out.data(), kNonceSize + plaintext.size()});
    std::memcpy(out.data() + kNonceSize + plaintext.size(), tag.data(),
                kTagSize);
    return out;
  }

  std::optional<std::vector<uint8_t>> Decrypt(
      const SharedKey& key, std::span<const uint8_t> ciphertext,
      std::span<const uint8_t> associated) const override {
    if (ciphertext.size() < kNonceSize + kTagSize) return std::nullopt;
    size_t body = ciphertext.size() - kNonceSize - kTagSize;
    auto tag = Tag(key, associated, ciphertext.first(kNonceSize + body));
    if (CRYPTO_memcmp(tag.data(), ciphertext.data() + kNonceSize + body,
                      kTagSize) != 0) {
      return std::nullopt;
    }
    std::vector<uint8_t> plain(body);
    Xor(key, ciphertext.data(), ciphertext.subspan(kNonceSize, body),
        plain.data());
    return plain;
  }

 private:
  static void Xor(const SharedKey& key, const uint8_t* nonce,
                  std::span<const uint8_t> in, uint8_t* out) {
    std::array<uint8_t, kNonceSize + 8> block_input;
    std::memcpy(block_input.data(), nonce, kNonceSize);
    KeyedHmac hmac(key);
    for (size_t off = 0, ctr = 0; off < in.size(); off += 32, ++ctr) {
      for (int i = 0; i < 8; ++i) {
        block_input[kNonceSize + i] = static_cast<uint8_t>(ctr >> (8 * i));
      }
      auto stream = hmac.Compute(block_input);
      size_t len = std::min<size_t>(32, in.size() - off);
      for (size_t i = 0; i < len; ++i) out[off + i] = in[off + i] ^ stream[i];
    }
  }

  static std::array<uint8_t, 32> Tag(const SharedKey& key,
                                     std::span<const uint8_t> associated,
                                     std::span<const uint8_t> nonce_and_body) {
    std::vector<uint8_t> data(8);
    uint64_t ad_len = associated.size();
    for (int i = 0; i < 8; ++i)
      data[i] = static_cast<uint8_t>(ad_len >> (8 * i));
    data.insert(data.end(), associated.begin(), associated.end());
    data.insert(data.end(), nonce_and_body.begin(), nonce_and_body.end());
    // Domain-separate the tag key from the keystream key.
    SharedKey tag_key = key;
    tag_key[0] ^= 0x5c;
    return HmacSha256(tag_key, data);
  }
};

// --- Standard suite ---

struct EcDeleter {
  void operator()(EC_GROUP* g) const { EC_GROUP_free(g); }
  void operator()(EC_POINT* p) const { EC_POINT_free(p); }
  void operator()(BIGNUM* b) const { BN_free(b); }
  void operator()(BN_CTX* c) const { BN_CTX_free(c); }
  void operator()(EVP_CIPHER_CTX* c) const { EVP_CIPHER_CTX_free(c); }
};

class StandardCrypto : public CryptoSuite {
 public:
  StandardCrypto() : group_(EC_GROUP_new_by_curve_name(NID_X9_62_prime256v1)) {}

  std::string_view name() const override { return "standard"; }

  KeyPair GenerateKeyPair(Prng& prng) const override {
    std::unique_ptr<BN_CTX, EcDeleter> ctx(BN_CTX_new());
    const BIGNUM* order = EC_GROUP_get0_order(group_.get());
    std::unique_ptr<BIGNUM, EcDeleter> sk(BN_new());
    std::array<uint8_t, 32> raw;
    do {
      prng.Fill(raw.data(), raw.size());
      BN_bin2bn(raw.data(), static_cast<int>(raw.size()), sk.get());
    } while (BN_is_zero(sk.get()) || BN_cmp(sk.get(), order) >= 0);
    std::unique_ptr<EC_POINT, EcDeleter> pk(EC_POINT_new(group_.get()));
    EC_POINT_mul(group_.get(), pk.get(), sk.get(), nullptr, nullptr, ctx.get());
    KeyPair kp;
    kp.public_key.resize(65);
    EC_POINT_point2oct(group_.get(), pk.get(), POINT_CONVERSION_UNCOMPRESSED,
                       kp.public_key.data(), kp.public_key.size(), ctx.get());
    kp.secret_key.assign(raw.begin(), raw.end());
    return kp;
  }

  absl::StatusOr<SharedKey> Agree(
      std::span<const uint8_t> secret_key,
      std::span<const uint8_t> peer_public_key) const override {
    std::unique_ptr<BN_CTX, EcDeleter> ctx(BN_CTX_new());
    std::unique_ptr<EC_POINT, EcDeleter> peer(EC_POINT_new(group_.get()));
    // Only the uncompressed encoding is accepted so each point has one form.
    if (secret_key.size() != 32 || peer_public_key.size() != 65 ||
        peer_public_key[0] != 0x04 ||
        EC_POINT_oct2point(group_.get(), peer.get(), peer_public_key.data(),
                           peer_public_key.size(), ctx.get()) != 1 ||
        EC_POINT_is_at_infinity(group_.get(), peer.get()) ||
        EC_POINT_is_on_curve(group_.get(), peer.get(), ctx.get()) != 1) {
      return MakeError(ErrorKind::kBadKey,
                       "StandardCrypto::Agree: invalid key");
    }
    std::unique_ptr<BIGNUM, EcDeleter> sk(
        BN_bin2bn(secret_key.data(), 32, nullptr));
    std::unique_ptr<EC_POINT, EcDeleter> shared(EC_POINT_new(group_.get()));
    std::unique_ptr<BIGNUM, EcDeleter> x(BN_new());
    EC_POINT_mul(group_.get(), shared.get(), nullptr, peer.get(), sk.get(),
                 ctx.get());
    EC_POINT_get_affine_coordinates(group_.get(), shared.get(), x.get(),
                                    nullptr, ctx.get());
    std::vector<uint8_t> material(32);
    BN_bn2binpad(x.get(), material.data(), 32);
    const char kLabel[] = "eiffel-p256-ecdh";
    material.insert(material.end(), kLabel, kLabel + sizeof(kLabel) - 1);
    return Sha256(material);
  }

  std::vector<uint8_t> Encrypt(const SharedKey& key,
                               std::span<const uint8_t> plaintext,
                               std::span<const uint8_t> associated,
                               Prng& prng) const override {
    std::vector<uint8_t> out(kNonceSize + plaintext.size() + kTagSize);
    prng.Fill(out.data(), kNonceSize);
    std::unique_ptr<EVP_CIPHER_CTX, EcDeleter> ctx(EVP_CIPHER_CTX_new());
    int len = 0;
    EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(),
                       out.data());
    EVP_EncryptUpdate(ctx.get(), nullptr, &len, associated.data(),
                      static_cast<int>(associated.size()));
    EVP_EncryptUpdate(ctx.get(), out.data() + kNonceSize, &len,
                      plaintext.data(), static_cast<int>(plaintext.size()));
    EVP_EncryptFinal_ex(ctx.get(), out.data() + kNonceSize + len, &len);
    EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, kTagSize,
                        out.data() + kNonceSize + plaintext.size());
    return out;
  }

  std::optional<std::vector<uint8_t>> Decrypt(
      const SharedKey& key, std::span<const uint8_t> ciphertext,
      std::span<const uint8_t> associated) const override {
    if (ciphertext.size() < kNonceSize + kTagSize) return std::nullopt;
    size_t body = ciphertext.size() - kNonceSize - kTagSize;
    std::vector<uint8_t> plain(body);
    std::array<uint8_t, kTagSize> tag;
    std::memcpy(tag.data(), ciphertext.data() + kNonceSize + body, kTagSize);
    std::unique_ptr<EVP_CIPHER_CTX, EcDeleter> ctx(EVP_CIPHER_CTX_new());
    int len = 0;
    EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(),
                       ciphertext.data());
    EVP_DecryptUpdate(ctx.get(), nullptr, &len, associated.data(),
                      static_cast<int>(associated.size()));
    EVP_DecryptUpdate(ctx.get(), plain.data(), &len,
                      ciphertext.data() + kNonceSize, static_cast<int>(body));
    EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, kTagSize, tag.data());
    if (EVP_DecryptFinal_ex(ctx.get(), plain.data() + len, &len) != 1) {
      return std::nullopt;
    }
    return plain;
  }

 private:
  std::unique_ptr<EC_GROUP, EcDeleter> group_;
};

struct PkeyDeleter {
  void operator()(EVP_PKEY* k) const { EVP_PKEY_free(k); }
  void operator()(EVP_MD_CTX* c) const { EVP_MD_CTX_free(c); }
};

}  // namespace

std::array<uint8_t, 32> Sha256(std::span<const uint8_t> data) {
  std::array<uint8_t, 32> out;
  SHA256(data.data(), data.size(), out.data());
  return out;
}

std::unique_ptr<CryptoSuite> MakeTestCrypto() {
  return std::make_unique<TestCrypto>();
}

std::unique_ptr<CryptoSuite> MakeStandardCrypto() {
  return std::make_unique<StandardCrypto>();
}

absl::StatusOr<std::unique_ptr<CryptoSuite>> MakeCryptoSuite(
    std::string_view name) {
  if (name == "test") return MakeTestCrypto();
  if (name == "standard") return MakeStandardCrypto();
  return MakeError(
      ErrorKind::kConfigError,
      absl::StrCat("unknown crypto suite '",
                   absl::string_view(name.data(), name.size()), "'"));
}

Signer Signer::FromSeed(const std::array<uint8_t, 32>& seed) {
  Signer s;
  s.seed_ = seed;
  std::unique_ptr<EVP_PKEY, PkeyDeleter> key(EVP_PKEY_new_raw_private_key(
      EVP_PKEY_ED25519, nullptr, seed.data(), seed.size()));
  size_t len = 32;
  s.public_key_.resize(len);
  EVP_PKEY_get_raw_public_key(key.get(), s.public_key_.data(), &len);
  return s;
}

Signer Signer::Generate(Prng& prng) {
  std::array<uint8_t, 32> seed;
  prng.Fill(seed.data(), seed.size());
  return FromSeed(seed);
}

std::vector<uint8_t> Signer::Sign(std::span<const uint8_t> message) const {
  std::unique_ptr<EVP_PKEY, PkeyDeleter> key(EVP_PKEY_new_raw_private_key(
      EVP_PKEY_ED25519, nullptr, seed_.data(), seed_.size()));
  std::unique_ptr<EVP_MD_CTX, PkeyDeleter> ctx(EVP_MD_CTX_new());
  EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr, key.get());
  size_t len = 64;
  std::vector<uint8_t> sig(len);
  EVP_DigestSign(ctx.get(), sig.data(), &len, message.data(), message.size());
  sig.resize(len);
  return sig;
}

bool VerifySignature(std::span<const uint8_t> public_key,
                     std::span<const uint8_t> message,
                     std::span<const uint8_t> signature) {
  if (public_key.size() != 32 || signature.size() != 64) return false;
  std::unique_ptr<EVP_PKEY, PkeyDeleter> key(EVP_PKEY_new_raw_public_key(
      EVP_PKEY_ED25519, nullptr, public_key.data(), public_key.size()));
  if (key == nullptr) return false;
  std::unique_ptr<EVP_MD_CTX, PkeyDeleter> ctx(EVP_MD_CTX_new());
  if (EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr, key.get()) !=
      1) {
    return false;
  }
  return EVP_DigestVerify(ctx.get(), signature.data(), signature.size(),
                          message.data(), message.size()) == 1;
}

}  // namespace eiffel
