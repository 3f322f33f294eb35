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

#ifndef EIFFEL_CRYPTO_H_
#define EIFFEL_CRYPTO_H_

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "eiffel/prng.h"

namespace eiffel {

using SharedKey = std::array<uint8_t, 32>;

struct KeyPair {
  std::vector<uint8_t> public_key;
  std::vector<uint8_t> secret_key;
};

// Key agreement plus authenticated encryption for the pairwise channels.
// Randomness comes from the caller's stream so simulations replay exactly.
class CryptoSuite {
 public:
  virtual ~CryptoSuite() = default;

  virtual std::string_view name() const = 0;
  virtual KeyPair GenerateKeyPair(Prng& prng) const = 0;
  // Fails with BadKey on a malformed peer key.
  virtual absl::StatusOr<SharedKey> Agree(
      std::span<const uint8_t> secret_key,
      std::span<const uint8_t> peer_public_key) const = 0;
  virtual std::vector<uint8_t> Encrypt(const SharedKey& key,
                                       std::span<const uint8_t> plaintext,
                                       std::span<const uint8_t> associated,
                                       Prng& prng) const = 0;
  // nullopt when authentication fails.
  virtual std::optional<std::vector<uint8_t>> Decrypt(
      const SharedKey& key, std::span<const uint8_t> ciphertext,
      std::span<const uint8_t> associated) const = 0;
};

// Toy Diffie-Hellman over Z*_{2^61-1} with an HMAC-SHA256 stream cipher. Fast
// and deterministic; not secure.
std::unique_ptr<CryptoSuite> MakeTestCrypto();

// ECDH on P-256 and AES-256-GCM.
std::unique_ptr<CryptoSuite> MakeStandardCrypto();

absl::StatusOr<std::unique_ptr<CryptoSuite>> MakeCryptoSuite(
    std::string_view name);

// Ed25519 signing key derived from a 32-byte seed.
class Signer {
 public:
  static Signer FromSeed(const std::array<uint8_t, 32>& seed);
  static Signer Generate(Prng& prng);

  const std::vector<uint8_t>& public_key() const { return public_key_; }
  std::vector<uint8_t> Sign(std::span<const uint8_t> message) const;

 private:
  std::array<uint8_t, 32> seed_;
  std::vector<uint8_t> public_key_;
};

bool VerifySignature(std::span<const uint8_t> public_key,
                     std::span<const uint8_t> message,
                     std::span<const uint8_t> signature);

std::array<uint8_t, 32> Sha256(std::span<const uint8_t> data);

}  // namespace eiffel

#endif  // EIFFEL_CRYPTO_H_
