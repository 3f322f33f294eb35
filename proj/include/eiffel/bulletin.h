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

#ifndef EIFFEL_BULLETIN_H_
#define EIFFEL_BULLETIN_H_

#include <cstdint>
#include <map>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/statusor.h"
#include "eiffel/crypto.h"

namespace eiffel {

// Party 0 is the server; clients are 1..n and client i evaluates shares at i.
using PartyId = uint32_t;
inline constexpr PartyId kServerId = 0;

struct BulletinEntry {
  uint64_t seq = 0;
  PartyId author = 0;
  // "<phase>/<kind>", e.g. "r2/shares". Barrier entries use "seal/<phase>".
  std::string round_tag;
  std::vector<uint8_t> payload;
  std::vector<uint8_t> signature;

  friend bool operator==(const BulletinEntry&, const BulletinEntry&) = default;
};

// Bytes covered by the author's signature.
std::vector<uint8_t> EntrySigningBytes(uint64_t seq, PartyId author,
                                       std::string_view round_tag,
                                       std::span<const uint8_t> payload);

std::vector<uint8_t> RegistrationMessage(PartyId id);

std::string_view PhaseOf(std::string_view round_tag);
std::string SealTag(std::string_view phase);

// Signed append-only log. Appends are serialized; readers see a consistent
// prefix and may run concurrently with appends.
class Bulletin {
 public:
  // Binds id to a signing key. proof is the key's signature over
  // RegistrationMessage(id). Duplicate ids are Rejected.
  absl::Status Register(PartyId id, std::span<const uint8_t> public_key,
                        std::span<const uint8_t> proof);

  // entry.seq must equal the next sequence number. Rejected on a stale seq,
  // an unknown author, a bad signature, a second entry with the same
  // (author, round_tag), or an entry into a sealed phase.
  absl::StatusOr<uint64_t> Append(BulletinEntry entry);

  // Signs and appends, retrying if another writer took the sequence number.
  absl::StatusOr<uint64_t> Post(const Signer& signer, PartyId author,
                                std::string_view round_tag,
                                std::vector<uint8_t> payload);

  // Closes a phase; only the server may seal.
  absl::StatusOr<uint64_t> Seal(const Signer& server, std::string_view phase);
  bool IsSealed(std::string_view phase) const;

  std::vector<BulletinEntry> Read(std::string_view round_tag) const;
  std::vector<BulletinEntry> ReadByAuthor(PartyId author) const;
  std::optional<BulletinEntry> Find(PartyId author,
                                    std::string_view round_tag) const;
  std::vector<BulletinEntry> Snapshot() const;
  uint64_t size() const;
  std::optional<std::vector<uint8_t>> PublicKey(PartyId id) const;

  // One hex line per entry in canonical encoding.
  std::string ExportTranscript() const;

 private:
  mutable std::shared_mutex mu_;
  std::vector<BulletinEntry> log_;
  std::map<PartyId, std::vector<uint8_t>> keys_;
  absl::flat_hash_map<std::string, uint64_t> by_author_tag_;
  std::vector<std::string> sealed_;
};

std::vector<uint8_t> EncodeEntry(const BulletinEntry& entry);
absl::StatusOr<BulletinEntry> DecodeEntry(std::span<const uint8_t> data);
absl::StatusOr<std::vector<BulletinEntry>> ParseTranscript(
    std::string_view text);

}  // namespace eiffel

#endif  // EIFFEL_BULLETIN_H_
