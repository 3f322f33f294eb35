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

#include "eiffel/bulletin.h"

#include <algorithm>
#include <mutex>

#include "absl/strings/str_cat.h"
#include "eiffel/encoding.h"
#include "eiffel/status.h"

namespace eiffel {
namespace {

std::string AuthorTagKey(PartyId author, std::string_view tag) {
  return absl::StrCat(author, ":", absl::string_view(tag.data(), tag.size()));
}

absl::string_view Sv(std::string_view s) {
  return absl::string_view(s.data(), s.size());
}

}  // namespace

std::vector<uint8_t> EntrySigningBytes(uint64_t seq, PartyId author,
                                       std::string_view round_tag,
                                       std::span<const uint8_t> payload) {
  ByteWriter w;
  w.PutString("eiffel-entry");
  w.PutU64(seq);
  w.PutU32(author);
  w.PutString(round_tag);
  w.PutBytes(payload);
  return w.Take();
}

std::vector<uint8_t> RegistrationMessage(PartyId id) {
  ByteWriter w;
  w.PutString("eiffel-register");
  w.PutU32(id);
  return w.Take();
}

std::string_view PhaseOf(std::string_view round_tag) {
  size_t slash = round_tag.find('/');
  return slash == std::string_view::npos ? round_tag
                                         : round_tag.substr(0, slash);
}

std::string SealTag(std::string_view phase) {
  return absl::StrCat("seal/", Sv(phase));
}

absl::Status Bulletin::Register(PartyId id, std::span<const uint8_t> public_key,
                                std::span<const uint8_t> proof) {
  if (!VerifySignature(public_key, RegistrationMessage(id), proof)) {
    return MakeError(
        ErrorKind::kRejected,
        absl::StrCat("Bulletin::Register: bad proof for party ", id));
  }
  std::unique_lock lock(mu_);
  if (keys_.contains(id)) {
    return MakeError(
        ErrorKind::kRejected,
        absl::StrCat("Bulletin::Register: party ", id, " already registered"));
  }
  keys_.emplace(id, std::vector<uint8_t>(public_key.begin(), public_key.end()));
  return absl::OkStatus();
}

absl::StatusOr<uint64_t> Bulletin::Append(BulletinEntry entry) {
  std::unique_lock lock(mu_);
  if (entry.seq != log_.size()) {
    return MakeError(ErrorKind::kRejected,
                     absl::StrCat("Bulletin::Append: stale seq ", entry.seq,
                                  ", next is ", log_.size()));
  }
  auto key = keys_.find(entry.author);
  if (key == keys_.end()) {
    return MakeError(
        ErrorKind::kRejected,
        absl::StrCat("Bulletin::Append: unregistered author ", entry.author));
  }
  if (!VerifySignature(key->second,
                       EntrySigningBytes(entry.seq, entry.author,
                                         entry.round_tag, entry.payload),
                       entry.signature)) {
    return MakeError(
        ErrorKind::kRejected,
        absl::StrCat("Bulletin::Append: bad signature from ", entry.author));
  }
  std::string_view phase = PhaseOf(entry.round_tag);
  if (phase == "seal") {
    if (entry.author != kServerId) {
      return MakeError(ErrorKind::kRejected,
                       "Bulletin::Append: only the server may seal");
    }
    phase = std::string_view(entry.round_tag).substr(5);
  }
  if (std::find(sealed_.begin(), sealed_.end(), phase) != sealed_.end()) {
    return MakeError(
        ErrorKind::kRejected,
        absl::StrCat("Bulletin::Append: phase '", Sv(phase), "' is sealed"));
  }
  std::string at = AuthorTagKey(entry.author, entry.round_tag);
  if (by_author_tag_.contains(at)) {
    return MakeError(ErrorKind::kRejected,
                     absl::StrCat("Bulletin::Append: duplicate entry ", at));
  }
  if (PhaseOf(entry.round_tag) == "seal") sealed_.emplace_back(phase);
  uint64_t seq = entry.seq;
  by_author_tag_.emplace(std::move(at), seq);
  log_.push_back(std::move(entry));
  return seq;
}

absl::StatusOr<uint64_t> Bulletin::Post(const Signer& signer, PartyId author,
                                        std::string_view round_tag,
                                        std::vector<uint8_t> payload) {
  while (true) {
    uint64_t next = size();
    BulletinEntry entry;
    entry.seq = next;
    entry.author = author;
    entry.round_tag = std::string(round_tag);
    entry.signature =
        signer.Sign(EntrySigningBytes(entry.seq, author, round_tag, payload));
    entry.payload = payload;
    absl::StatusOr<uint64_t> seq = Append(std::move(entry));
    if (seq.ok() || size() == next) return seq;
  }
}

absl::StatusOr<uint64_t> Bulletin::Seal(const Signer& server,
                                        std::string_view phase) {
  return Post(server, kServerId, SealTag(phase), {});
}

bool Bulletin::IsSealed(std::string_view phase) const {
  std::shared_lock lock(mu_);
  return std::find(sealed_.begin(), sealed_.end(), phase) != sealed_.end();
}

std::vector<BulletinEntry> Bulletin::Read(std::string_view round_tag) const {
  std::shared_lock lock(mu_);
  std::vector<BulletinEntry> out;
  for (const BulletinEntry& e : log_) {
    if (e.round_tag == round_tag) out.push_back(e);
  }
  return out;
}

std::vector<BulletinEntry> Bulletin::ReadByAuthor(PartyId author) const {
  std::shared_lock lock(mu_);
  std::vector<BulletinEntry> out;
  for (const BulletinEntry& e : log_) {
    if (e.author == author) out.push_back(e);
  }
  return out;
}

std::optional<BulletinEntry> Bulletin::Find(PartyId author,
                                            std::string_view round_tag) const {
  std::shared_lock lock(mu_);
  auto it = by_author_tag_.find(AuthorTagKey(author, round_tag));
  if (it == by_author_tag_.end()) return std::nullopt;
  return log_[it->second];
}

std::vector<BulletinEntry> Bulletin::Snapshot() const {
  std::shared_lock lock(mu_);
  return log_;
}

uint64_t Bulletin::size() const {
  std::shared_lock lock(mu_);
  return log_.size();
}

std::optional<std::vector<uint8_t>> Bulletin::PublicKey(PartyId id) const {
  std::shared_lock lock(mu_);
  auto it = keys_.find(id);
  if (it == keys_.end()) return std::nullopt;
  return it->second;
}

std::string Bulletin::ExportTranscript() const {
  std::shared_lock lock(mu_);
  std::string out;
  for (const BulletinEntry& e : log_) {
    absl::StrAppend(&out, HexEncode(EncodeEntry(e)), "\n");
  }
  return out;
}

std::vector<uint8_t> EncodeEntry(const BulletinEntry& entry) {
  ByteWriter w;
  w.PutU8(kSchemaVersion);
  w.PutU64(entry.seq);
  w.PutU32(entry.author);
  w.PutString(entry.round_tag);
  w.PutBytes(entry.payload);
  w.PutBytes(entry.signature);
  return w.Take();
}

absl::StatusOr<BulletinEntry> DecodeEntry(std::span<const uint8_t> data) {
  ByteReader r(data);
  EIFFEL_ASSIGN_OR_RETURN(uint8_t version, r.U8());
  if (version != kSchemaVersion) {
    return MakeError(
        ErrorKind::kBadEncoding,
        absl::StrCat("DecodeEntry: unknown schema version ", version));
  }
  BulletinEntry e;
  EIFFEL_ASSIGN_OR_RETURN(e.seq, r.U64());
  EIFFEL_ASSIGN_OR_RETURN(e.author, r.U32());
  EIFFEL_ASSIGN_OR_RETURN(e.round_tag, r.String());
  EIFFEL_ASSIGN_OR_RETURN(e.payload, r.Bytes());
  EIFFEL_ASSIGN_OR_RETURN(e.signature, r.Bytes());
  EIFFEL_RETURN_IF_ERROR(r.ExpectDone());
  return e;
}

absl::StatusOr<std::vector<BulletinEntry>> ParseTranscript(
    std::string_view text) {
  std::vector<BulletinEntry> out;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty()) continue;
    EIFFEL_ASSIGN_OR_RETURN(std::vector<uint8_t> bytes, HexDecode(line));
    EIFFEL_ASSIGN_OR_RETURN(BulletinEntry e, DecodeEntry(bytes));
    if (e.seq != out.size()) {
      return MakeError(ErrorKind::kBadEncoding,
                       absl::StrCat("ParseTranscript: entry ", out.size(),
                                    " has seq ", e.seq));
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace eiffel
