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

#include "eiffel/encoding.h"

#include "absl/strings/str_cat.h"
#include "eiffel/status.h"

namespace eiffel {
namespace {

// Upper bound on decoded lengths, to fail fast on corrupted prefixes.
constexpr uint32_t kMaxLength = 1u << 30;

absl::Status Bad(std::string_view what) {
  return MakeError(
      ErrorKind::kBadEncoding,
      absl::StrCat("decode: ", absl::string_view(what.data(), what.size())));
}

absl::Status CheckVersion(ByteReader& r) {
  EIFFEL_ASSIGN_OR_RETURN(uint8_t version, r.U8());
  if (version != kSchemaVersion) return Bad("unsupported schema version");
  return absl::OkStatus();
}

}  // namespace

void ByteWriter::PutU32(uint32_t x) {
  for (int i = 0; i < 4; ++i)
    bytes_.push_back(static_cast<uint8_t>(x >> (8 * i)));
}

void ByteWriter::PutU64(uint64_t x) {
  for (int i = 0; i < 8; ++i)
    bytes_.push_back(static_cast<uint8_t>(x >> (8 * i)));
}

void ByteWriter::PutBytes(std::span<const uint8_t> data) {
  PutU32(static_cast<uint32_t>(data.size()));
  bytes_.insert(bytes_.end(), data.begin(), data.end());
}

void ByteWriter::PutString(std::string_view s) {
  PutBytes({reinterpret_cast<const uint8_t*>(s.data()), s.size()});
}

void ByteWriter::PutFeVector(std::span<const Fe> v) {
  PutU32(static_cast<uint32_t>(v.size()));
  for (Fe x : v) PutFe(x);
}

absl::Status ByteReader::Need(size_t k) const {
  if (data_.size() - pos_ < k) return Bad("truncated input");
  return absl::OkStatus();
}

absl::StatusOr<uint8_t> ByteReader::U8() {
  EIFFEL_RETURN_IF_ERROR(Need(1));
  return data_[pos_++];
}

absl::StatusOr<uint32_t> ByteReader::U32() {
  EIFFEL_RETURN_IF_ERROR(Need(4));
  uint32_t x = 0;
  for (int i = 0; i < 4; ++i) x |= uint32_t{data_[pos_++]} << (8 * i);
  return x;
}

absl::StatusOr<uint64_t> ByteReader::U64() {
  EIFFEL_RETURN_IF_ERROR(Need(8));
  uint64_t x = 0;
  for (int i = 0; i < 8; ++i) x |= uint64_t{data_[pos_++]} << (8 * i);
  return x;
}

absl::StatusOr<Fe> ByteReader::ReadFe(const PrimeField& field) {
  EIFFEL_ASSIGN_OR_RETURN(uint64_t x, U64());
  if (x >= field.modulus()) return Bad("field element out of range");
  return Fe{x};
}

absl::StatusOr<std::vector<uint8_t>> ByteReader::Bytes() {
  EIFFEL_ASSIGN_OR_RETURN(uint32_t len, U32());
  if (len > kMaxLength) return Bad("length prefix too large");
  EIFFEL_RETURN_IF_ERROR(Need(len));
  std::vector<uint8_t> out(data_.begin() + pos_, data_.begin() + pos_ + len);
  pos_ += len;
  return out;
}

absl::StatusOr<std::string> ByteReader::String() {
  EIFFEL_ASSIGN_OR_RETURN(std::vector<uint8_t> b, Bytes());
  return std::string(b.begin(), b.end());
}

absl::StatusOr<std::vector<Fe>> ByteReader::FeVector(const PrimeField& field) {
  EIFFEL_ASSIGN_OR_RETURN(uint32_t len, U32());
  if (len > kMaxLength / 8) return Bad("length prefix too large");
  EIFFEL_RETURN_IF_ERROR(Need(size_t{len} * 8));
  std::vector<Fe> out(len);
  for (Fe& x : out) {
    EIFFEL_ASSIGN_OR_RETURN(x, ReadFe(field));
  }
  return out;
}

absl::Status ByteReader::ExpectDone() const {
  if (!done()) return Bad("trailing bytes");
  return absl::OkStatus();
}

std::string HexEncode(std::span<const uint8_t> data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * data.size());
  for (uint8_t b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 15]);
  }
  return out;
}

absl::StatusOr<std::vector<uint8_t>> HexDecode(std::string_view hex) {
  if (hex.size() % 2 != 0) return Bad("odd-length hex");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  std::vector<uint8_t> out(hex.size() / 2);
  for (size_t i = 0; i < out.size(); ++i) {
    int hi = nibble(hex[2 * i]), lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) return Bad("invalid hex digit");
    out[i] = static_cast<uint8_t>(hi << 4 | lo);
  }
  return out;
}

void EncodeCheckString(ByteWriter& w, const CheckString& check) {
  w.PutU32(static_cast<uint32_t>(check.threshold));
  w.PutBytes(check.commitments);
}

absl::StatusOr<CheckString> DecodeCheckString(ByteReader& r) {
  CheckString check;
  EIFFEL_ASSIGN_OR_RETURN(uint32_t t, r.U32());
  check.threshold = t;
  EIFFEL_ASSIGN_OR_RETURN(check.commitments, r.Bytes());
  if (t == 0 || check.commitments.size() % t != 0) {
    return Bad("check string size is not a multiple of the threshold");
  }
  return check;
}

std::vector<uint8_t> SerializeShareSet(const ShareSet& set) {
  ByteWriter w;
  w.PutU8(kSchemaVersion);
  w.PutU32(static_cast<uint32_t>(set.threshold));
  w.PutU32(static_cast<uint32_t>(set.points.size()));
  for (const Point& pt : set.points) {
    w.PutFe(pt.x);
    w.PutFe(pt.y);
  }
  return w.Take();
}

absl::StatusOr<ShareSet> DeserializeShareSet(const PrimeField& field,
                                             std::span<const uint8_t> data) {
  ByteReader r(data);
  EIFFEL_RETURN_IF_ERROR(CheckVersion(r));
  ShareSet set;
  EIFFEL_ASSIGN_OR_RETURN(uint32_t t, r.U32());
  EIFFEL_ASSIGN_OR_RETURN(uint32_t count, r.U32());
  if (count > kMaxLength / 16) return Bad("share count too large");
  set.threshold = t;
  for (uint32_t i = 0; i < count; ++i) {
    Point pt;
    EIFFEL_ASSIGN_OR_RETURN(pt.x, r.ReadFe(field));
    EIFFEL_ASSIGN_OR_RETURN(pt.y, r.ReadFe(field));
    set.points.push_back(pt);
  }
  EIFFEL_RETURN_IF_ERROR(r.ExpectDone());
  return set;
}

std::vector<uint8_t> SerializeCheckString(const CheckString& check) {
  ByteWriter w;
  w.PutU8(kSchemaVersion);
  EncodeCheckString(w, check);
  return w.Take();
}

absl::StatusOr<CheckString> DeserializeCheckString(
    std::span<const uint8_t> data) {
  ByteReader r(data);
  EIFFEL_RETURN_IF_ERROR(CheckVersion(r));
  EIFFEL_ASSIGN_OR_RETURN(CheckString check, DecodeCheckString(r));
  EIFFEL_RETURN_IF_ERROR(r.ExpectDone());
  return check;
}

}  // namespace eiffel
