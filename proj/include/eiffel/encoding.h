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

#ifndef EIFFEL_ENCODING_H_
#define EIFFEL_ENCODING_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "eiffel/field.h"
#include "eiffel/sharing.h"

namespace eiffel {

inline constexpr uint8_t kSchemaVersion = 1;

// Little-endian integers; field elements as 8 bytes; byte strings and vectors
// carry a 32-bit length prefix.
class ByteWriter {
 public:
  void PutU8(uint8_t x) { bytes_.push_back(x); }
  void PutU32(uint32_t x);
  void PutU64(uint64_t x);
  void PutFe(Fe x) { PutU64(x.v); }
  void PutBytes(std::span<const uint8_t> data);
  void PutString(std::string_view s);
  void PutFeVector(std::span<const Fe> v);

  const std::vector<uint8_t>& bytes() const { return bytes_; }
  std::vector<uint8_t> Take() { return std::move(bytes_); }

 private:
  std::vector<uint8_t> bytes_;
};

// Reads what ByteWriter wrote. All failures are BadEncoding.
class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> data) : data_(data) {}

  absl::StatusOr<uint8_t> U8();
  absl::StatusOr<uint32_t> U32();
  absl::StatusOr<uint64_t> U64();
  // Rejects non-canonical values >= p.
  absl::StatusOr<Fe> ReadFe(const PrimeField& field);
  absl::StatusOr<std::vector<uint8_t>> Bytes();
  absl::StatusOr<std::string> String();
  absl::StatusOr<std::vector<Fe>> FeVector(const PrimeField& field);

  bool done() const { return pos_ == data_.size(); }
  absl::Status ExpectDone() const;

 private:
  absl::Status Need(size_t k) const;

  std::span<const uint8_t> data_;
  size_t pos_ = 0;
};

std::string HexEncode(std::span<const uint8_t> data);
absl::StatusOr<std::vector<uint8_t>> HexDecode(std::string_view hex);

void EncodeCheckString(ByteWriter& w, const CheckString& check);
absl::StatusOr<CheckString> DecodeCheckString(ByteReader& r);

// Versioned standalone encodings.
std::vector<uint8_t> SerializeShareSet(const ShareSet& set);
absl::StatusOr<ShareSet> DeserializeShareSet(const PrimeField& field,
                                             std::span<const uint8_t> data);
std::vector<uint8_t> SerializeCheckString(const CheckString& check);
absl::StatusOr<CheckString> DeserializeCheckString(
    std::span<const uint8_t> data);

}  // namespace eiffel

#endif  // EIFFEL_ENCODING_H_
