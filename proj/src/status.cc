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

#include "eiffel/status.h"

#include <string>

#include "absl/strings/cord.h"

namespace eiffel {
namespace {

constexpr char kPayloadUrl[] = "eiffel/error-kind";

absl::StatusCode CodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInsufficientShares:
    case ErrorKind::kNotApplicable:
      return absl::StatusCode::kFailedPrecondition;
    case ErrorKind::kDecodeFailure:
      return absl::StatusCode::kDataLoss;
    case ErrorKind::kSlackOverflow:
      return absl::StatusCode::kOutOfRange;
    case ErrorKind::kRejected:
      return absl::StatusCode::kPermissionDenied;
    default:
      return absl::StatusCode::kInvalidArgument;
  }
}

}  // namespace

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDuplicateAbscissa:
      return "DuplicateAbscissa";
    case ErrorKind::kBadThreshold:
      return "BadThreshold";
    case ErrorKind::kInsufficientShares:
      return "InsufficientShares";
    case ErrorKind::kDecodeFailure:
      return "DecodeFailure";
    case ErrorKind::kBadArity:
      return "BadArity";
    case ErrorKind::kSlackOverflow:
      return "SlackOverflow";
    case ErrorKind::kBadDimension:
      return "BadDimension";
    case ErrorKind::kBadKey:
      return "BadKey";
    case ErrorKind::kNotApplicable:
      return "NotApplicable";
    case ErrorKind::kConfigError:
      return "ConfigError";
    case ErrorKind::kBadEncoding:
      return "BadEncoding";
    case ErrorKind::kRejected:
      return "Rejected";
  }
  return "Unknown";
}

absl::Status MakeError(ErrorKind kind, std::string_view message) {
  absl::Status status(CodeFor(kind),
                      absl::string_view(message.data(), message.size()));
  status.SetPayload(kPayloadUrl,
                    absl::Cord(std::to_string(static_cast<int>(kind))));
  return status;
}

std::optional<ErrorKind> GetErrorKind(const absl::Status& status) {
  auto payload = status.GetPayload(kPayloadUrl);
  if (!payload.has_value()) return std::nullopt;
  return static_cast<ErrorKind>(std::stoi(std::string(*payload)));
}

bool IsErrorKind(const absl::Status& status, ErrorKind kind) {
  std::optional<ErrorKind> got = GetErrorKind(status);
  return got.has_value() && *got == kind;
}

}  // namespace eiffel
