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

#ifndef EIFFEL_STATUS_H_
#define EIFFEL_STATUS_H_

#include <optional>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace eiffel {

// Library-specific failure kinds. Each maps onto an absl status code and is
// also attached as a payload so callers can tell e.g. a DecodeFailure apart
// from other DataLoss errors.
enum class ErrorKind {
  kDuplicateAbscissa,
  kBadThreshold,
  kInsufficientShares,
  kDecodeFailure,
  kBadArity,
  kSlackOverflow,
  kBadDimension,
  kBadKey,
  kNotApplicable,
  kConfigError,
  kBadEncoding,
  kRejected,
};

absl::Status MakeError(ErrorKind kind, std::string_view message);

// Returns the kind attached by MakeError, if any.
std::optional<ErrorKind> GetErrorKind(const absl::Status& status);

bool IsErrorKind(const absl::Status& status, ErrorKind kind);

std::string_view ErrorKindName(ErrorKind kind);

}  // namespace eiffel

#define EIFFEL_STATUS_CONCAT_INNER_(a, b) a##b
#define EIFFEL_STATUS_CONCAT_(a, b) EIFFEL_STATUS_CONCAT_INNER_(a, b)

#define EIFFEL_RETURN_IF_ERROR(expr)      \
  do {                                    \
    absl::Status eiffel_status_ = (expr); \
    if (!eiffel_status_.ok()) {           \
      return eiffel_status_;              \
    }                                     \
  } while (0)

#define EIFFEL_ASSIGN_OR_RETURN(lhs, expr) \
  EIFFEL_ASSIGN_OR_RETURN_IMPL_(           \
      EIFFEL_STATUS_CONCAT_(eiffel_statusor_, __LINE__), lhs, expr)

#define EIFFEL_ASSIGN_OR_RETURN_IMPL_(statusor, lhs, expr) \
  auto statusor = (expr);                                  \
  if (!statusor.ok()) {                                    \
    return statusor.status();                              \
  }                                                        \
  lhs = std::move(statusor).value()

#endif  // EIFFEL_STATUS_H_
