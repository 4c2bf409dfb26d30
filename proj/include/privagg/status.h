/*
 * Copyright 2026 The privagg Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PRIVAGG_STATUS_H_
#define PRIVAGG_STATUS_H_

#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace privagg {

// Domain error kinds. Each maps onto a canonical absl code and is attached to
// the status as a payload so callers can branch on it without string matching.
enum class ErrorKind {
  kNone = 0,
  kZeroInverse,
  kDuplicateDomainPoint,
  kLengthMismatch,
  kTooFewServers,
  kMissingShare,
  kArityMismatch,
  kInvalidInput,
  kRotationExhausted,
  kBadTripleProof,
  kMissingRound,
  kDomainError,
  kOverflowRisk,
  kNoMajority,
  kSingularSystem,
  kEmptyAggregate,
  kTimeout,
  kMalformedShare,
  kBatchTooSmall,
  kCountMismatch,
  kTruncated,
  kUnknownType,
  kLengthOverflow,
  kConnectionClosed,
  kBadMac,
  kConfigError,
  kSnapshotCorrupt,
  kParseError,
  kDuplicateNonce,
  kBindError,
};

std::string_view ErrorKindName(ErrorKind kind);

absl::Status Error(ErrorKind kind, std::string_view message);

// Returns kNone for OK statuses and for statuses not produced by Error().
ErrorKind GetErrorKind(const absl::Status& status);

template <typename T>
ErrorKind GetErrorKind(const absl::StatusOr<T>& status_or) {
  return GetErrorKind(status_or.status());
}

}  // namespace privagg

#define PRIVAGG_STATUS_CONCAT_INNER_(a, b) a##b
#define PRIVAGG_STATUS_CONCAT_(a, b) PRIVAGG_STATUS_CONCAT_INNER_(a, b)

#define PRIVAGG_RETURN_IF_ERROR(expr)        \
  do {                                       \
    ::absl::Status _privagg_status = (expr); \
    if (!_privagg_status.ok()) {             \
      return _privagg_status;                \
    }                                        \
  } while (0)

#define PRIVAGG_ASSIGN_OR_RETURN_IMPL_(tmp, lhs, expr) \
  auto tmp = (expr);                                   \
  if (!tmp.ok()) {                                     \
    return tmp.status();                               \
  }                                                    \
  lhs = std::move(tmp).value()

#define PRIVAGG_ASSIGN_OR_RETURN(lhs, expr) \
  PRIVAGG_ASSIGN_OR_RETURN_IMPL_(           \
      PRIVAGG_STATUS_CONCAT_(_privagg_statusor_, __LINE__), lhs, expr)

#endif  // PRIVAGG_STATUS_H_
