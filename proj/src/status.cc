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

#include "privagg/status.h"

#include <array>
#include <string>

#include "absl/strings/str_cat.h"

namespace privagg {
namespace {

constexpr char kPayloadUrl[] = "type.privagg/error_kind";

struct KindInfo {
  ErrorKind kind;
  std::string_view name;
  absl::StatusCode code;
};

constexpr std::array kKinds = {
    KindInfo{ErrorKind::kNone, "None", absl::StatusCode::kOk},
    KindInfo{ErrorKind::kZeroInverse, "ZeroInverse",
             absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kDuplicateDomainPoint, "DuplicateDomainPoint",
             absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kLengthMismatch, "LengthMismatch",
             absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kTooFewServers, "TooFewServers",
             absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kMissingShare, "MissingShare",
             absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kArityMismatch, "ArityMismatch",
             absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kInvalidInput, "InvalidInput",
             absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kRotationExhausted, "RotationExhausted",
             absl::StatusCode::kFailedPrecondition},
    KindInfo{ErrorKind::kBadTripleProof, "BadTripleProof",
             absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kMissingRound, "MissingRound",
             absl::StatusCode::kUnavailable},
    KindInfo{ErrorKind::kDomainError, "DomainError",
             absl::StatusCode::kOutOfRange},
    KindInfo{ErrorKind::kOverflowRisk, "OverflowRisk",
             absl::StatusCode::kOutOfRange},
    KindInfo{ErrorKind::kNoMajority, "NoMajority",
             absl::StatusCode::kFailedPrecondition},
    KindInfo{ErrorKind::kSingularSystem, "SingularSystem",
             absl::StatusCode::kFailedPrecondition},
    KindInfo{ErrorKind::kEmptyAggregate, "EmptyAggregate",
             absl::StatusCode::kFailedPrecondition},
    KindInfo{ErrorKind::kTimeout, "Timeout",
             absl::StatusCode::kDeadlineExceeded},
    KindInfo{ErrorKind::kMalformedShare, "MalformedShare",
             absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kBatchTooSmall, "BatchTooSmall",
             absl::StatusCode::kFailedPrecondition},
    KindInfo{ErrorKind::kCountMismatch, "CountMismatch",
             absl::StatusCode::kInternal},
    KindInfo{ErrorKind::kTruncated, "Truncated", absl::StatusCode::kDataLoss},
    KindInfo{ErrorKind::kUnknownType, "UnknownType",
             absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kLengthOverflow, "LengthOverflow",
             absl::StatusCode::kResourceExhausted},
    KindInfo{ErrorKind::kConnectionClosed, "ConnectionClosed",
             absl::StatusCode::kUnavailable},
    KindInfo{ErrorKind::kBadMac, "BadMac", absl::StatusCode::kUnauthenticated},
    KindInfo{ErrorKind::kConfigError, "ConfigError",
             absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kSnapshotCorrupt, "SnapshotCorrupt",
             absl::StatusCode::kDataLoss},
    KindInfo{ErrorKind::kParseError, "ParseError",
             absl::StatusCode::kInvalidArgument},
    KindInfo{ErrorKind::kDuplicateNonce, "DuplicateNonce",
             absl::StatusCode::kAlreadyExists},
    KindInfo{ErrorKind::kBindError, "BindError",
             absl::StatusCode::kUnavailable},
};

const KindInfo& Lookup(ErrorKind kind) {
  for (const KindInfo& info : kKinds) {
    if (info.kind == kind) return info;
  }
  return kKinds[0];
}

}  // namespace

std::string_view ErrorKindName(ErrorKind kind) { return Lookup(kind).name; }

absl::Status Error(ErrorKind kind, std::string_view message) {
  const KindInfo& info = Lookup(kind);
  absl::Status status(info.code, absl::StrCat(std::string(info.name), ": ",
                                              std::string(message)));
  status.SetPayload(kPayloadUrl, absl::Cord(std::string(info.name)));
  return status;
}

ErrorKind GetErrorKind(const absl::Status& status) {
  if (status.ok()) return ErrorKind::kNone;
  auto payload = status.GetPayload(kPayloadUrl);
  if (!payload.has_value()) return ErrorKind::kNone;
  std::string name(*payload);
  for (const KindInfo& info : kKinds) {
    if (info.name == name) return info.kind;
  }
  return ErrorKind::kNone;
}

}  // namespace privagg
