// Copyright 2026 The sensedp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sensedp/status.h"

#include <string>
#include "sensedp/strings.h"


namespace sensedp {
namespace {

absl::StatusCode CodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUnknownToken:
    case ErrorKind::kUnknownWord:
      return absl::StatusCode::kNotFound;
    case ErrorKind::kIndexOutOfRange:
      return absl::StatusCode::kOutOfRange;
    case ErrorKind::kNoFeasibleBudget:
    case ErrorKind::kEmptyDatasetAfterFiltering:
      return absl::StatusCode::kFailedPrecondition;
    case ErrorKind::kIoError:
      return absl::StatusCode::kUnavailable;
    default:
      return absl::StatusCode::kInvalidArgument;
  }
}

}  // namespace

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kMalformedLine:
      return "MalformedLine";
    case ErrorKind::kDimensionMismatch:
      return "DimensionMismatch";
    case ErrorKind::kDuplicateToken:
      return "DuplicateToken";
    case ErrorKind::kEmptyFile:
      return "EmptyFile";
    case ErrorKind::kInvalidVector:
      return "InvalidVector";
    case ErrorKind::kUnknownToken:
      return "UnknownToken";
    case ErrorKind::kEmptyStore:
      return "EmptyStore";
    case ErrorKind::kSampleTooLarge:
      return "SampleTooLarge";
    case ErrorKind::kIndexOutOfRange:
      return "IndexOutOfRange";
    case ErrorKind::kUnknownWord:
      return "UnknownWord";
    case ErrorKind::kMissingInventory:
      return "MissingInventory";
    case ErrorKind::kMalformedInventory:
      return "MalformedInventory";
    case ErrorKind::kEmptyInput:
      return "EmptyInput";
    case ErrorKind::kNoFeasibleBudget:
      return "NoFeasibleBudget";
    case ErrorKind::kLengthMismatch:
      return "LengthMismatch";
    case ErrorKind::kDegenerateInput:
      return "DegenerateInput";
    case ErrorKind::kEmptyDatasetAfterFiltering:
      return "EmptyDatasetAfterFiltering";
    case ErrorKind::kInvalidArgument:
      return "InvalidArgument";
    case ErrorKind::kIoError:
      return "IoError";
  }
  return "Unknown";
}

absl::Status MakeError(ErrorKind kind, std::string_view detail) {
  return absl::Status(CodeFor(kind),
                      StrCat(ErrorKindName(kind), ": ", detail));
}

std::string ErrorKindOf(const absl::Status& status) {
  if (status.ok()) return "";
  const std::string message(status.message());
  const size_t colon = message.find(": ");
  if (colon != std::string::npos && colon > 0 &&
      message.substr(0, colon).find(' ') == std::string::npos) {
    return std::string(message.substr(0, colon));
  }
  return absl::StatusCodeToString(status.code());
}

std::string ErrorDetailOf(const absl::Status& status) {
  const std::string message(status.message());
  const size_t colon = message.find(": ");
  if (colon == std::string::npos) return std::string(message);
  return std::string(message.substr(colon + 2));
}

}  // namespace sensedp
