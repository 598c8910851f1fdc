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

#ifndef SENSEDP_STATUS_H_
#define SENSEDP_STATUS_H_

#include <string>
#include <string_view>

#include "absl/status/status.h"

namespace sensedp {

// Error categories surfaced by the library. Every non-OK status produced by
// sensedp carries a message of the form "<Kind>: <detail>" so that callers
// (and the command line front-end) can recover the category.
enum class ErrorKind {
  kMalformedLine,
  kDimensionMismatch,
  kDuplicateToken,
  kEmptyFile,
  kInvalidVector,
  kUnknownToken,
  kEmptyStore,
  kSampleTooLarge,
  kIndexOutOfRange,
  kUnknownWord,
  kMissingInventory,
  kMalformedInventory,
  kEmptyInput,
  kNoFeasibleBudget,
  kLengthMismatch,
  kDegenerateInput,
  kEmptyDatasetAfterFiltering,
  kInvalidArgument,
  kIoError,
};

std::string_view ErrorKindName(ErrorKind kind);

absl::Status MakeError(ErrorKind kind, std::string_view detail);

// Returns the "<Kind>" prefix of a status produced by MakeError, or the
// canonical absl code name for foreign statuses. Empty for OK.
std::string ErrorKindOf(const absl::Status& status);

// Returns the detail portion of the message (text after "<Kind>: ").
std::string ErrorDetailOf(const absl::Status& status);

}  // namespace sensedp

#define SENSEDP_RETURN_IF_ERROR(expr)          \
  do {                                         \
    if (absl::Status _st = (expr); !_st.ok()) { \
      return _st;                              \
    }                                          \
  } while (false)

#define SENSEDP_CONCAT_INNER_(a, b) a##b
#define SENSEDP_CONCAT_(a, b) SENSEDP_CONCAT_INNER_(a, b)

#define SENSEDP_ASSIGN_OR_RETURN(lhs, expr) \
  SENSEDP_ASSIGN_OR_RETURN_IMPL_(SENSEDP_CONCAT_(_statusor_, __LINE__), lhs, expr)

#define SENSEDP_ASSIGN_OR_RETURN_IMPL_(statusor, lhs, expr) \
  auto statusor = (expr);                                   \
  if (!statusor.ok()) {                                     \
    return std::move(statusor).status();                    \
  }                                                         \
  lhs = *std::move(statusor)

#endif  // SENSEDP_STATUS_H_
