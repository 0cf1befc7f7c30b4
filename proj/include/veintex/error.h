// Copyright 2026 The veintex Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VEINTEX_ERROR_H_
#define VEINTEX_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace veintex {

// Every failure raised by the library carries one of these codes so callers
// (CLI exit codes, HTTP status mapping) can dispatch without string matching.
enum class ErrorCode {
  // markup
  kMalformedInput,
  kUnknownTag,
  kDuplicateId,
  // view graph
  kCycleDetected,
  kUnknownParent,
  kUnknownView,
  kDuplicateViewId,
  kUnifyConflict,
  kDanglingPatch,
  kInvalidAnchor,
  kCannotDeleteRoot,
  kHubImmutable,
  // discourse tree
  kMultipleRoots,
  kNoRoot,
  kTargetReuse,
  kNonBinaryLink,
  kEmptyNuclei,
  kNonContiguousSpan,
  kUnknownTarget,
  kSiteNotOpen,
  kSpanMismatch,
  kBadEdge,
  // analysis
  kUnmappedRs,
  kTooFewUnits,
  // service and tools
  kStaleVersion,
  kPrerequisiteMissing,
  kUnknownSession,
  kInvalidArgument,
  kBindFailure,
  kIo,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const { return code_; }
  // Message without the code prefix.
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace veintex

#endif  // VEINTEX_ERROR_H_
