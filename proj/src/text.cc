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

#include "veintex/text.h"

#include <algorithm>
#include <cctype>

#include "veintex/error.h"

namespace veintex {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedInput: return "MalformedInput";
    case ErrorCode::kUnknownTag: return "UnknownTag";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kCycleDetected: return "CycleDetected";
    case ErrorCode::kUnknownParent: return "UnknownParent";
    case ErrorCode::kUnknownView: return "UnknownView";
    case ErrorCode::kDuplicateViewId: return "DuplicateViewId";
    case ErrorCode::kUnifyConflict: return "UnifyConflict";
    case ErrorCode::kDanglingPatch: return "DanglingPatch";
    case ErrorCode::kInvalidAnchor: return "InvalidAnchor";
    case ErrorCode::kCannotDeleteRoot: return "CannotDeleteRoot";
    case ErrorCode::kHubImmutable: return "HubImmutable";
    case ErrorCode::kMultipleRoots: return "MultipleRoots";
    case ErrorCode::kNoRoot: return "NoRoot";
    case ErrorCode::kTargetReuse: return "TargetReuse";
    case ErrorCode::kNonBinaryLink: return "NonBinaryLink";
    case ErrorCode::kEmptyNuclei: return "EmptyNuclei";
    case ErrorCode::kNonContiguousSpan: return "NonContiguousSpan";
    case ErrorCode::kUnknownTarget: return "UnknownTarget";
    case ErrorCode::kSiteNotOpen: return "SiteNotOpen";
    case ErrorCode::kSpanMismatch: return "SpanMismatch";
    case ErrorCode::kBadEdge: return "BadEdge";
    case ErrorCode::kUnmappedRs: return "UnmappedRS";
    case ErrorCode::kTooFewUnits: return "TooFewUnits";
    case ErrorCode::kStaleVersion: return "StaleVersion";
    case ErrorCode::kPrerequisiteMissing: return "PrerequisiteMissing";
    case ErrorCode::kUnknownSession: return "UnknownSession";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kBindFailure: return "BindFailure";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

std::string fold_case(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

static bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool is_blank(std::string_view s) { return trim(s).empty(); }

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t j = i;
    while (j < s.size() && !is_space(s[j])) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

namespace utf8 {

static bool is_continuation(char c) {
  return (static_cast<unsigned char>(c) & 0xC0) == 0x80;
}

std::size_t length(std::string_view s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return !is_continuation(c); }));
}

std::size_t byte_offset(std::string_view s, std::size_t index) {
  std::size_t seen = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (is_continuation(s[i])) continue;
    if (seen == index) return i;
    ++seen;
  }
  return s.size();
}

std::string substr(std::string_view s, std::size_t start, std::size_t count) {
  std::size_t b = byte_offset(s, start);
  std::size_t e = byte_offset(s, start + count);
  return std::string(s.substr(b, e - b));
}

}  // namespace utf8
}  // namespace veintex
