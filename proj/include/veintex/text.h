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

// Small string helpers shared by the modules. Character offsets everywhere in
// veintex count Unicode code points of UTF-8 text.

#ifndef VEINTEX_TEXT_H_
#define VEINTEX_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace veintex {

// ASCII case folding; ids and vocabulary names are ASCII.
std::string fold_case(std::string_view s);
bool iequals(std::string_view a, std::string_view b);

std::string_view trim(std::string_view s);
bool is_blank(std::string_view s);
std::vector<std::string> split_ws(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

namespace utf8 {

// Number of code points in `s`.
std::size_t length(std::string_view s);
// Byte offset of code point `index` (index == length(s) gives s.size()).
std::size_t byte_offset(std::string_view s, std::size_t index);
// Code-point substring [start, start + count).
std::string substr(std::string_view s, std::size_t start, std::size_t count);

}  // namespace utf8
}  // namespace veintex

#endif  // VEINTEX_TEXT_H_
