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

// Shared helpers for loading the committed fixtures.

#ifndef VEINTEX_TESTS_SUPPORT_FIXTURES_H_
#define VEINTEX_TESTS_SUPPORT_FIXTURES_H_

#include <filesystem>
#include <string>
#include <vector>

#include "veintex/error.h"
#include "veintex/markup.h"
#include "veintex/pipeline.h"
#include "veintex/view_graph.h"

namespace veintex::testing {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(VEINTEX_TEST_DATA) / name;
}

inline Document load_doc(const std::string& name) {
  return parse_document(read_file(data_path(name)));
}

// Hub plus U-VIEW, RS-VIEW, RL-VIEW and REL-VIEW.
inline std::vector<std::filesystem::path> goriot_manifests() {
  std::vector<std::filesystem::path> out;
  for (const char* n : {"u-view.vxv", "rs-view.vxv", "rl-view.vxv", "rel-view.vxv"}) {
    out.push_back(data_path(std::string("goriot/") + n));
  }
  return out;
}

inline ViewGraph goriot_graph() {
  return load_graph(data_path("goriot/bd.vxv"), goriot_manifests());
}

// Runs `f` and returns the error code it throws, or nullopt.
template <typename F>
std::optional<ErrorCode> error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace veintex::testing

#endif  // VEINTEX_TESTS_SUPPORT_FIXTURES_H_
