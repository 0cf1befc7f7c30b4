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

// Annotation sessions over a view graph. Each session owns a working view
// that inherits from every sink of the loaded graph; edits go there, guarded
// by a version token so concurrent clients cannot overwrite each other.

#ifndef VEINTEX_SERVICE_H_
#define VEINTEX_SERVICE_H_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "json.hpp"
#include "veintex/centering.h"
#include "veintex/error.h"
#include "veintex/view_graph.h"

namespace veintex {

using Json = nlohmann::json;

inline constexpr const char* kWorkView = "WORK";

struct OpenRequest {
  // VXD markup, or plain text which is wrapped as <body><p>...</p></body>.
  std::string hub;
  std::string hub_id = "BD";
  struct View {
    std::string id;
    std::vector<std::string> parents;
    std::string payload;  // VXD
  };
  std::vector<View> views;
  // Also compute the derived analysis views before the working view.
  bool derive = false;

  static OpenRequest from_json(const Json& j);
};

struct EditResult {
  std::int64_t version = 0;
  std::vector<std::string> created;
  std::vector<std::string> modified;
  std::vector<std::string> deleted;

  Json to_json() const;
};

enum class AnalysisKind { kVeins, kCentering, kComparison };
std::optional<AnalysisKind> analysis_kind_from_name(std::string_view name);

class Session {
 public:
  Session(std::string id, ViewGraph graph, std::string active_view);

  const std::string& id() const { return id_; }
  std::int64_t version() const;
  const std::string& active_view() const { return active_; }
  std::vector<std::string> view_ids() const;

  // Serialized effective document of `view` (default: the active view).
  std::string view_text(const std::optional<std::string>& view = std::nullopt) const;

  // Throws StaleVersion when `version` is not current. A rejected edit
  // leaves the session unchanged.
  EditResult apply_edit(std::int64_t version, const Json& edit);

  // Side-effect free; throws PrerequisiteMissing.
  Json analysis(AnalysisKind kind, const ScoreTable& table = {}) const;

 private:
  EditResult apply_locked(const Json& edit);

  std::string id_;
  ViewGraph graph_;
  std::string active_;
  std::int64_t version_ = 0;
  mutable std::shared_mutex mu_;
};

class AnnotationService {
 public:
  std::shared_ptr<Session> open_session(const OpenRequest& request);
  // Registers a prepared graph (used by `serve` to preload documents).
  std::shared_ptr<Session> adopt(ViewGraph graph);
  std::shared_ptr<Session> session(const std::string& id) const;

 private:
  std::string next_id();

  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t counter_ = 0;
};

// Builds the working view over the sinks of `graph` and returns its id.
std::string add_work_view(ViewGraph& graph);

// HTTP status used for an error code.
int http_status(ErrorCode code);

}  // namespace veintex

#endif  // VEINTEX_SERVICE_H_
