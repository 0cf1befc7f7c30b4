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

// Multi-view standoff annotation over a hub document.
//
// Every view other than the hub inherits from one or more parent views. When
// a view is created its parents' effective documents are unified (elements
// with the same id become one element) and the result is frozen: later edits
// to a parent never reach the child. A view then layers local edits on top
// of that frozen base:
//
//   - additions: new elements, anchored either to a character range of the
//     hub text (segmental markup) or to an existing element id (relational
//     markup),
//   - patches: attribute set/delete on any element it can see,
//   - tombstones: deletion of inherited elements.
//
// Nothing a view does is visible to its ancestors. The hub text itself is
// never changed; deleting a segmental element unwraps it.

#ifndef VEINTEX_VIEW_GRAPH_H_
#define VEINTEX_VIEW_GRAPH_H_

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "veintex/markup.h"

namespace veintex {

namespace detail {
struct Hub;
struct State;
}  // namespace detail

class Anchor {
 public:
  enum class Kind { kById, kByCharRange, kAtRoot };

  // Child of the element with this id (relational markup).
  static Anchor by_id(std::string id);
  // Wraps hub text [start, end), in code points, end exclusive.
  static Anchor by_char_range(std::size_t start, std::size_t end);
  // Appended at the end of <body> (top-level linkGrp).
  static Anchor at_root();

  Kind kind() const { return kind_; }
  const std::string& id() const { return id_; }
  std::size_t start() const { return start_; }
  std::size_t end() const { return end_; }

  friend bool operator==(const Anchor&, const Anchor&) = default;

 private:
  Kind kind_ = Kind::kAtRoot;
  std::string id_;
  std::size_t start_ = 0;
  std::size_t end_ = 0;
};

struct Addition {
  std::string key;  // case-folded id, or a synthetic "#view/n" key
  Element element;  // attributes only; text comes from the hub
  Anchor anchor;
};

struct Patch {
  std::string id;
  std::string name;
  std::optional<std::string> value;  // nullopt deletes the attribute
};

enum class UnifyPolicy {
  kStrict,           // conflicting attribute values are an error
  kFirstParentWins,  // earlier parent in the list takes precedence
};

class View {
 public:
  const std::string& id() const { return id_; }
  const std::vector<std::string>& parents() const { return parents_; }
  bool is_hub() const { return parents_.empty(); }

  // Frozen base overlaid with local additions, patches and tombstones.
  Document effective() const;
  // The frozen unification of the parents (the hub document for the hub).
  Document base() const;
  const std::string& hub_text() const;

  void set_attribute(std::string_view id, std::string_view name,
                     std::optional<std::string> value);
  // A linkGrp may carry link children; they become additions anchored to it.
  void add_element(Element element, Anchor anchor);
  void delete_element(std::string_view id);

  const std::vector<Addition>& additions() const { return additions_; }
  const std::vector<Patch>& patches() const { return patches_; }
  const std::vector<std::string>& tombstones() const { return tombstones_; }

  // Local edits as a VXD document (the hub's payload is the hub document).
  Document payload() const;
  // Replaces local edits with those stored in a payload document.
  void load_payload(const Document& payload);

  // Opaque copy of the local edits, for undoing a failed multi-step change.
  struct Snapshot {
    std::vector<Addition> additions;
    std::vector<Patch> patches;
    std::vector<std::string> tombstones;
    std::size_t key_counter = 0;
  };
  Snapshot snapshot() const { return {additions_, patches_, tombstones_, key_counter_}; }
  void restore(Snapshot s);

 private:
  friend class ViewGraph;
  View() = default;

  detail::State local_state() const;
  void check_editable() const;
  void add_flattened(const Element& element, const Anchor& anchor,
                     std::vector<Addition>& out);
  std::string next_key();

  std::string id_;
  std::vector<std::string> parents_;
  std::shared_ptr<const detail::State> base_;
  std::vector<Addition> additions_;
  std::vector<Patch> patches_;
  std::vector<std::string> tombstones_;
  std::size_t key_counter_ = 0;
};

class ViewGraph {
 public:
  explicit ViewGraph(Document hub, std::string hub_id = "BD");

  ViewGraph(const ViewGraph&) = delete;
  ViewGraph& operator=(const ViewGraph&) = delete;
  ViewGraph(ViewGraph&&) = default;
  ViewGraph& operator=(ViewGraph&&) = default;

  // Registers a view and freezes the unification of its parents.
  View& add_view(const std::string& id, const std::vector<std::string>& parents,
                 UnifyPolicy policy = UnifyPolicy::kStrict);

  bool contains(std::string_view id) const;
  View& view(std::string_view id);
  const View& view(std::string_view id) const;
  Document compose_effective(std::string_view id) const { return view(id).effective(); }

  const std::string& hub_id() const { return hub_id_; }
  const std::string& hub_text() const;
  // Views in creation order (a topological order).
  const std::vector<std::string>& view_ids() const { return order_; }
  std::map<std::string, std::vector<std::string>> parent_map() const;

 private:
  std::string hub_id_;
  std::map<std::string, std::unique_ptr<View>, std::less<>> views_;
  std::vector<std::string> order_;
};

// Throws CycleDetected (listing the cycle) unless child->parent edges form a
// DAG in which every view reaches the hub.
void check_acyclic(const std::map<std::string, std::vector<std::string>>& parents_of,
                   const std::string& hub_id);
void check_acyclic(const ViewGraph& graph);

// VXV manifest: "view:", "parents:" and "payload:" lines.
struct ViewManifest {
  std::string view;
  std::vector<std::string> parents;
  std::string payload;
};

ViewManifest parse_manifest(std::string_view text);
std::string format_manifest(const ViewManifest& manifest);

}  // namespace veintex

#endif  // VEINTEX_VIEW_GRAPH_H_
