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

// Binary discourse trees: relation nodes over unit leaves, with per-child
// nuclearity. Trees are values; every edit returns a new tree.

#ifndef VEINTEX_DISCOURSE_TREE_H_
#define VEINTEX_DISCOURSE_TREE_H_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "veintex/markup.h"

namespace veintex {

struct UnitRef {
  std::string id;
  int position = 0;  // 1-based text order
  std::string text;
  // An open placeholder leaf stands for `span` consecutive positions
  // starting at `position`, to be filled by substitution.
  bool open = false;
  int span = 1;

  int last() const { return position + span - 1; }
  friend bool operator==(const UnitRef&, const UnitRef&) = default;
};

struct TreeNode {
  enum class Kind { kUnit, kRelation };

  Kind kind = Kind::kUnit;
  UnitRef unit;                         // kUnit
  std::string link_id;                  // kRelation
  std::optional<std::string> relation;  // kRelation, from subtype
  std::vector<TreeNode> children;       // 0 or 2, in text order
  std::array<bool, 2> nuclear{false, false};

  bool is_unit() const { return kind == Kind::kUnit; }
  // Unit id for leaves, link id for relations.
  const std::string& node_id() const { return is_unit() ? unit.id : link_id; }
  int first_position() const;
  int last_position() const;

  static TreeNode leaf(UnitRef unit);
  static TreeNode make_relation(std::string link_id, std::optional<std::string> name,
                                TreeNode left, TreeNode right, bool left_nuclear,
                                bool right_nuclear);

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

class DiscourseTree {
 public:
  explicit DiscourseTree(TreeNode root);

  const TreeNode& root() const { return root_; }
  // Number of text positions covered (open leaves count their whole span).
  int unit_count() const { return unit_count_; }
  // Leaves in text order.
  std::vector<UnitRef> leaves() const;
  const TreeNode* find(std::string_view node_id) const;

  // Compact rendering: L1(U1*,U2) with '*' marking nuclei.
  std::string to_string() const;

  friend bool operator==(const DiscourseTree&, const DiscourseTree&) = default;

 private:
  TreeNode root_;
  int unit_count_ = 0;
};

// A relation link as read from linkGrp[type=relation].
struct RelationLink {
  std::string id;
  std::vector<std::string> targets;
  std::vector<std::string> nuclei;
  std::optional<std::string> relation;
};

// Unit leaves of a document in text order. seg[type=open] becomes one open
// leaf covering the units nested inside it; those nested units are omitted
// unless `include_covered` is set.
std::vector<UnitRef> collect_units(const Document& doc, bool include_covered = false);
std::vector<RelationLink> collect_relation_links(const Document& doc);

// Throws MultipleRoots, NoRoot, TargetReuse, NonBinaryLink, EmptyNuclei,
// NonContiguousSpan or UnknownTarget.
DiscourseTree build_tree(std::span<const UnitRef> units, std::span<const RelationLink> links);
// Working-state variant: one tree per root. Units referenced by no link are
// single-leaf trees.
std::vector<DiscourseTree> build_forest(std::span<const UnitRef> units,
                                        std::span<const RelationLink> links);
std::vector<RelationLink> extract_links(const DiscourseTree& tree);

enum class TreeDiagnosticKind {
  kEmptyNuclei,
  kTargetReuse,
  kNonBinary,
  kNonContiguousSpan,
  kBadPositions,
};
std::string_view tree_diagnostic_name(TreeDiagnosticKind kind);

struct TreeDiagnostic {
  TreeDiagnosticKind kind;
  std::string node_id;
  std::string message() const;
};

std::vector<TreeDiagnostic> validate_tree(const DiscourseTree& tree);

DiscourseTree substitute(const DiscourseTree& tree, std::string_view site_leaf,
                         const DiscourseTree& partial);

struct Edge {
  std::optional<std::string> parent_link;  // nullopt: the root itself
  int child_index = 0;
};

struct AdjoinSpec {
  std::string link_id;  // id of the inserted relation node
  std::optional<std::string> relation;
  bool sibling_nuclear = true;
  bool existing_nuclear = true;
};

DiscourseTree adjoin(const DiscourseTree& tree, const Edge& edge, const AdjoinSpec& spec,
                     const DiscourseTree& sibling);

// Serializes the tree as a linkGrp[type=relation] element.
Element to_link_group(const DiscourseTree& tree);

}  // namespace veintex

#endif  // VEINTEX_DISCOURSE_TREE_H_
