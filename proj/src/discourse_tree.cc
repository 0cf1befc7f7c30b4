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

#include "veintex/discourse_tree.h"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "veintex/error.h"
#include "veintex/text.h"

namespace veintex {

namespace {

int count_positions(const TreeNode& n) {
  if (n.is_unit()) return n.unit.span;
  int total = 0;
  for (const TreeNode& c : n.children) total += count_positions(c);
  return total;
}

void gather_leaves(const TreeNode& n, std::vector<UnitRef>& out) {
  if (n.is_unit()) {
    out.push_back(n.unit);
    return;
  }
  for (const TreeNode& c : n.children) gather_leaves(c, out);
}

const TreeNode* find_node(const TreeNode& n, const std::string& key) {
  if (fold_case(n.node_id()) == key) return &n;
  for (const TreeNode& c : n.children) {
    if (const TreeNode* hit = find_node(c, key)) return hit;
  }
  return nullptr;
}

void render(const TreeNode& n, std::string& out) {
  if (n.is_unit()) {
    out += n.unit.id;
    return;
  }
  out += n.link_id + "(";
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    if (i) out += ",";
    render(n.children[i], out);
    if (i < 2 && n.nuclear[i]) out += "*";
  }
  out += ")";
}

// Resolves links into nodes. Shared by build_tree and build_forest.
class Builder {
 public:
  Builder(std::span<const UnitRef> units, std::span<const RelationLink> links)
      : units_(units), links_(links) {
    for (std::size_t i = 0; i < units.size(); ++i) {
      if (!unit_index_.emplace(fold_case(units[i].id), i).second) {
        throw Error(ErrorCode::kTargetReuse, "unit " + units[i].id + " listed twice");
      }
    }
    for (std::size_t i = 0; i < links.size(); ++i) {
      const RelationLink& l = links[i];
      if (!link_index_.emplace(fold_case(l.id), i).second || unit_index_.count(fold_case(l.id))) {
        throw Error(ErrorCode::kTargetReuse, "node id " + l.id + " defined twice");
      }
    }
    for (const RelationLink& l : links) {
      if (l.targets.size() != 2) {
        throw Error(ErrorCode::kNonBinaryLink,
                    l.id + " has " + std::to_string(l.targets.size()) + " targets");
      }
      if (l.nuclei.empty()) throw Error(ErrorCode::kEmptyNuclei, l.id + " has no nucleus");
      for (const std::string& n : l.nuclei) {
        if (std::none_of(l.targets.begin(), l.targets.end(),
                         [&](const std::string& t) { return iequals(t, n); })) {
          throw Error(ErrorCode::kUnknownTarget, l.id + " nucleus " + n + " is not a target");
        }
      }
      for (const std::string& t : l.targets) {
        std::string key = fold_case(t);
        if (!unit_index_.count(key) && !link_index_.count(key)) {
          throw Error(ErrorCode::kUnknownTarget, l.id + " targets unknown " + t);
        }
        auto [it, inserted] = parent_of_.emplace(key, l.id);
        if (!inserted) {
          throw Error(ErrorCode::kTargetReuse,
                      t + " is a child of both " + it->second + " and " + l.id);
        }
      }
    }
  }

  std::vector<std::string> roots() const {
    std::vector<std::string> out;
    for (const RelationLink& l : links_) {
      if (!parent_of_.count(fold_case(l.id))) out.push_back(l.id);
    }
    for (const UnitRef& u : units_) {
      if (!parent_of_.count(fold_case(u.id))) out.push_back(u.id);
    }
    return out;
  }

  bool is_link(const std::string& id) const { return link_index_.count(fold_case(id)) > 0; }

  TreeNode build(const std::string& id) {
    std::string key = fold_case(id);
    if (auto it = unit_index_.find(key); it != unit_index_.end()) {
      return TreeNode::leaf(units_[it->second]);
    }
    if (!visiting_.insert(key).second) throw Error(ErrorCode::kNoRoot, "cycle through " + id);
    const RelationLink& l = links_[link_index_.at(key)];
    visited_links_.insert(key);
    TreeNode left = build(l.targets[0]);
    TreeNode right = build(l.targets[1]);
    auto nuclear = [&](const std::string& t) {
      return std::any_of(l.nuclei.begin(), l.nuclei.end(),
                         [&](const std::string& n) { return iequals(n, t); });
    };
    bool ln = nuclear(l.targets[0]), rn = nuclear(l.targets[1]);
    if (left.first_position() > right.first_position()) {
      std::swap(left, right);
      std::swap(ln, rn);
    }
    if (left.last_position() + 1 != right.first_position()) {
      throw Error(ErrorCode::kNonContiguousSpan,
                  l.id + " joins non-adjacent spans " + std::to_string(left.first_position()) +
                      ".." + std::to_string(left.last_position()) + " and " +
                      std::to_string(right.first_position()) + ".." +
                      std::to_string(right.last_position()));
    }
    visiting_.erase(key);
    return TreeNode::make_relation(l.id, l.relation, std::move(left), std::move(right), ln, rn);
  }

  void check_all_links_reached() const {
    for (const RelationLink& l : links_) {
      if (!visited_links_.count(fold_case(l.id))) {
        throw Error(ErrorCode::kNoRoot, "links form a cycle through " + l.id);
      }
    }
  }

 private:
  std::span<const UnitRef> units_;
  std::span<const RelationLink> links_;
  std::map<std::string, std::size_t> unit_index_;
  std::map<std::string, std::size_t> link_index_;
  std::map<std::string, std::string> parent_of_;
  std::set<std::string> visiting_;
  std::set<std::string> visited_links_;
};

void check_node(const TreeNode& n, std::set<std::string>& seen,
                std::vector<TreeDiagnostic>& out) {
  if (!seen.insert(fold_case(n.node_id())).second) {
    out.push_back({TreeDiagnosticKind::kTargetReuse, n.node_id()});
  }
  if (n.is_unit()) return;
  if (n.children.size() != 2) {
    out.push_back({TreeDiagnosticKind::kNonBinary, n.node_id()});
    for (const TreeNode& c : n.children) check_node(c, seen, out);
    return;
  }
  if (!n.nuclear[0] && !n.nuclear[1]) out.push_back({TreeDiagnosticKind::kEmptyNuclei, n.link_id});
  if (n.children[0].last_position() + 1 != n.children[1].first_position()) {
    out.push_back({TreeDiagnosticKind::kNonContiguousSpan, n.link_id});
  }
  for (const TreeNode& c : n.children) check_node(c, seen, out);
}

void extract(const TreeNode& n, std::vector<RelationLink>& out) {
  if (n.is_unit()) return;
  for (const TreeNode& c : n.children) extract(c, out);
  RelationLink l;
  l.id = n.link_id;
  l.relation = n.relation;
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    l.targets.push_back(n.children[i].node_id());
    if (i < 2 && n.nuclear[i]) l.nuclei.push_back(n.children[i].node_id());
  }
  out.push_back(std::move(l));
}

// Returns a copy of `n` with the node `key` replaced by `with`.
bool replace_node(TreeNode& n, const std::string& key, const TreeNode& with) {
  for (TreeNode& c : n.children) {
    if (fold_case(c.node_id()) == key) {
      c = with;
      return true;
    }
    if (replace_node(c, key, with)) return true;
  }
  return false;
}

TreeNode* find_mutable(TreeNode& n, const std::string& key) {
  if (fold_case(n.node_id()) == key) return &n;
  for (TreeNode& c : n.children) {
    if (TreeNode* hit = find_mutable(c, key)) return hit;
  }
  return nullptr;
}

void collect_unit_refs(const Element& e, int& pos, bool include_covered,
                       std::vector<UnitRef>& out) {
  if (e.is_text()) return;
  if (e.is_open()) {
    std::vector<const Element*> nested;
    for (const Element* s : collect(e, Tag::kSeg)) {
      if (s->is_unit()) nested.push_back(s);
    }
    int span = std::max<int>(1, static_cast<int>(nested.size()));
    out.push_back(UnitRef{e.id().value_or(""), pos, e.text_content(), true, span});
    if (include_covered) {
      int p = pos;
      for (const Element* u : nested) {
        out.push_back(UnitRef{u->id().value_or(""), p++, u->text_content(), false, 1});
      }
    }
    pos += span;
    return;
  }
  if (e.is_unit()) {
    out.push_back(UnitRef{e.id().value_or(""), pos++, e.text_content(), false, 1});
    return;
  }
  for (const Element& c : e.children) collect_unit_refs(c, pos, include_covered, out);
}

}  // namespace

int TreeNode::first_position() const {
  if (is_unit()) return unit.position;
  int best = 0;
  for (const TreeNode& c : children) {
    int p = c.first_position();
    if (best == 0 || p < best) best = p;
  }
  return best;
}

int TreeNode::last_position() const {
  if (is_unit()) return unit.last();
  int best = 0;
  for (const TreeNode& c : children) best = std::max(best, c.last_position());
  return best;
}

TreeNode TreeNode::leaf(UnitRef unit) {
  TreeNode n;
  n.kind = Kind::kUnit;
  n.unit = std::move(unit);
  return n;
}

TreeNode TreeNode::make_relation(std::string link_id, std::optional<std::string> name, TreeNode left,
                            TreeNode right, bool left_nuclear, bool right_nuclear) {
  TreeNode n;
  n.kind = Kind::kRelation;
  n.link_id = std::move(link_id);
  n.relation = std::move(name);
  n.children.push_back(std::move(left));
  n.children.push_back(std::move(right));
  n.nuclear = {left_nuclear, right_nuclear};
  return n;
}

DiscourseTree::DiscourseTree(TreeNode root)
    : root_(std::move(root)), unit_count_(count_positions(root_)) {}

std::vector<UnitRef> DiscourseTree::leaves() const {
  std::vector<UnitRef> out;
  gather_leaves(root_, out);
  return out;
}

const TreeNode* DiscourseTree::find(std::string_view node_id) const {
  return find_node(root_, fold_case(node_id));
}

std::string DiscourseTree::to_string() const {
  std::string out;
  render(root_, out);
  return out;
}

std::vector<UnitRef> collect_units(const Document& doc, bool include_covered) {
  std::vector<UnitRef> out;
  int pos = 1;
  collect_unit_refs(doc.root(), pos, include_covered, out);
  return out;
}

std::vector<RelationLink> collect_relation_links(const Document& doc) {
  std::vector<RelationLink> out;
  int anonymous = 0;
  for (const Element* grp : collect(doc.root(), Tag::kLinkGrp)) {
    if (group_kind(*grp) != GroupKind::kRelation) continue;
    for (const Element& l : grp->children) {
      if (l.tag != Tag::kLink) continue;
      RelationLink link;
      link.id = l.id().value_or("#relation" + std::to_string(++anonymous));
      if (const std::string* t = l.attr("targets")) link.targets = split_ws(*t);
      if (const std::string* n = l.attr("nuclei")) link.nuclei = split_ws(*n);
      if (const std::string* s = l.attr("subtype")) link.relation = *s;
      out.push_back(std::move(link));
    }
  }
  return out;
}

DiscourseTree build_tree(std::span<const UnitRef> units, std::span<const RelationLink> links) {
  if (units.empty()) throw Error(ErrorCode::kNoRoot, "no units");
  Builder builder(units, links);
  std::vector<std::string> roots = builder.roots();
  if (roots.size() > 1) {
    throw Error(ErrorCode::kMultipleRoots, "roots: " + join(roots, " "));
  }
  if (roots.empty()) throw Error(ErrorCode::kNoRoot, "every link is a child of another link");
  DiscourseTree tree(builder.build(roots.front()));
  builder.check_all_links_reached();
  return tree;
}

std::vector<DiscourseTree> build_forest(std::span<const UnitRef> units,
                                        std::span<const RelationLink> links) {
  Builder builder(units, links);
  std::vector<DiscourseTree> out;
  for (const std::string& r : builder.roots()) out.emplace_back(builder.build(r));
  builder.check_all_links_reached();
  std::stable_sort(out.begin(), out.end(), [](const DiscourseTree& a, const DiscourseTree& b) {
    return a.root().first_position() < b.root().first_position();
  });
  return out;
}

std::vector<RelationLink> extract_links(const DiscourseTree& tree) {
  std::vector<RelationLink> out;
  extract(tree.root(), out);
  return out;
}

std::string_view tree_diagnostic_name(TreeDiagnosticKind kind) {
  switch (kind) {
    case TreeDiagnosticKind::kEmptyNuclei: return "EmptyNuclei";
    case TreeDiagnosticKind::kTargetReuse: return "TargetReuse";
    case TreeDiagnosticKind::kNonBinary: return "NonBinaryLink";
    case TreeDiagnosticKind::kNonContiguousSpan: return "NonContiguousSpan";
    case TreeDiagnosticKind::kBadPositions: return "BadPositions";
  }
  return "Unknown";
}

std::string TreeDiagnostic::message() const {
  return std::string(tree_diagnostic_name(kind)) + ": " + node_id;
}

std::vector<TreeDiagnostic> validate_tree(const DiscourseTree& tree) {
  std::vector<TreeDiagnostic> out;
  std::set<std::string> seen;
  check_node(tree.root(), seen, out);
  std::vector<UnitRef> leaves = tree.leaves();
  std::vector<std::pair<int, int>> spans;
  for (const UnitRef& u : leaves) spans.emplace_back(u.position, u.last());
  std::sort(spans.begin(), spans.end());
  for (std::size_t i = 1; i < spans.size(); ++i) {
    if (spans[i].first != spans[i - 1].second + 1) {
      out.push_back({TreeDiagnosticKind::kBadPositions, leaves[i].id});
      break;
    }
  }
  return out;
}

DiscourseTree substitute(const DiscourseTree& tree, std::string_view site_leaf,
                         const DiscourseTree& partial) {
  const TreeNode* site = tree.find(site_leaf);
  if (!site || !site->is_unit() || !site->unit.open) {
    throw Error(ErrorCode::kSiteNotOpen, std::string(site_leaf) + " is not an open leaf");
  }
  if (partial.root().first_position() != site->unit.position ||
      partial.root().last_position() != site->unit.last()) {
    throw Error(ErrorCode::kSpanMismatch,
                "partial tree covers " + std::to_string(partial.root().first_position()) + ".." +
                    std::to_string(partial.root().last_position()) + " but " +
                    std::string(site_leaf) + " covers " + std::to_string(site->unit.position) +
                    ".." + std::to_string(site->unit.last()));
  }
  TreeNode root = tree.root();
  std::string key = fold_case(site_leaf);
  if (fold_case(root.node_id()) == key) {
    root = partial.root();
  } else {
    replace_node(root, key, partial.root());
  }
  DiscourseTree out(std::move(root));
  if (!validate_tree(out).empty()) {
    throw Error(ErrorCode::kSpanMismatch, "substitution breaks the tree: " +
                                              validate_tree(out).front().message());
  }
  return out;
}

DiscourseTree adjoin(const DiscourseTree& tree, const Edge& edge, const AdjoinSpec& spec,
                     const DiscourseTree& sibling) {
  if (!spec.sibling_nuclear && !spec.existing_nuclear) {
    throw Error(ErrorCode::kEmptyNuclei, spec.link_id + " would have no nucleus");
  }
  if (tree.find(spec.link_id) || sibling.root().node_id() == spec.link_id ||
      find_node(sibling.root(), fold_case(spec.link_id))) {
    throw Error(ErrorCode::kDuplicateId, "node id " + spec.link_id + " already in use");
  }
  TreeNode root = tree.root();
  TreeNode* slot = &root;
  if (edge.parent_link) {
    TreeNode* parent = find_mutable(root, fold_case(*edge.parent_link));
    if (!parent || parent->is_unit() || edge.child_index < 0 ||
        edge.child_index >= static_cast<int>(parent->children.size())) {
      throw Error(ErrorCode::kBadEdge, *edge.parent_link + "/" + std::to_string(edge.child_index));
    }
    slot = &parent->children[static_cast<std::size_t>(edge.child_index)];
  }
  const TreeNode& existing = *slot;
  const TreeNode& added = sibling.root();
  bool sibling_left = added.last_position() + 1 == existing.first_position();
  bool sibling_right = existing.last_position() + 1 == added.first_position();
  if (!sibling_left && !sibling_right) {
    throw Error(ErrorCode::kSpanMismatch,
                "sibling " + std::to_string(added.first_position()) + ".." +
                    std::to_string(added.last_position()) + " is not adjacent to " +
                    existing.node_id());
  }
  TreeNode inserted =
      sibling_left
          ? TreeNode::make_relation(spec.link_id, spec.relation, added, existing, spec.sibling_nuclear,
                               spec.existing_nuclear)
          : TreeNode::make_relation(spec.link_id, spec.relation, existing, added,
                               spec.existing_nuclear, spec.sibling_nuclear);
  *slot = std::move(inserted);
  DiscourseTree out(std::move(root));
  std::vector<TreeDiagnostic> diags = validate_tree(out);
  if (!diags.empty()) {
    throw Error(ErrorCode::kSpanMismatch, "adjoin breaks the tree: " + diags.front().message());
  }
  return out;
}

Element to_link_group(const DiscourseTree& tree) {
  Element grp = Element::make(Tag::kLinkGrp, {{"type", "relation"}, {"targorder", "Y"}});
  for (const RelationLink& l : extract_links(tree)) {
    Element link = Element::make(Tag::kLink, {{"id", l.id}, {"targets", join(l.targets, " ")},
                                              {"nuclei", join(l.nuclei, " ")}});
    if (l.relation) link.set_attr("subtype", *l.relation);
    grp.children.push_back(std::move(link));
  }
  return grp;
}

}  // namespace veintex
