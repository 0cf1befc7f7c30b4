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

// Head and vein expressions over a discourse tree, accessibility domains,
// and direct/indirect classification of reference links.
//
// Heads are computed bottom-up: a leaf heads itself, a relation node takes
// the union of the heads of its nuclear children. Veins are computed
// top-down from vein(root) = head(root). For a relation node with vein v:
//
//   nuclear child, no satellite on its left:  v
//   nuclear child with a left satellite s:    seq(mark(head(s)), v)
//   satellite left of the nucleus:            seq(mark(head(child)), v)
//   satellite right of the nucleus:           seq(head(child), simpl(v))
//
// mark() flags items, simpl() drops flagged items, seq() merges in text
// order. Flagged items are visible to the node that carries them but are
// not propagated into right satellites.

#ifndef VEINTEX_VEINS_H_
#define VEINTEX_VEINS_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "veintex/discourse_tree.h"

namespace veintex {

struct VeinItem {
  std::string unit;
  int position = 0;
  bool marked = false;

  friend bool operator==(const VeinItem&, const VeinItem&) = default;
};

// Items sorted by position, no duplicate units.
class VeinExpr {
 public:
  VeinExpr() = default;
  explicit VeinExpr(std::vector<VeinItem> items);

  const std::vector<VeinItem>& items() const { return items_; }
  bool contains(std::string_view unit) const;
  std::vector<std::string> unit_ids() const;

  // "U1 (U2) U3": space separated, marked items in parentheses.
  std::string to_string() const;
  static VeinExpr parse(std::string_view text, const std::map<std::string, int>& positions);

  friend bool operator==(const VeinExpr&, const VeinExpr&) = default;

 private:
  std::vector<VeinItem> items_;
};

VeinExpr mark(const VeinExpr& e);
VeinExpr simpl(const VeinExpr& e);
// Text-order merge. A unit present in both keeps the flag of its first
// occurrence, i.e. the one from `a`.
VeinExpr seq(const VeinExpr& a, const VeinExpr& b);

// Keyed by case-folded node id (unit id or link id).
using NodeExprMap = std::map<std::string, VeinExpr>;

NodeExprMap compute_heads(const DiscourseTree& tree);
NodeExprMap compute_veins(const DiscourseTree& tree, const NodeExprMap& heads);

// Units of vein(unit) at or before it, in text order (flagged items count).
std::vector<VeinItem> accessibility_domain(std::string_view unit, const NodeExprMap& veins);

struct VeinAnnotation {
  NodeExprMap heads;
  NodeExprMap veins;
  std::map<std::string, std::vector<VeinItem>> domains;  // per unit leaf

  const VeinExpr& head(std::string_view node) const;
  const VeinExpr& vein(std::string_view node) const;
  const std::vector<VeinItem>& domain(std::string_view unit) const;
};

VeinAnnotation annotate_veins(const DiscourseTree& tree);

enum class ReferenceClass { kDirect, kIndirect, kInaccessible };
std::string_view reference_class_name(ReferenceClass c);

enum class ReferenceKind { kCoref, kBridge };

// source refers back to target (anaphor -> referee).
struct ReferenceLink {
  std::string source;
  std::string target;
  ReferenceKind kind = ReferenceKind::kCoref;
  std::string name;  // bridge relation name, e.g. POSS
};

struct ReferenceCounts {
  int direct = 0;
  int indirect = 0;
  int inaccessible = 0;
  int total() const { return direct + indirect + inaccessible; }
};

struct ReferenceReport {
  ReferenceCounts counts;
  std::vector<ReferenceClass> labels;  // parallel to the input links
};

// chain_of maps every rs id (case-folded) to its chain id; rs_to_unit maps
// case-folded rs ids to unit ids. Throws UnmappedRS.
ReferenceReport classify_references(std::span<const ReferenceLink> links,
                                    const std::map<std::string, std::string>& rs_to_unit,
                                    const std::map<std::string, std::string>& chain_of,
                                    const std::map<std::string, std::vector<VeinItem>>& domains);

}  // namespace veintex

#endif  // VEINTEX_VEINS_H_
