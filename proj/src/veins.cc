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

#include "veintex/veins.h"

#include <algorithm>

#include "veintex/error.h"
#include "veintex/text.h"

namespace veintex {

namespace {

VeinExpr head_of(const TreeNode& n, NodeExprMap& out) {
  VeinExpr h;
  if (n.is_unit()) {
    h = VeinExpr({VeinItem{n.unit.id, n.unit.position, false}});
  } else {
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      VeinExpr child = head_of(n.children[i], out);
      if (i < 2 && n.nuclear[i]) h = seq(h, child);
    }
  }
  out[fold_case(n.node_id())] = h;
  return h;
}

void vein_of(const TreeNode& n, const VeinExpr& vein, const NodeExprMap& heads,
             NodeExprMap& out) {
  out[fold_case(n.node_id())] = vein;
  if (n.is_unit() || n.children.size() != 2) return;
  const TreeNode& left = n.children[0];
  const TreeNode& right = n.children[1];
  const VeinExpr& left_head = heads.at(fold_case(left.node_id()));
  const VeinExpr& right_head = heads.at(fold_case(right.node_id()));
  const bool ln = n.nuclear[0], rn = n.nuclear[1];

  if (ln && rn) {
    vein_of(left, vein, heads, out);
    vein_of(right, vein, heads, out);
  } else if (ln) {
    vein_of(left, vein, heads, out);
    vein_of(right, seq(right_head, simpl(vein)), heads, out);
  } else if (rn) {
    VeinExpr with_satellite = seq(mark(left_head), vein);
    vein_of(left, with_satellite, heads, out);
    vein_of(right, with_satellite, heads, out);
  } else {
    // Not a valid tree; treat both as satellites of an absent nucleus.
    vein_of(left, seq(mark(left_head), vein), heads, out);
    vein_of(right, seq(right_head, simpl(vein)), heads, out);
  }
}

void domains_of(const TreeNode& n, const NodeExprMap& veins,
                std::map<std::string, std::vector<VeinItem>>& out) {
  if (n.is_unit()) {
    out[fold_case(n.unit.id)] = accessibility_domain(n.unit.id, veins);
    return;
  }
  for (const TreeNode& c : n.children) domains_of(c, veins, out);
}

}  // namespace

VeinExpr::VeinExpr(std::vector<VeinItem> items) : items_(std::move(items)) {
  std::stable_sort(items_.begin(), items_.end(),
                   [](const VeinItem& a, const VeinItem& b) { return a.position < b.position; });
}

bool VeinExpr::contains(std::string_view unit) const {
  return std::any_of(items_.begin(), items_.end(),
                     [&](const VeinItem& i) { return iequals(i.unit, unit); });
}

std::vector<std::string> VeinExpr::unit_ids() const {
  std::vector<std::string> out;
  for (const VeinItem& i : items_) out.push_back(i.unit);
  return out;
}

std::string VeinExpr::to_string() const {
  std::vector<std::string> parts;
  for (const VeinItem& i : items_) parts.push_back(i.marked ? "(" + i.unit + ")" : i.unit);
  return join(parts, " ");
}

VeinExpr VeinExpr::parse(std::string_view text, const std::map<std::string, int>& positions) {
  std::vector<VeinItem> items;
  for (const std::string& tok : split_ws(text)) {
    bool marked = tok.size() > 2 && tok.front() == '(' && tok.back() == ')';
    std::string unit = marked ? tok.substr(1, tok.size() - 2) : tok;
    auto it = positions.find(fold_case(unit));
    if (it == positions.end()) {
      throw Error(ErrorCode::kMalformedInput, "vein names unknown unit " + unit);
    }
    if (std::any_of(items.begin(), items.end(),
                    [&](const VeinItem& i) { return iequals(i.unit, unit); })) {
      throw Error(ErrorCode::kMalformedInput, "vein repeats unit " + unit);
    }
    items.push_back(VeinItem{unit, it->second, marked});
  }
  return VeinExpr(std::move(items));
}

VeinExpr mark(const VeinExpr& e) {
  std::vector<VeinItem> items = e.items();
  for (VeinItem& i : items) i.marked = true;
  return VeinExpr(std::move(items));
}

VeinExpr simpl(const VeinExpr& e) {
  std::vector<VeinItem> items;
  for (const VeinItem& i : e.items()) {
    if (!i.marked) items.push_back(i);
  }
  return VeinExpr(std::move(items));
}

VeinExpr seq(const VeinExpr& a, const VeinExpr& b) {
  std::vector<VeinItem> items = a.items();
  for (const VeinItem& i : b.items()) {
    if (!a.contains(i.unit)) items.push_back(i);
  }
  return VeinExpr(std::move(items));
}

NodeExprMap compute_heads(const DiscourseTree& tree) {
  NodeExprMap out;
  head_of(tree.root(), out);
  return out;
}

NodeExprMap compute_veins(const DiscourseTree& tree, const NodeExprMap& heads) {
  NodeExprMap out;
  vein_of(tree.root(), heads.at(fold_case(tree.root().node_id())), heads, out);
  return out;
}

std::vector<VeinItem> accessibility_domain(std::string_view unit, const NodeExprMap& veins) {
  auto it = veins.find(fold_case(unit));
  if (it == veins.end()) return {};
  const std::vector<VeinItem>& items = it->second.items();
  auto self = std::find_if(items.begin(), items.end(),
                           [&](const VeinItem& i) { return iequals(i.unit, unit); });
  if (self == items.end()) return {};
  std::vector<VeinItem> out;
  for (const VeinItem& i : items) {
    if (i.position <= self->position) out.push_back(i);
  }
  return out;
}

const VeinExpr& VeinAnnotation::head(std::string_view node) const {
  return heads.at(fold_case(node));
}

const VeinExpr& VeinAnnotation::vein(std::string_view node) const {
  return veins.at(fold_case(node));
}

const std::vector<VeinItem>& VeinAnnotation::domain(std::string_view unit) const {
  return domains.at(fold_case(unit));
}

VeinAnnotation annotate_veins(const DiscourseTree& tree) {
  VeinAnnotation a;
  a.heads = compute_heads(tree);
  a.veins = compute_veins(tree, a.heads);
  domains_of(tree.root(), a.veins, a.domains);
  return a;
}

std::string_view reference_class_name(ReferenceClass c) {
  switch (c) {
    case ReferenceClass::kDirect: return "direct";
    case ReferenceClass::kIndirect: return "indirect";
    case ReferenceClass::kInaccessible: return "inaccessible";
  }
  return "unknown";
}

ReferenceReport classify_references(std::span<const ReferenceLink> links,
                                    const std::map<std::string, std::string>& rs_to_unit,
                                    const std::map<std::string, std::string>& chain_of,
                                    const std::map<std::string, std::vector<VeinItem>>& domains) {
  auto unit_of = [&](const std::string& rs) -> const std::string& {
    auto it = rs_to_unit.find(fold_case(rs));
    if (it == rs_to_unit.end()) throw Error(ErrorCode::kUnmappedRs, rs + " lies in no unit");
    return it->second;
  };
  auto in_domain = [](const std::vector<VeinItem>& dom, const std::string& unit) {
    return std::any_of(dom.begin(), dom.end(),
                       [&](const VeinItem& i) { return iequals(i.unit, unit); });
  };
  static const std::vector<VeinItem> kEmpty;

  ReferenceReport report;
  for (const ReferenceLink& link : links) {
    const std::string& source_unit = unit_of(link.source);
    const std::string& target_unit = unit_of(link.target);
    auto d = domains.find(fold_case(source_unit));
    const std::vector<VeinItem>& dom = d == domains.end() ? kEmpty : d->second;

    ReferenceClass cls = ReferenceClass::kInaccessible;
    if (in_domain(dom, target_unit)) {
      cls = ReferenceClass::kDirect;
    } else if (auto c = chain_of.find(fold_case(link.target)); c != chain_of.end()) {
      std::string source_key = fold_case(link.source);
      for (const auto& [rs, chain] : chain_of) {
        if (chain != c->second || rs == source_key) continue;
        auto u = rs_to_unit.find(rs);
        if (u != rs_to_unit.end() && in_domain(dom, u->second)) {
          cls = ReferenceClass::kIndirect;
          break;
        }
      }
    }
    switch (cls) {
      case ReferenceClass::kDirect: ++report.counts.direct; break;
      case ReferenceClass::kIndirect: ++report.counts.indirect; break;
      case ReferenceClass::kInaccessible: ++report.counts.inaccessible; break;
    }
    report.labels.push_back(cls);
  }
  return report;
}

}  // namespace veintex
