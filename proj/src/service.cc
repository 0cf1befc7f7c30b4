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

#include "veintex/service.h"

#include <algorithm>
#include <functional>
#include <set>

#include "veintex/discourse_tree.h"
#include "veintex/error.h"
#include "veintex/pipeline.h"
#include "veintex/text.h"
#include "veintex/veins.h"

namespace veintex {

namespace {

// ---- locating markup in the hub text -------------------------------------

struct Located {
  const Element* element;
  std::size_t start;
  std::size_t end;
};

void locate(const Element& e, std::size_t& offset, std::vector<Located>& out) {
  if (e.is_text()) {
    offset += utf8::length(e.text);
    return;
  }
  std::size_t index = out.size();
  out.push_back({&e, offset, offset});
  for (const Element& c : e.children) locate(c, offset, out);
  out[index].end = offset;
}

std::vector<Located> locate_all(const Document& doc) {
  std::vector<Located> out;
  std::size_t offset = 0;
  locate(doc.root(), offset, out);
  return out;
}

bool is_space_at(const std::string& text, std::size_t index) {
  std::string c = utf8::substr(text, index, 1);
  return c.size() == 1 && std::isspace(static_cast<unsigned char>(c[0]));
}

// Next "<prefix><n>" id above every existing one with that prefix.
std::string next_id(const Document& doc, std::string_view prefix) {
  long best = 0;
  for (const Element* e : doc.identified()) {
    std::string id = *e->id();
    if (id.size() <= prefix.size() || !iequals(id.substr(0, prefix.size()), prefix)) continue;
    std::string rest = id.substr(prefix.size());
    if (rest.size() > 9 || !std::all_of(rest.begin(), rest.end(), ::isdigit)) continue;
    best = std::max(best, std::stol(rest));
  }
  return std::string(prefix) + std::to_string(best + 1);
}

// ---- JSON field access --------------------------------------------------

std::string get_string(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw Error(ErrorCode::kInvalidArgument, std::string("missing string field \"") + key + "\"");
  }
  return j[key].get<std::string>();
}

std::optional<std::string> opt_string(const Json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  if (!j[key].is_string()) {
    throw Error(ErrorCode::kInvalidArgument, std::string("field \"") + key + "\" must be a string");
  }
  return j[key].get<std::string>();
}

std::size_t get_offset(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<long long>() < 0) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("field \"") + key + "\" must be a non-negative integer");
  }
  return j[key].get<std::size_t>();
}

std::vector<std::string> get_list(const Json& j, const char* key) {
  if (!j.contains(key)) return {};
  if (j[key].is_string()) return split_ws(j[key].get<std::string>());
  if (!j[key].is_array()) {
    throw Error(ErrorCode::kInvalidArgument, std::string("field \"") + key + "\" must be a list");
  }
  std::vector<std::string> out;
  for (const Json& v : j[key]) {
    if (!v.is_string()) throw Error(ErrorCode::kInvalidArgument, std::string("bad item in ") + key);
    out.push_back(v.get<std::string>());
  }
  return out;
}

bool get_bool(const Json& j, const char* key, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_boolean()) {
    throw Error(ErrorCode::kInvalidArgument, std::string("field \"") + key + "\" must be boolean");
  }
  return j[key].get<bool>();
}

// ---- forest helpers -----------------------------------------------------

struct Forest {
  std::vector<UnitRef> units;
  std::vector<RelationLink> links;
  std::vector<DiscourseTree> trees;
};

Forest forest_of(const Document& doc) {
  Forest f;
  f.units = collect_units(doc);
  f.links = collect_relation_links(doc);
  if (!f.units.empty()) f.trees = build_forest(f.units, f.links);
  return f;
}

std::size_t tree_containing(const Forest& f, std::string_view node) {
  for (std::size_t i = 0; i < f.trees.size(); ++i) {
    if (f.trees[i].find(node)) return i;
  }
  throw Error(ErrorCode::kUnknownTarget, "no tree node " + std::string(node));
}

std::optional<Edge> edge_to(const TreeNode& n, const std::string& key) {
  for (int i = 0; i < static_cast<int>(n.children.size()); ++i) {
    const TreeNode& c = n.children[i];
    if (fold_case(c.node_id()) == key) return Edge{n.link_id, i};
    if (auto e = edge_to(c, key)) return e;
  }
  return std::nullopt;
}

std::string sorted_key(const std::vector<std::string>& ids) {
  std::vector<std::string> folded;
  for (const std::string& s : ids) folded.push_back(fold_case(s));
  std::sort(folded.begin(), folded.end());
  return join(folded, " ");
}

const char* group_type(GroupKind kind) {
  switch (kind) {
    case GroupKind::kRelation: return "RELATION";
    case GroupKind::kCoref: return "COREF";
    case GroupKind::kBridge: return "BRIDGE";
    case GroupKind::kOther: break;
  }
  return "OTHER";
}

// Id of a linkGrp of the given kind that links can be anchored to, creating
// one in the working view when every existing group is anonymous.
std::string ensure_group(View& view, const Document& doc, GroupKind kind, EditResult& r) {
  for (const Element* g : collect(doc.root(), Tag::kLinkGrp)) {
    if (group_kind(*g) == kind && g->id()) return *g->id();
  }
  std::string id = std::string("GRP-") + group_type(kind);
  if (doc.find(id)) id = next_id(doc, id + "-");
  view.add_element(Element::make(Tag::kLinkGrp, {{"type", group_type(kind)}, {"id", id}}),
                   Anchor::at_root());
  r.created.push_back(id);
  return id;
}

Element relation_element(const RelationLink& l) {
  Element e = Element::make(Tag::kLink, {{"id", l.id},
                                         {"targets", join(l.targets, " ")},
                                         {"nuclei", join(l.nuclei, " ")}});
  if (l.relation) e.set_attr("subtype", *l.relation);
  return e;
}

// Rewrites the relation links of `before` into those of `after`.
void apply_tree_diff(View& view, const Document& doc, const std::vector<RelationLink>& before,
                     const std::vector<RelationLink>& after, EditResult& r) {
  std::map<std::string, const RelationLink*> old;
  for (const RelationLink& l : before) old[fold_case(l.id)] = &l;
  std::set<std::string> kept;
  std::optional<std::string> group;
  for (const RelationLink& l : after) {
    std::string key = fold_case(l.id);
    auto it = old.find(key);
    if (it == old.end()) {
      if (!group) group = ensure_group(view, doc, GroupKind::kRelation, r);
      view.add_element(relation_element(l), Anchor::by_id(*group));
      r.created.push_back(l.id);
      continue;
    }
    kept.insert(key);
    const RelationLink& o = *it->second;
    bool same = sorted_key(o.targets) == sorted_key(l.targets) &&
                sorted_key(o.nuclei) == sorted_key(l.nuclei) && o.relation == l.relation;
    if (same) continue;
    if (l.id.starts_with("#")) {
      throw Error(ErrorCode::kInvalidArgument, "a relation link without id cannot be rewritten");
    }
    view.set_attribute(l.id, "targets", join(l.targets, " "));
    view.set_attribute(l.id, "nuclei", join(l.nuclei, " "));
    view.set_attribute(l.id, "subtype", l.relation);
    r.modified.push_back(l.id);
  }
  for (const RelationLink& l : before) {
    if (kept.count(fold_case(l.id))) continue;
    if (l.id.starts_with("#")) {
      throw Error(ErrorCode::kInvalidArgument, "a relation link without id cannot be removed");
    }
    view.delete_element(l.id);
    r.deleted.push_back(l.id);
  }
}

// ---- individual edits ---------------------------------------------------

void add_unit(View& view, const std::string& text, std::size_t start, std::size_t end,
              std::map<std::string, std::string> attrs, EditResult& r) {
  while (start < end && is_space_at(text, start)) ++start;
  while (end > start && is_space_at(text, end - 1)) --end;
  if (start >= end) throw Error(ErrorCode::kInvalidAnchor, "the unit would be empty");
  std::string id = attrs.at("id");
  view.add_element(Element::make(Tag::kSeg, std::move(attrs)), Anchor::by_char_range(start, end));
  r.created.push_back(id);
}

void mark_unit_boundary(View& view, const Document& doc, const Json& edit, EditResult& r) {
  const std::string& text = view.hub_text();
  std::size_t offset = get_offset(edit, "offset");
  if (offset == 0 || offset > utf8::length(text)) {
    throw Error(ErrorCode::kInvalidAnchor, "boundary offset " + std::to_string(offset) +
                                               " leaves an empty unit or is outside the text");
  }
  std::vector<Located> located = locate_all(doc);
  for (const Located& l : located) {
    if (l.element->tag != Tag::kSeg || !l.element->is_unit()) continue;
    if (l.start < offset && offset < l.end) {
      // Split: the left part keeps the id and attributes.
      std::map<std::string, std::string> left = l.element->attributes;
      std::string old_id = *l.element->id();
      std::size_t s = l.start, e = l.end;
      view.delete_element(old_id);
      EditResult scratch;
      add_unit(view, text, s, offset, left, scratch);
      add_unit(view, text, offset, e, {{"type", "unit"}, {"id", next_id(doc, "U")}}, r);
      r.modified.push_back(old_id);
      return;
    }
  }
  // Innermost container holding the offset; the new unit runs from the end
  // of the previous unit in it (or its start) up to the offset.
  const Located* container = nullptr;
  for (const Located& l : located) {
    const Element& e = *l.element;
    bool holder = e.tag == Tag::kBody || e.tag == Tag::kDiv || e.tag == Tag::kP ||
                  (e.tag == Tag::kSeg && !e.is_unit());
    if (holder && l.start < offset && offset <= l.end) container = &l;
  }
  if (!container) throw Error(ErrorCode::kInvalidAnchor, "no block contains the offset");
  std::size_t start = container->start;
  for (const Located& l : located) {
    if (l.element->tag == Tag::kSeg && l.element->is_unit() && l.start >= container->start &&
        l.end <= offset) {
      start = std::max(start, l.end);
    }
  }
  add_unit(view, text, start, offset, {{"type", "unit"}, {"id", next_id(doc, "U")}}, r);
}

void mark_rs(View& view, const Document& doc, const Json& edit, EditResult& r) {
  std::size_t start, end;
  if (edit.contains("range")) {
    const Json& range = edit["range"];
    if (!range.is_array() || range.size() != 2) {
      throw Error(ErrorCode::kInvalidArgument, "range must be [start, end]");
    }
    Json pair = {{"start", range[0]}, {"end", range[1]}};
    start = get_offset(pair, "start");
    end = get_offset(pair, "end");
  } else {
    start = get_offset(edit, "start");
    end = get_offset(edit, "end");
  }
  std::string id = opt_string(edit, "id").value_or(next_id(doc, "P"));
  std::map<std::string, std::string> attrs{{"id", id}};
  if (auto type = opt_string(edit, "type")) attrs["type"] = *type;
  view.add_element(Element::make(Tag::kRs, std::move(attrs)), Anchor::by_char_range(start, end));
  r.created.push_back(id);
}

const Element& require_rs(const Document& doc, const std::string& id) {
  const Element* e = doc.find(id);
  if (!e || e->tag != Tag::kRs) throw Error(ErrorCode::kUnknownTarget, id + " is not a reference string");
  return *e;
}

void link_reference(View& view, const Document& doc, const Json& edit, GroupKind kind,
                    EditResult& r) {
  std::string source = get_string(edit, "source");
  std::string target = get_string(edit, "target");
  require_rs(doc, source);
  require_rs(doc, target);
  if (iequals(source, target)) throw Error(ErrorCode::kInvalidArgument, "a link needs two rs");
  std::string group = ensure_group(view, doc, kind, r);
  std::string id = opt_string(edit, "id").value_or(next_id(doc, "R"));
  Element link = Element::make(Tag::kLink, {{"id", id}, {"targets", source + " " + target}});
  if (kind == GroupKind::kBridge) link.set_attr("name", get_string(edit, "name"));
  view.add_element(std::move(link), Anchor::by_id(group));
  r.created.push_back(id);
}

void create_relation(View& view, const Document& doc, const Json& edit, EditResult& r) {
  std::vector<std::string> targets = get_list(edit, "targets");
  if (targets.empty() && edit.contains("targetA")) {
    targets = {get_string(edit, "targetA"), get_string(edit, "targetB")};
  }
  if (targets.size() != 2) {
    throw Error(ErrorCode::kNonBinaryLink, "a relation joins exactly two nodes");
  }
  Forest f = forest_of(doc);
  for (const std::string& t : targets) {
    bool root = std::any_of(f.trees.begin(), f.trees.end(), [&](const DiscourseTree& tr) {
      return iequals(tr.root().node_id(), t);
    });
    if (!root) {
      bool known = std::any_of(f.trees.begin(), f.trees.end(),
                               [&](const DiscourseTree& tr) { return tr.find(t) != nullptr; });
      throw Error(known ? ErrorCode::kTargetReuse : ErrorCode::kUnknownTarget,
                  t + (known ? " already has a parent relation" : " is not a unit or relation"));
    }
  }
  std::vector<std::string> nuclei = get_list(edit, "nuclei");
  if (nuclei.empty()) throw Error(ErrorCode::kEmptyNuclei, "a relation needs a nucleus");
  for (const std::string& n : nuclei) {
    if (!iequals(n, targets[0]) && !iequals(n, targets[1])) {
      throw Error(ErrorCode::kUnknownTarget, "nucleus " + n + " is not among the targets");
    }
  }
  RelationLink link;
  link.id = opt_string(edit, "id").value_or(next_id(doc, "L"));
  if (doc.find(link.id)) throw Error(ErrorCode::kDuplicateId, "id " + link.id + " already exists");
  link.targets = targets;
  link.nuclei = nuclei;
  link.relation = opt_string(edit, "name");
  std::string group = ensure_group(view, doc, GroupKind::kRelation, r);
  view.add_element(relation_element(link), Anchor::by_id(group));
  r.created.push_back(link.id);
}

std::vector<RelationLink> parse_links(const Json& edit) {
  if (!edit.contains("links") || !edit["links"].is_array()) {
    throw Error(ErrorCode::kInvalidArgument, "substitute needs a \"links\" list");
  }
  std::vector<RelationLink> out;
  for (const Json& j : edit["links"]) {
    RelationLink l;
    l.id = get_string(j, "id");
    l.targets = get_list(j, "targets");
    l.nuclei = get_list(j, "nuclei");
    l.relation = opt_string(j, "name");
    out.push_back(std::move(l));
  }
  return out;
}

void substitute_edit(View& view, const Document& doc, const Json& edit, EditResult& r) {
  std::string site = get_string(edit, "site");
  Forest f = forest_of(doc);
  std::size_t ti = tree_containing(f, site);
  const TreeNode* leaf = f.trees[ti].find(site);
  if (!leaf->is_unit() || !leaf->unit.open) {
    throw Error(ErrorCode::kSiteNotOpen, site + " is not an open leaf");
  }
  std::vector<UnitRef> covered;
  for (const UnitRef& u : collect_units(doc, true)) {
    if (!u.open && u.position >= leaf->unit.position && u.position <= leaf->unit.last()) {
      covered.push_back(u);
    }
  }
  std::vector<RelationLink> links = parse_links(edit);
  for (const RelationLink& l : links) {
    if (doc.find(l.id)) throw Error(ErrorCode::kDuplicateId, "id " + l.id + " already exists");
  }
  DiscourseTree partial = build_tree(covered, links);
  DiscourseTree result = substitute(f.trees[ti], site, partial);
  apply_tree_diff(view, doc, extract_links(f.trees[ti]), extract_links(result), r);
  // The placeholder is filled; its nested units become ordinary leaves.
  view.set_attribute(site, "type", "filled");
  r.modified.push_back(site);
}

void adjoin_edit(View& view, const Document& doc, const Json& edit, EditResult& r) {
  std::string at = get_string(edit, "at");
  std::string sibling = get_string(edit, "sibling");
  Forest f = forest_of(doc);
  std::size_t ti = tree_containing(f, at);
  std::size_t si = tree_containing(f, sibling);
  if (!iequals(f.trees[si].root().node_id(), sibling)) {
    throw Error(ErrorCode::kBadEdge, sibling + " is not the root of a partial tree");
  }
  if (si == ti) throw Error(ErrorCode::kBadEdge, "cannot adjoin a tree to itself");
  Edge edge;
  if (!iequals(f.trees[ti].root().node_id(), at)) {
    edge = *edge_to(f.trees[ti].root(), fold_case(at));
  }
  AdjoinSpec spec;
  spec.link_id = opt_string(edit, "id").value_or(next_id(doc, "L"));
  if (doc.find(spec.link_id)) {
    throw Error(ErrorCode::kDuplicateId, "id " + spec.link_id + " already exists");
  }
  spec.relation = opt_string(edit, "name");
  spec.sibling_nuclear = get_bool(edit, "siblingNuclear", true);
  spec.existing_nuclear = get_bool(edit, "existingNuclear", true);
  DiscourseTree result = adjoin(f.trees[ti], edge, spec, f.trees[si]);
  std::vector<RelationLink> before = extract_links(f.trees[ti]);
  for (RelationLink& l : extract_links(f.trees[si])) before.push_back(std::move(l));
  apply_tree_diff(view, doc, before, extract_links(result), r);
}

// ---- analysis payloads --------------------------------------------------

Json vein_items(const std::vector<VeinItem>& items) {
  Json out = Json::array();
  for (const VeinItem& i : items) out.push_back(i.unit);
  return out;
}

void node_exprs(const TreeNode& n, const VeinAnnotation& va, Json& out) {
  out[n.node_id()] = {{"head", va.head(n.node_id()).to_string()},
                      {"vein", va.vein(n.node_id()).to_string()}};
  for (const TreeNode& c : n.children) node_exprs(c, va, out);
}

Json transitions_json(const SmoothnessReport& ct, const SmoothnessReport& vt) {
  Json out = Json::array();
  for (std::size_t i = 0; i < ct.transitions.size(); ++i) {
    const TransitionRecord& c = ct.transitions[i];
    const TransitionRecord& v = vt.transitions[i];
    auto opt = [](const std::optional<std::string>& s) { return s ? Json(*s) : Json(nullptr); };
    out.push_back({{"unit", c.to_unit},
                   {"ctContext", opt(c.from_unit)},
                   {"ctCb", opt(c.cb)},
                   {"ctTransition", transition_name(c.kind)},
                   {"ctScore", c.score},
                   {"vtContext", opt(v.from_unit)},
                   {"vtCb", opt(v.cb)},
                   {"vtTransition", transition_name(v.kind)},
                   {"vtScore", v.score}});
  }
  return out;
}

Forest analysis_forest(const Document& doc) {
  Forest f = forest_of(doc);
  if (f.units.empty()) throw Error(ErrorCode::kPrerequisiteMissing, "no discourse units are marked");
  if (f.links.empty() && f.units.size() > 1) {
    throw Error(ErrorCode::kPrerequisiteMissing, "no relation links: the discourse tree is empty");
  }
  return f;
}

Json veins_payload(const Document& doc) {
  Forest f = analysis_forest(doc);
  Json trees = Json::array();
  for (const DiscourseTree& t : f.trees) {
    VeinAnnotation va = annotate_veins(t);
    Json nodes = Json::object();
    node_exprs(t.root(), va, nodes);
    Json domains = Json::object();
    Json units = Json::array();
    for (const UnitRef& u : t.leaves()) {
      units.push_back(u.id);
      domains[u.id] = vein_items(va.domain(u.id));
    }
    trees.push_back({{"root", t.root().node_id()},
                     {"partial", f.trees.size() > 1},
                     {"tree", t.to_string()},
                     {"units", units},
                     {"nodes", nodes},
                     {"domains", domains}});
  }
  return {{"kind", "veins"}, {"complete", f.trees.size() == 1}, {"trees", trees}};
}

Json centering_payload(const Document& doc, const ScoreTable& table) {
  if (collect(doc.root(), Tag::kRs).empty()) {
    throw Error(ErrorCode::kPrerequisiteMissing, "no reference strings are marked");
  }
  Forest f = analysis_forest(doc);
  std::vector<std::string> leaf_ids;
  for (const UnitRef& u : f.units) leaf_ids.push_back(u.id);
  ReferenceInventory refs = collect_references(doc, doc, leaf_ids);
  Chains chains = build_chains(refs.rs_ids, refs.coref_pairs());

  Json trees = Json::array();
  for (const DiscourseTree& t : f.trees) {
    std::vector<UnitRef> leaves = t.leaves();
    if (leaves.size() < 2) continue;
    std::vector<CenteringUnit> cu = centering_units(leaves, refs, chains);
    VeinAnnotation va = annotate_veins(t);
    SmoothnessReport ct = ct_score(cu, table);
    SmoothnessReport vt = vt_score(cu, va.domains, table);
    Json cf = Json::object();
    for (const CenteringUnit& u : cu) cf[u.id] = u.cf.centers;
    trees.push_back({{"root", t.root().node_id()},
                     {"partial", f.trees.size() > 1},
                     {"cf", cf},
                     {"transitions", transitions_json(ct, vt)},
                     {"ctScore", ct.total},
                     {"vtScore", vt.total}});
  }
  if (trees.empty()) {
    throw Error(ErrorCode::kPrerequisiteMissing, "no discourse tree spans two units yet");
  }
  Json chain_json = Json::object();
  for (const std::string& c : chains.chain_ids()) chain_json[c] = chains.members(c);
  return {{"kind", "centering"},
          {"complete", f.trees.size() == 1},
          {"chains", chain_json},
          {"trees", trees}};
}

Json comparison_payload(const Document& doc, const std::string& source, const ScoreTable& table) {
  Forest f = analysis_forest(doc);
  if (f.trees.size() != 1) {
    throw Error(ErrorCode::kPrerequisiteMissing,
                "the discourse tree is incomplete: " + std::to_string(f.trees.size()) +
                    " partial trees");
  }
  Analysis a = analyze_document(doc, table);
  if (!a.ct || !a.vt) {
    throw Error(ErrorCode::kPrerequisiteMissing,
                a.has_references() ? "fewer than two units" : "no reference strings are marked");
  }
  std::vector<ComparisonRow> rows{comparison_report(*a.ct, *a.vt, source)};
  const ComparisonRow& row = rows.front();
  return {{"kind", "comparison"},
          {"source", row.source},
          {"transitions", row.transitions},
          {"ctScore", row.ct_total},
          {"ctAverage", row.ct_average().to_string()},
          {"vtScore", row.vt_total},
          {"vtAverage", row.vt_average().to_string()},
          {"csv", comparison_csv(rows)}};
}

std::string escape_text(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

OpenRequest OpenRequest::from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kInvalidArgument, "request body must be an object");
  OpenRequest req;
  req.hub = get_string(j, "hub");
  if (auto id = opt_string(j, "hubId")) req.hub_id = *id;
  req.derive = get_bool(j, "derive", false);
  if (j.contains("views")) {
    if (!j["views"].is_array()) throw Error(ErrorCode::kInvalidArgument, "views must be a list");
    for (const Json& v : j["views"]) {
      OpenRequest::View view;
      view.id = v.contains("view") ? get_string(v, "view") : get_string(v, "id");
      view.parents = get_list(v, "parents");
      view.payload = get_string(v, "payload");
      req.views.push_back(std::move(view));
    }
  }
  return req;
}

Json EditResult::to_json() const {
  return {{"version", version}, {"created", created}, {"modified", modified}, {"deleted", deleted}};
}

std::optional<AnalysisKind> analysis_kind_from_name(std::string_view name) {
  if (iequals(name, "veins")) return AnalysisKind::kVeins;
  if (iequals(name, "centering")) return AnalysisKind::kCentering;
  if (iequals(name, "comparison")) return AnalysisKind::kComparison;
  return std::nullopt;
}

Session::Session(std::string id, ViewGraph graph, std::string active_view)
    : id_(std::move(id)), graph_(std::move(graph)), active_(std::move(active_view)) {}

std::int64_t Session::version() const {
  std::shared_lock lock(mu_);
  return version_;
}

std::vector<std::string> Session::view_ids() const {
  std::shared_lock lock(mu_);
  return graph_.view_ids();
}

std::string Session::view_text(const std::optional<std::string>& view) const {
  std::shared_lock lock(mu_);
  std::string id = view.value_or(active_);
  if (!graph_.contains(id)) throw Error(ErrorCode::kUnknownView, "no view " + id);
  return serialize_document(graph_.compose_effective(id));
}

EditResult Session::apply_edit(std::int64_t version, const Json& edit) {
  std::unique_lock lock(mu_);
  if (version != version_) {
    throw Error(ErrorCode::kStaleVersion, "edit against version " + std::to_string(version) +
                                              ", session is at " + std::to_string(version_));
  }
  View& work = graph_.view(active_);
  View::Snapshot saved = work.snapshot();
  EditResult r;
  try {
    r = apply_locked(edit);
  } catch (const Error& e) {
    work.restore(std::move(saved));
    std::string kind = edit.is_object() && edit.contains("kind") && edit["kind"].is_string()
                           ? edit["kind"].get<std::string>()
                           : std::string("edit");
    throw Error(e.code(), kind + ": " + e.detail());
  } catch (...) {
    work.restore(std::move(saved));
    throw;
  }
  r.version = ++version_;
  return r;
}

EditResult Session::apply_locked(const Json& edit) {
  if (!edit.is_object()) throw Error(ErrorCode::kInvalidArgument, "edit must be an object");
  std::string kind = get_string(edit, "kind");
  View& work = graph_.view(active_);
  Document doc = work.effective();
  EditResult r;
  bool touches_tree = false;
  if (kind == "markUnitBoundary") {
    mark_unit_boundary(work, doc, edit, r);
  } else if (kind == "markRS") {
    mark_rs(work, doc, edit, r);
  } else if (kind == "linkCoref") {
    link_reference(work, doc, edit, GroupKind::kCoref, r);
  } else if (kind == "linkBridge") {
    link_reference(work, doc, edit, GroupKind::kBridge, r);
  } else if (kind == "createRelation") {
    create_relation(work, doc, edit, r);
    touches_tree = true;
  } else if (kind == "deleteElement") {
    std::string id = get_string(edit, "id");
    work.delete_element(id);
    r.deleted.push_back(id);
  } else if (kind == "setAttribute") {
    std::string id = get_string(edit, "id");
    work.set_attribute(id, get_string(edit, "name"), opt_string(edit, "value"));
    r.modified.push_back(id);
  } else if (kind == "substitute") {
    substitute_edit(work, doc, edit, r);
    touches_tree = true;
  } else if (kind == "adjoin") {
    adjoin_edit(work, doc, edit, r);
    touches_tree = true;
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown edit kind \"" + kind + "\"");
  }
  if (touches_tree) forest_of(work.effective());  // the forest must still build
  return r;
}

Json Session::analysis(AnalysisKind kind, const ScoreTable& table) const {
  std::shared_lock lock(mu_);
  Document doc = graph_.compose_effective(active_);
  Json out;
  switch (kind) {
    case AnalysisKind::kVeins: out = veins_payload(doc); break;
    case AnalysisKind::kCentering: out = centering_payload(doc, table); break;
    case AnalysisKind::kComparison: out = comparison_payload(doc, id_, table); break;
  }
  out["version"] = version_;
  return out;
}

std::string add_work_view(ViewGraph& graph) {
  std::set<std::string> used;
  for (const auto& [child, parents] : graph.parent_map()) {
    used.insert(parents.begin(), parents.end());
  }
  std::vector<std::string> sinks;
  for (const std::string& id : graph.view_ids()) {
    if (!used.count(id)) sinks.push_back(id);
  }
  graph.add_view(kWorkView, sinks);
  return kWorkView;
}

std::shared_ptr<Session> AnnotationService::open_session(const OpenRequest& request) {
  Document hub;
  std::string_view trimmed = trim(request.hub);
  if (!trimmed.empty() && trimmed.front() == '<') {
    ParseOptions opts;
    opts.source_name = "hub";
    hub = parse_document(request.hub, opts);
  } else {
    hub = parse_document("<body><p>" + escape_text(request.hub) + "</p></body>");
  }
  std::vector<ViewSource> sources;
  for (const OpenRequest::View& v : request.views) {
    ParseOptions opts;
    opts.source_name = v.id;
    sources.push_back({{v.id, v.parents, ""}, parse_document(v.payload, opts), v.id});
  }
  ViewGraph graph = assemble_graph(std::move(hub), request.hub_id, std::move(sources));
  if (request.derive) run_pipeline(graph);
  return adopt(std::move(graph));
}

std::shared_ptr<Session> AnnotationService::adopt(ViewGraph graph) {
  std::string work = add_work_view(graph);
  std::lock_guard lock(mu_);
  std::string id = next_id();
  auto session = std::make_shared<Session>(id, std::move(graph), work);
  sessions_[id] = session;
  return session;
}

std::shared_ptr<Session> AnnotationService::session(const std::string& id) const {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::kUnknownSession, "no session " + id);
  return it->second;
}

std::string AnnotationService::next_id() { return "s" + std::to_string(++counter_); }

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kStaleVersion: return 409;
    case ErrorCode::kUnknownSession:
    case ErrorCode::kUnknownView: return 404;
    case ErrorCode::kPrerequisiteMissing: return 422;
    case ErrorCode::kIo:
    case ErrorCode::kBindFailure: return 500;
    default: return 400;
  }
}

}  // namespace veintex
