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

#include "veintex/pipeline.h"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "veintex/error.h"
#include "veintex/text.h"

namespace veintex {

namespace fs = std::filesystem;

namespace {

bool has_unit(const Element& e) {
  if (e.tag == Tag::kSeg && e.is_unit()) return true;
  return std::any_of(e.children.begin(), e.children.end(), has_unit);
}

bool has_group(const Element& root, GroupKind wanted1, GroupKind wanted2) {
  for (const Element* g : collect(root, Tag::kLinkGrp)) {
    GroupKind k = group_kind(*g);
    if (k != wanted1 && k != wanted2) continue;
    for (const Element& c : g->children) {
      if (c.tag == Tag::kLink) return true;
    }
  }
  return false;
}

// Re-raises with the file or view the failure came from.
[[noreturn]] void rethrow_with(const std::string& where, const Error& e) {
  throw Error(e.code(), where + ": " + e.detail());
}

std::vector<std::string> dedupe(std::initializer_list<std::optional<std::string>> ids) {
  std::vector<std::string> out;
  for (const auto& id : ids) {
    if (!id) continue;
    if (std::none_of(out.begin(), out.end(), [&](const std::string& s) { return s == *id; })) {
      out.push_back(*id);
    }
  }
  return out;
}

std::string normalize_weight_key(std::string_view key) {
  std::string out;
  for (char c : fold_case(trim(key))) {
    if (c != '-' && c != '_' && c != ' ') out += c;
  }
  return out;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> ReferenceInventory::coref_pairs() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const ReferenceLink& l : links) {
    if (l.kind == ReferenceKind::kCoref) out.emplace_back(l.source, l.target);
  }
  return out;
}

std::vector<ReferenceLink> collect_reference_links(const Document& doc) {
  std::vector<ReferenceLink> out;
  for (const Element* g : collect(doc.root(), Tag::kLinkGrp)) {
    GroupKind k = group_kind(*g);
    if (k != GroupKind::kCoref && k != GroupKind::kBridge) continue;
    for (const Element& link : g->children) {
      if (link.tag != Tag::kLink) continue;
      const std::string* targets = link.attr("targets");
      if (!targets) continue;
      std::vector<std::string> t = split_ws(*targets);
      const std::string* name = link.attr("name");
      if (!name) name = link.attr("subtype");
      for (std::size_t i = 1; i < t.size(); ++i) {
        ReferenceLink r;
        r.source = t[0];
        r.target = t[i];
        r.kind = k == GroupKind::kCoref ? ReferenceKind::kCoref : ReferenceKind::kBridge;
        if (name) r.name = *name;
        out.push_back(std::move(r));
      }
    }
  }
  return out;
}

ReferenceInventory collect_references(const Document& mentions, const Document& links,
                                      const std::vector<std::string>& leaf_ids) {
  std::set<std::string> leaves;
  for (const std::string& id : leaf_ids) leaves.insert(fold_case(id));

  ReferenceInventory inv;
  std::function<void(const Element&, const std::string*)> walk = [&](const Element& e,
                                                                      const std::string* unit) {
    const std::string* here = unit;
    std::optional<std::string> id = e.id();
    if (!here && e.tag == Tag::kSeg && id && leaves.count(fold_case(*id))) {
      here = e.attr("id");
    }
    if (e.tag == Tag::kRs && id) {
      inv.rs_ids.push_back(*id);
      if (here) inv.rs_to_unit[fold_case(*id)] = *here;
    }
    for (const Element& c : e.children) walk(c, here);
  };
  walk(mentions.root(), nullptr);
  inv.links = collect_reference_links(links);
  return inv;
}

std::vector<CenteringUnit> centering_units(const std::vector<UnitRef>& units,
                                           const ReferenceInventory& refs, const Chains& chains) {
  std::map<std::string, std::vector<std::string>> by_unit;
  for (const std::string& rs : refs.rs_ids) {
    auto it = refs.rs_to_unit.find(fold_case(rs));
    if (it != refs.rs_to_unit.end()) by_unit[fold_case(it->second)].push_back(rs);
  }
  std::vector<CenteringUnit> out;
  for (const UnitRef& u : units) {
    CenteringUnit cu;
    cu.id = u.id;
    const std::vector<std::string>& rs = by_unit[fold_case(u.id)];
    cu.cf = derive_cf(u.id, rs, chains);
    cu.chains.insert(cu.cf.centers.begin(), cu.cf.centers.end());
    out.push_back(std::move(cu));
  }
  return out;
}

Analysis analyze(const Document& structure, const Document& mentions, const Document& links,
                 const ScoreTable& table) {
  Analysis a;
  a.units = collect_units(structure);
  std::vector<RelationLink> relations = collect_relation_links(structure);
  if (!relations.empty()) {
    a.tree = build_tree(a.units, relations);
  } else if (a.units.size() == 1) {
    a.tree = DiscourseTree(TreeNode::leaf(a.units.front()));
  }
  if (a.tree) a.veins = annotate_veins(*a.tree);

  std::vector<std::string> leaf_ids;
  for (const UnitRef& u : a.units) leaf_ids.push_back(u.id);
  a.references = collect_references(mentions, links, leaf_ids);
  a.chains = build_chains(a.references.rs_ids, a.references.coref_pairs());
  a.centering = centering_units(a.units, a.references, a.chains);

  if (a.has_references() && a.units.size() >= 2) {
    a.ct = ct_score(a.centering, table);
    if (a.veins) a.vt = vt_score(a.centering, a.veins->domains, table);
  }
  if (a.veins && !a.references.links.empty()) {
    a.classification = classify_references(a.references.links, a.references.rs_to_unit,
                                           a.chains.assignment(), a.veins->domains);
  }
  return a;
}

ViewRoles detect_roles(const ViewGraph& graph) {
  ViewRoles roles;
  for (const std::string& id : graph.view_ids()) {
    Document eff = graph.compose_effective(id);
    const Element& root = eff.root();
    if (!roles.units && has_unit(root)) roles.units = id;
    if (!roles.mentions && !collect(root, Tag::kRs).empty()) roles.mentions = id;
    if (!roles.references && has_group(root, GroupKind::kCoref, GroupKind::kBridge)) {
      roles.references = id;
    }
    if (!roles.relations && has_group(root, GroupKind::kRelation, GroupKind::kRelation)) {
      roles.relations = id;
    }
  }
  return roles;
}

PipelineResult run_pipeline(ViewGraph& graph, const ScoreTable& table) {
  for (const char* reserved : {kVeinsView, kCfView, kCtView, kVtView}) {
    if (graph.contains(reserved)) {
      throw Error(ErrorCode::kDuplicateViewId,
                  std::string(reserved) + " is computed and cannot be supplied as input");
    }
  }
  PipelineResult result;
  result.roles = detect_roles(graph);
  const ViewRoles& roles = result.roles;
  if (!roles.relations) {
    throw Error(ErrorCode::kPrerequisiteMissing, "no view carries relation links");
  }

  Document structure = graph.compose_effective(*roles.relations);
  View& veins_view = graph.add_view(kVeinsView, {*roles.relations});
  result.derived.push_back(kVeinsView);

  bool own_rs_in_u = false;
  std::optional<std::string> mentions_view;
  if (roles.mentions) {
    if (graph.contains(kRsInUnitView)) {
      mentions_view = kRsInUnitView;
    } else {
      graph.add_view(kRsInUnitView, dedupe({roles.units, roles.mentions}));
      result.derived.push_back(kRsInUnitView);
      mentions_view = kRsInUnitView;
      own_rs_in_u = true;
    }
  }
  Document mentions = mentions_view ? graph.compose_effective(*mentions_view) : structure;
  Document links = roles.references ? graph.compose_effective(*roles.references) : mentions;
  result.analysis = analyze(structure, mentions, links, table);
  const Analysis& a = result.analysis;

  for (const UnitRef& u : a.units) {
    veins_view.set_attribute(u.id, "head", a.veins->head(u.id).to_string());
    veins_view.set_attribute(u.id, "vein", a.veins->vein(u.id).to_string());
  }
  for (const RelationLink& l : collect_relation_links(structure)) {
    if (l.id.empty() || l.id.front() == '#') continue;  // anonymous links cannot be patched
    veins_view.set_attribute(l.id, "head", a.veins->head(l.id).to_string());
    veins_view.set_attribute(l.id, "vein", a.veins->vein(l.id).to_string());
  }

  if (!a.has_references()) {
    result.warnings.push_back("no reference view: centering skipped");
    return result;
  }
  if (own_rs_in_u) {
    View& v = graph.view(kRsInUnitView);
    for (const std::string& rs : a.references.rs_ids) {
      auto it = a.references.rs_to_unit.find(fold_case(rs));
      if (it != a.references.rs_to_unit.end()) v.set_attribute(rs, "unit", it->second);
    }
  }
  View& cf_view = graph.add_view(kCfView, {*mentions_view});
  result.derived.push_back(kCfView);
  for (const CenteringUnit& u : a.centering) {
    cf_view.set_attribute(u.id, "cf", join(u.cf.centers, " "));
  }
  if (!a.ct) {
    result.warnings.push_back("fewer than two units: transitions skipped");
    return result;
  }

  View& ct_view = graph.add_view(kCtView, dedupe({std::string(kCfView), roles.references}));
  result.derived.push_back(kCtView);
  for (const TransitionRecord& r : a.ct->transitions) {
    if (r.cb) ct_view.set_attribute(r.to_unit, "cb", *r.cb);
  }
  View& vt_view = graph.add_view(
      kVtView, dedupe({std::string(kCfView), roles.references, std::string(kVeinsView)}));
  result.derived.push_back(kVtView);
  for (const TransitionRecord& r : a.vt->transitions) {
    if (r.cb) vt_view.set_attribute(r.to_unit, "cb-h", *r.cb);
  }
  return result;
}

ViewGraph assemble_graph(Document hub, std::string hub_id, std::vector<ViewSource> views) {
  std::map<std::string, std::vector<std::string>> parents_of;
  parents_of[hub_id] = {};
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < views.size(); ++i) {
    const std::string& id = views[i].manifest.view;
    if (parents_of.count(id)) {
      throw Error(ErrorCode::kDuplicateViewId, views[i].origin + ": view \"" + id + "\" defined twice");
    }
    parents_of[id] = views[i].manifest.parents;
    index[id] = i;
  }
  check_acyclic(parents_of, hub_id);

  ViewGraph graph(std::move(hub), hub_id);
  std::set<std::string> added{hub_id};
  std::function<void(const std::string&)> add = [&](const std::string& id) {
    if (added.count(id)) return;
    const ViewSource& src = views[index.at(id)];
    for (const std::string& p : src.manifest.parents) add(p);
    try {
      View& v = graph.add_view(id, src.manifest.parents);
      v.load_payload(src.payload);
    } catch (const Error& e) {
      rethrow_with(src.origin.empty() ? id : src.origin, e);
    }
    added.insert(id);
  };
  for (const ViewSource& v : views) add(v.manifest.view);
  return graph;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << content;
}

namespace {

Document parse_file(const std::filesystem::path& path) {
  ParseOptions opts;
  opts.source_name = path.string();
  return parse_document(read_file(path), opts);
}

bool is_manifest(const std::filesystem::path& path) {
  return iequals(path.extension().string(), ".vxv");
}

}  // namespace

HubSource load_hub(const std::filesystem::path& path) {
  if (!is_manifest(path)) return {parse_file(path), "BD"};
  ViewManifest m;
  try {
    m = parse_manifest(read_file(path));
  } catch (const Error& e) {
    rethrow_with(path.string(), e);
  }
  if (!m.parents.empty()) {
    throw Error(ErrorCode::kInvalidArgument, path.string() + ": hub manifest lists parents");
  }
  return {parse_file(path.parent_path() / m.payload), m.view};
}

ViewSource load_view(const std::filesystem::path& manifest_path) {
  ViewSource src;
  src.origin = manifest_path.string();
  try {
    src.manifest = parse_manifest(read_file(manifest_path));
  } catch (const Error& e) {
    rethrow_with(src.origin, e);
  }
  src.payload = parse_file(manifest_path.parent_path() / src.manifest.payload);
  return src;
}

ViewGraph load_graph(const std::filesystem::path& hub,
                     const std::vector<std::filesystem::path>& views) {
  HubSource h = load_hub(hub);
  std::vector<ViewSource> sources;
  std::error_code ec;
  fs::path hub_path = fs::weakly_canonical(hub, ec);
  for (const auto& p : views) {
    if (fs::weakly_canonical(p, ec) == hub_path) continue;  // listed with the views
    sources.push_back(load_view(p));
  }
  return assemble_graph(std::move(h.document), h.view_id, std::move(sources));
}

ScoreTable parse_weights(std::string_view spec) {
  ScoreTable table;
  std::string text(spec);
  std::replace(text.begin(), text.end(), ',', ' ');
  for (const std::string& item : split_ws(text)) {
    auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument, "weight \"" + item + "\" is not KEY=VALUE");
    }
    std::string key = normalize_weight_key(item.substr(0, eq));
    std::optional<Transition> kind;
    for (Transition t : {Transition::kContinuation, Transition::kRetaining,
                         Transition::kSmoothShift, Transition::kAbruptShift, Transition::kNoCb}) {
      if (normalize_weight_key(transition_name(t)) == key) kind = t;
    }
    if (!kind) throw Error(ErrorCode::kInvalidArgument, "unknown transition \"" + item + "\"");
    std::string value = item.substr(eq + 1);
    if (value.empty() || value.size() > 9 ||
        !std::all_of(value.begin(), value.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw Error(ErrorCode::kInvalidArgument,
                  "weight for " + std::string(transition_name(*kind)) + " must be a non-negative integer");
    }
    table.set(*kind, std::stoi(value));
  }
  return table;
}

}  // namespace veintex
