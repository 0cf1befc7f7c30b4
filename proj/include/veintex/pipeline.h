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

// End-to-end analysis: discourse tree, veins, coreference chains, CT and VT
// smoothness, reference accessibility, and the derived views that record
// these results inside a view graph.

#ifndef VEINTEX_PIPELINE_H_
#define VEINTEX_PIPELINE_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "veintex/centering.h"
#include "veintex/discourse_tree.h"
#include "veintex/markup.h"
#include "veintex/veins.h"
#include "veintex/view_graph.h"

namespace veintex {

// Reference markup read from a document: rs ids in text order, the unit
// each rs sits in, and the coref/bridge links.
struct ReferenceInventory {
  std::vector<std::string> rs_ids;
  std::map<std::string, std::string> rs_to_unit;  // case-folded rs id -> unit id
  std::vector<ReferenceLink> links;               // coref first-target -> second-target

  std::vector<std::pair<std::string, std::string>> coref_pairs() const;
};

// Links of every coref/bridge linkGrp. A link naming more than two targets
// contributes one reference per extra target.
std::vector<ReferenceLink> collect_reference_links(const Document& doc);

// rs elements are mapped to the outermost enclosing seg whose id is listed
// in `leaf_ids` (case-insensitive).
ReferenceInventory collect_references(const Document& mentions, const Document& links,
                                      const std::vector<std::string>& leaf_ids);

struct Analysis {
  std::vector<UnitRef> units;
  std::optional<DiscourseTree> tree;
  std::optional<VeinAnnotation> veins;
  ReferenceInventory references;
  Chains chains;
  std::vector<CenteringUnit> centering;
  std::optional<SmoothnessReport> ct;
  std::optional<SmoothnessReport> vt;
  std::optional<ReferenceReport> classification;

  bool has_references() const { return !references.rs_ids.empty(); }
};

// `structure` supplies units and relation links, `mentions` the rs markup,
// `links` the coref/bridge groups. For a single complete document pass it
// three times. Centering is skipped when there are no rs elements or fewer
// than two units.
Analysis analyze(const Document& structure, const Document& mentions, const Document& links,
                 const ScoreTable& table = {});
inline Analysis analyze_document(const Document& doc, const ScoreTable& table = {}) {
  return analyze(doc, doc, doc, table);
}

std::vector<CenteringUnit> centering_units(const std::vector<UnitRef>& units,
                                           const ReferenceInventory& refs, const Chains& chains);

// First view, in creation order, whose effective document carries each kind
// of markup.
struct ViewRoles {
  std::optional<std::string> units;
  std::optional<std::string> mentions;
  std::optional<std::string> references;
  std::optional<std::string> relations;
};
ViewRoles detect_roles(const ViewGraph& graph);

inline constexpr const char* kVeinsView = "VEINS-VIEW";
inline constexpr const char* kRsInUnitView = "RS-IN-U-VIEW";
inline constexpr const char* kCfView = "CF-VIEW";
inline constexpr const char* kCtView = "CT-VIEW";
inline constexpr const char* kVtView = "VT-VIEW";

struct PipelineResult {
  Analysis analysis;
  ViewRoles roles;
  std::vector<std::string> derived;  // views created, in creation order
  std::vector<std::string> warnings;
};

// Computes the analysis and records it as derived views. VEINS-VIEW,
// CF-VIEW, CT-VIEW and VT-VIEW are always computed, so an input view using
// one of those ids is rejected with DuplicateViewId. RS-IN-U-VIEW is reused
// when present. Throws PrerequisiteMissing when no view has relation links.
PipelineResult run_pipeline(ViewGraph& graph, const ScoreTable& table = {});

// A view as read from a manifest, with its payload parsed.
struct ViewSource {
  ViewManifest manifest;
  Document payload;
  std::string origin;  // file name for messages
};

// Adds the views in dependency order after checking the parent graph.
ViewGraph assemble_graph(Document hub, std::string hub_id, std::vector<ViewSource> views);

// Reads a .vxd hub (view id "BD") or a parentless .vxv manifest.
struct HubSource {
  Document document;
  std::string view_id;
};
HubSource load_hub(const std::filesystem::path& path);
ViewSource load_view(const std::filesystem::path& manifest_path);
ViewGraph load_graph(const std::filesystem::path& hub,
                     const std::vector<std::filesystem::path>& views);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

// Parses "continuation=4,no-cb=0" style overrides onto the default table.
ScoreTable parse_weights(std::string_view spec);

}  // namespace veintex

#endif  // VEINTEX_PIPELINE_H_
