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

// Splits a complete annotated document into a hub plus U-VIEW, RS-VIEW,
// RL-VIEW and REL-VIEW manifests. Used to regenerate the split fixtures:
//
//   fixture_split tests/data/goriot.vxd tests/data/goriot

#include <filesystem>
#include <iostream>
#include <map>

#include "veintex/error.h"
#include "veintex/pipeline.h"
#include "veintex/text.h"
#include "veintex/view_graph.h"

namespace fs = std::filesystem;
using namespace veintex;

namespace {

struct Span {
  Element element;
  std::size_t start, end;
};

// Drops unit segs, rs and linkGrps, keeping their text in place.
void strip(const Element& in, Element& out) {
  for (const Element& c : in.children) {
    if (c.tag == Tag::kLinkGrp) continue;
    if ((c.tag == Tag::kSeg && c.is_unit()) || c.tag == Tag::kRs) {
      strip(c, out);
      continue;
    }
    if (c.is_text() && !out.children.empty() && out.children.back().is_text()) {
      out.children.back().text += c.text;
      continue;
    }
    Element copy = c;
    copy.children.clear();
    strip(c, copy);
    out.children.push_back(std::move(copy));
  }
}

void spans(const Element& e, std::size_t& offset, std::vector<Span>& units,
           std::vector<Span>& rs) {
  if (e.is_text()) {
    offset += utf8::length(e.text);
    return;
  }
  std::size_t start = offset;
  for (const Element& c : e.children) spans(c, offset, units, rs);
  Element bare = Element::make(e.tag, e.attributes);
  if (e.tag == Tag::kSeg && e.is_unit()) units.push_back({bare, start, offset});
  if (e.tag == Tag::kRs) rs.push_back({bare, start, offset});
}

void write_view(const fs::path& dir, const std::string& stem, const View& v) {
  write_file(dir / (stem + ".vxd"), serialize_document(v.payload()));
  write_file(dir / (stem + ".vxv"), format_manifest({v.id(), v.parents(), stem + ".vxd"}));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: fixture_split FULL.vxd OUTDIR\n";
    return 2;
  }
  try {
    Document full = parse_document(read_file(argv[1]));
    fs::path dir = argv[2];

    Element hub_root = Element::make(Tag::kBody, full.root().attributes);
    strip(full.root(), hub_root);
    Document hub = Document::from_root(hub_root);
    write_file(dir / "bd.vxd", serialize_document(hub));
    write_file(dir / "bd.vxv", format_manifest({"BD", {}, "bd.vxd"}));

    std::vector<Span> units, rs;
    std::size_t offset = 0;
    spans(full.root(), offset, units, rs);
    std::sort(rs.begin(), rs.end(), [](const Span& a, const Span& b) {
      return a.start != b.start ? a.start < b.start : a.end > b.end;
    });

    ViewGraph graph(hub, "BD");
    View& u = graph.add_view("U-VIEW", {"BD"});
    for (const Span& s : units) u.add_element(s.element, Anchor::by_char_range(s.start, s.end));
    View& r = graph.add_view("RS-VIEW", {"BD"});
    for (const Span& s : rs) r.add_element(s.element, Anchor::by_char_range(s.start, s.end));
    View& rl = graph.add_view("RL-VIEW", {"RS-VIEW"});
    View& rel = graph.add_view("REL-VIEW", {"U-VIEW"});
    for (const Element* g : collect(full.root(), Tag::kLinkGrp)) {
      View& target = group_kind(*g) == GroupKind::kRelation ? rel : rl;
      target.add_element(*g, Anchor::at_root());
    }
    write_view(dir, "u-view", u);
    write_view(dir, "rs-view", r);
    write_view(dir, "rl-view", rl);
    write_view(dir, "rel-view", rel);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}
