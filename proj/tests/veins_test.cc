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

#include <sstream>

#include "doctest.h"
#include "support/fixtures.h"
#include "support/vein_oracle.h"
#include "veintex/centering.h"
#include "veintex/pipeline.h"
#include "veintex/text.h"
#include "veintex/veins.h"

using namespace veintex;
using veintex::testing::data_path;
using veintex::testing::error_of;
using veintex::testing::load_doc;

namespace {

DiscourseTree tree_of(const Document& d) {
  return build_tree(collect_units(d), collect_relation_links(d));
}

std::string domain_string(const std::vector<VeinItem>& items) {
  std::vector<std::string> ids;
  for (const VeinItem& i : items) ids.push_back(i.unit);
  return join(ids, " ");
}

std::map<std::string, int> positions(const DiscourseTree& t) {
  std::map<std::string, int> out;
  for (const UnitRef& u : t.leaves()) out[fold_case(u.id)] = u.position;
  return out;
}

}  // namespace

TEST_CASE("vein expression algebra") {
  std::map<std::string, int> pos = {{"u1", 1}, {"u2", 2}, {"u3", 3}, {"u4", 4}};
  VeinExpr a = VeinExpr::parse("U3 (U2)", pos);
  CHECK(a.to_string() == "(U2) U3");
  CHECK(mark(a).to_string() == "(U2) (U3)");
  CHECK(simpl(a).to_string() == "U3");
  // The first operand's flag wins on overlap.
  VeinExpr b = VeinExpr::parse("U1 U2 U4", pos);
  CHECK(seq(a, b).to_string() == "U1 (U2) U3 U4");
  CHECK(seq(b, a).to_string() == "U1 U2 U3 U4");
  CHECK(a.contains("u2"));
  CHECK_FALSE(a.contains("U1"));
}

TEST_CASE("demo4 matches the committed hand derivation") {
  Document d = load_doc("demo4.vxd");
  DiscourseTree t = tree_of(d);
  VeinAnnotation va = annotate_veins(t);
  std::istringstream in(read_file(data_path("demo4.veins")));
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, '\t')) f.push_back(cell);
    REQUIRE(f.size() == 4);
    CAPTURE(f[0]);
    CHECK(va.head(f[0]).to_string() == f[1]);
    CHECK(va.vein(f[0]).to_string() == f[2]);
    if (f[3] != "-") CHECK(domain_string(va.domain(f[0])) == f[3]);
    ++rows;
  }
  CHECK(rows == 7);
  // U2 is popped: it is not accessible from U4.
  CHECK(domain_string(va.domain("U4")) == "U1 U3 U4");
}

TEST_CASE("goriot veins agree with the oracle") {
  DiscourseTree t = tree_of(load_doc("goriot.vxd"));
  VeinAnnotation va = annotate_veins(t);
  testing::Oracle o = testing::run_oracle(t);
  for (const auto& [node, expr] : o.vein) {
    CAPTURE(node);
    CHECK(va.vein(node).to_string() == o.render(expr));
    CHECK(va.head(node).to_string() == o.render(o.head.at(node)));
  }
  CHECK(va.vein("U10").to_string() == "U1 U2 U3 U4 U5 U6 U7 U8 U9 U10");
  CHECK(va.vein("U8").to_string() == "U1 U2 U3 U4 U5 U6 U7 U8");
  CHECK(va.vein("U5").to_string() == "U1 U2 U3 U4 U5 U6 U7");
  CHECK(va.head("L7").to_string() == "U3 U4 U5 U6 U7");
  // Every domain is the full prefix of the text.
  for (const UnitRef& u : t.leaves()) {
    const auto& dom = va.domain(u.id);
    CHECK(static_cast<int>(dom.size()) == u.position);
  }
}

TEST_CASE("goriot references are all direct") {
  Document d = load_doc("goriot.vxd");
  Analysis a = analyze_document(d);
  REQUIRE(a.classification);
  CHECK(a.references.links.size() == 15);
  CHECK(a.classification->counts.direct == 15);
  CHECK(a.classification->counts.indirect == 0);
  CHECK(a.classification->counts.inaccessible == 0);
  // The bridge keeps its name and direction.
  const ReferenceLink& bridge = a.references.links.back();
  CHECK(bridge.kind == ReferenceKind::kBridge);
  CHECK(bridge.source == "P72");
  CHECK(bridge.target == "P71");
  CHECK(bridge.name == "POSS");
}

TEST_CASE("indirect and inaccessible references") {
  // demo4 shape: U2 is not in the domain of U4.
  const char* base =
      "<body><p><seg type=\"unit\" id=\"U1\">a <rs id=\"A\">x</rs></seg>"
      "<seg type=\"unit\" id=\"U2\"><rs id=\"B\">y</rs></seg>"
      "<seg type=\"unit\" id=\"U3\">c</seg>"
      "<seg type=\"unit\" id=\"U4\"><rs id=\"D\">z</rs></seg></p>"
      "<linkGrp type=\"relation\">"
      "<link id=\"L1\" targets=\"U1 L2\" nuclei=\"U1\"/>"
      "<link id=\"L2\" targets=\"L3 U4\" nuclei=\"L3 U4\"/>"
      "<link id=\"L3\" targets=\"U2 U3\" nuclei=\"U3\"/></linkGrp>";
  SUBCASE("inaccessible") {
    Document d = parse_document(std::string(base) +
                                "<linkGrp type=\"coref\"><link targets=\"D B\"/></linkGrp></body>");
    Analysis a = analyze_document(d);
    REQUIRE(a.classification);
    CHECK(a.classification->labels == std::vector<ReferenceClass>{ReferenceClass::kInaccessible});
  }
  SUBCASE("indirect through another mention of the chain") {
    Document d = parse_document(std::string(base) +
                                "<linkGrp type=\"coref\"><link targets=\"D B\"/>"
                                "<link targets=\"B A\"/></linkGrp></body>");
    Analysis a = analyze_document(d);
    REQUIRE(a.classification);
    CHECK(a.classification->labels ==
          std::vector<ReferenceClass>{ReferenceClass::kIndirect, ReferenceClass::kDirect});
    CHECK(a.classification->counts.indirect == 1);
  }
  SUBCASE("rs outside every unit") {
    Document d = parse_document(
        "<body><p><seg type=\"unit\" id=\"U1\"><rs id=\"A\">x</rs></seg>"
        "<seg type=\"unit\" id=\"U2\">y</seg> <rs id=\"Z\">z</rs></p>"
        "<linkGrp type=\"relation\"><link id=\"L1\" targets=\"U1 U2\" nuclei=\"U1\"/></linkGrp>"
        "<linkGrp type=\"coref\"><link targets=\"Z A\"/></linkGrp></body>");
    CHECK(error_of([&] { analyze_document(d); }) == ErrorCode::kUnmappedRs);
  }
}

TEST_CASE("reference class names") {
  CHECK(reference_class_name(ReferenceClass::kDirect) == "direct");
  CHECK(reference_class_name(ReferenceClass::kIndirect) == "indirect");
  CHECK(reference_class_name(ReferenceClass::kInaccessible) == "inaccessible");
}

TEST_CASE("vein strings parse back with positions") {
  DiscourseTree t = tree_of(load_doc("demo4.vxd"));
  VeinAnnotation va = annotate_veins(t);
  for (const UnitRef& u : t.leaves()) {
    VeinExpr e = VeinExpr::parse(va.vein(u.id).to_string(), positions(t));
    CHECK(e == va.vein(u.id));
  }
}
