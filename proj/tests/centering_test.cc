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

#include <algorithm>
#include <queue>

#include "doctest.h"
#include "support/fixtures.h"
#include "veintex/centering.h"
#include "veintex/text.h"

using namespace veintex;
using veintex::testing::error_of;
using veintex::testing::load_doc;

namespace {

// Connected components by breadth-first search over an undirected
// adjacency list. Returns sorted component sizes.
std::vector<std::size_t> bfs_component_sizes(
    const std::vector<std::string>& nodes,
    const std::vector<std::pair<std::string, std::string>>& edges) {
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& n : nodes) adj[fold_case(n)];
  for (const auto& [a, b] : edges) {
    adj[fold_case(a)].push_back(fold_case(b));
    adj[fold_case(b)].push_back(fold_case(a));
  }
  std::set<std::string> seen;
  std::vector<std::size_t> sizes;
  for (const auto& [start, _] : adj) {
    if (seen.count(start)) continue;
    std::size_t count = 0;
    std::queue<std::string> q;
    q.push(start);
    seen.insert(start);
    while (!q.empty()) {
      std::string cur = q.front();
      q.pop();
      ++count;
      for (const auto& nb : adj[cur]) {
        if (seen.insert(nb).second) q.push(nb);
      }
    }
    sizes.push_back(count);
  }
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

// Transition lookup written as a two-by-two table: rows ask whether the
// backward center carried over, columns whether it is the preferred center.
// An undefined previous center only rescues the continuation cell; any other
// combination without a carried-over center is an abrupt shift.
Transition table_transition(const std::optional<std::string>& prev_cb,
                            const std::optional<std::string>& cb,
                            const std::optional<std::string>& cp) {
  if (!cb.has_value()) return Transition::kNoCb;
  bool col_cp = cp.has_value() && cp == cb;
  bool row_same = prev_cb.has_value() ? prev_cb == cb : col_cp;
  static const Transition table[2][2] = {
      {Transition::kAbruptShift, Transition::kSmoothShift},
      {Transition::kRetaining, Transition::kContinuation}};
  return table[row_same][col_cp];
}

CenteringUnit unit(std::string id, std::vector<std::string> cf) {
  CenteringUnit u;
  u.id = id;
  u.cf.unit = id;
  u.cf.centers = cf;
  u.chains = {cf.begin(), cf.end()};
  return u;
}

}  // namespace

TEST_CASE("goriot chains match a breadth-first component search") {
  Document d = load_doc("goriot.vxd");
  Analysis a = analyze_document(d);
  const Chains& chains = a.chains;

  auto pairs = a.references.coref_pairs();
  CHECK(pairs.size() == 14);
  auto expected = bfs_component_sizes(a.references.rs_ids, pairs);

  std::vector<std::size_t> got;
  for (const auto& id : chains.chain_ids()) got.push_back(chains.members(id).size());
  std::sort(got.begin(), got.end());
  CHECK(got == expected);

  // Multi-mention chains are named after their earliest mention.
  std::map<std::string, std::size_t> multi;
  for (const auto& id : chains.chain_ids()) {
    if (chains.members(id).size() > 1) multi[id] = chains.members(id).size();
  }
  CHECK(multi == std::map<std::string, std::size_t>{
                     {"P65", 3}, {"P66", 8}, {"P72", 4}, {"P74", 3}});
  CHECK(chains.chain_of("p67") == "P66");
  CHECK(chains.chain_of("unknown") == "unknown");
}

TEST_CASE("chains from explicit links") {
  std::vector<std::string> rs = {"A", "B", "C", "D", "E"};
  std::vector<std::pair<std::string, std::string>> links = {{"C", "A"}, {"E", "D"}, {"d", "c"}};
  Chains c = build_chains(rs, links);
  CHECK(c.size() == 2);
  CHECK(c.members("A") == std::vector<std::string>{"A", "C", "D", "E"});
  CHECK(c.members("B") == std::vector<std::string>{"B"});
  CHECK(c.chain_ids() == std::vector<std::string>{"A", "B"});
}

TEST_CASE("forward-looking centers follow text order without repeats") {
  std::vector<std::string> rs = {"A", "B", "C"};
  std::vector<std::pair<std::string, std::string>> links = {{"C", "A"}};
  Chains c = build_chains(rs, links);
  std::vector<std::string> in_unit = {"B", "C", "A"};
  CfList cf = derive_cf("U1", in_unit, c);
  CHECK(cf.centers == std::vector<std::string>{"B", "A"});
  CHECK(cf.cp() == std::optional<std::string>("B"));
  CHECK_FALSE(derive_cf("U2", {}, c).cp().has_value());

  CHECK(compute_cb(cf, {"A"}) == std::optional<std::string>("A"));
  CHECK(compute_cb(cf, {"A", "B"}) == std::optional<std::string>("B"));
  CHECK_FALSE(compute_cb(cf, {"Z"}).has_value());
}

TEST_CASE("transition classification agrees with the table on every pattern") {
  std::vector<std::optional<std::string>> values = {std::nullopt, "a", "b", "c"};
  int cases = 0;
  for (const auto& prev : values) {
    for (const auto& cb : values) {
      for (const auto& cp : values) {
        CAPTURE(prev.value_or("-"));
        CAPTURE(cb.value_or("-"));
        CAPTURE(cp.value_or("-"));
        CHECK(classify_transition(prev, cb, cp) == table_transition(prev, cb, cp));
        ++cases;
      }
    }
  }
  CHECK(cases == 64);
  // No earlier backward center and a non-preferred Cb.
  CHECK(classify_transition(std::nullopt, "a", "b") == Transition::kAbruptShift);
  CHECK(classify_transition("a", "a", "b") == Transition::kRetaining);
}

TEST_CASE("default scores and names") {
  ScoreTable t;
  CHECK(t.score(Transition::kContinuation) == 4);
  CHECK(t.score(Transition::kRetaining) == 3);
  CHECK(t.score(Transition::kSmoothShift) == 2);
  CHECK(t.score(Transition::kAbruptShift) == 1);
  CHECK(t.score(Transition::kNoCb) == 0);
  for (auto k : {Transition::kContinuation, Transition::kRetaining, Transition::kSmoothShift,
                 Transition::kAbruptShift, Transition::kNoCb}) {
    CHECK(transition_from_name(transition_name(k)) == k);
  }
  CHECK(transition_name(Transition::kSmoothShift) == "smooth-shift");
  CHECK_FALSE(transition_from_name("shift").has_value());
  t.set(Transition::kNoCb, 1);
  CHECK(t.score(Transition::kNoCb) == 1);
  CHECK(error_of([&] { t.set(Transition::kRetaining, -1); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("averages round half up") {
  // The aggregated corpus rows.
  CHECK(Average{109, 47}.to_string() == "2.32");
  CHECK(Average{116, 47}.to_string() == "2.47");
  CHECK(Average{142, 65}.to_string() == "2.18");
  CHECK(Average{152, 65}.to_string() == "2.34");
  CHECK(Average{327, 173}.to_string() == "1.89");
  CHECK(Average{352, 173}.to_string() == "2.03");
  CHECK(Average{76, 59}.to_string() == "1.29");
  CHECK(Average{84, 59}.to_string() == "1.42");
  CHECK(Average{1, 8}.to_string() == "0.13");  // 0.125 rounds up
  CHECK(Average{5, 0}.to_string() == "-");
  CHECK(Average{7, 2}.to_string(0) == "4");
}

TEST_CASE("CT and VT scoring on a small sequence") {
  // U1 [a b], U2 [a], U3 [b], U4 [c]
  std::vector<CenteringUnit> units = {unit("U1", {"a", "b"}), unit("U2", {"a"}),
                                      unit("U3", {"b"}), unit("U4", {"c"})};
  SmoothnessReport ct = ct_score(units);
  REQUIRE(ct.transitions.size() == 3);
  CHECK(ct.transitions[0].kind == Transition::kContinuation);
  CHECK(ct.transitions[1].kind == Transition::kNoCb);
  CHECK(ct.transitions[2].kind == Transition::kNoCb);
  CHECK(ct.total == 4);

  // Domains: U3 sees U1 directly, U4 sees U3.
  auto item = [](const char* u, int p) { return VeinItem{u, p, false}; };
  std::map<std::string, std::vector<VeinItem>> domains = {
      {"u1", {item("U1", 1)}},
      {"u2", {item("U1", 1), item("U2", 2)}},
      {"u3", {item("U1", 1), item("U3", 3)}},
      {"u4", {item("U3", 3), item("U4", 4)}}};
  CHECK(vt_predecessor("U3", domains) == std::optional<std::string>("U1"));
  CHECK_FALSE(vt_predecessor("U1", domains).has_value());
  SmoothnessReport vt = vt_score(units, domains);
  REQUIRE(vt.transitions.size() == 3);
  CHECK(vt.transitions[1].from_unit == std::optional<std::string>("U1"));
  // U1 -> U3: b is realized; previous Cb of U1 is undefined, Cp(U3) = b.
  CHECK(vt.transitions[1].kind == Transition::kContinuation);
  CHECK(vt.total == 8);

  ComparisonRow row = comparison_report(ct, vt, "toy");
  CHECK(row.transitions == 3);
  CHECK(row.ct_average().to_string() == "1.33");
  CHECK(row.vt_average().to_string() == "2.67");
}

TEST_CASE("scoring needs two units") {
  std::vector<CenteringUnit> one = {unit("U1", {"a"})};
  CHECK(error_of([&] { ct_score(one); }) == ErrorCode::kTooFewUnits);
  CHECK(error_of([&] { vt_score(one, {}); }) == ErrorCode::kTooFewUnits);
}

TEST_CASE("goriot CT and VT totals") {
  Analysis a = analyze_document(load_doc("goriot.vxd"));
  REQUIRE(a.ct);
  REQUIRE(a.vt);
  CHECK(a.ct->transitions.size() == 9);
  CHECK(a.ct->total == 14);
  CHECK(a.vt->total == 14);
  std::vector<std::string> kinds;
  for (const auto& t : a.ct->transitions) kinds.emplace_back(transition_name(t.kind));
  CHECK(kinds == std::vector<std::string>{"continuation", "no-cb", "no-cb", "no-cb", "no-cb",
                                          "continuation", "continuation", "smooth-shift",
                                          "no-cb"});
}

TEST_CASE("comparison output") {
  std::vector<ComparisonRow> rows = {{"Eng", 59, 76, 84}, {"Fr", 47, 109, 116}};
  std::string csv = comparison_csv(rows);
  CHECK(csv.rfind("Source,No. of transitions,CT Score,Average CT score per transition,"
                  "VT score,Average VT score per transition\n",
                  0) == 0);
  CHECK(csv.find("Eng,59,76,1.29,84,1.42\n") != std::string::npos);
  CHECK(csv.find("Total,106,185,1.75,200,1.89\n") != std::string::npos);
  std::vector<ComparisonRow> single = {rows[0]};
  CHECK(comparison_csv(single).find("Total") == std::string::npos);
  CHECK(comparison_text(rows).find("Eng") != std::string::npos);

  SmoothnessReport a, b;
  a.transitions.resize(2);
  b.transitions.resize(3);
  CHECK(error_of([&] { comparison_report(a, b); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("segment scores ignore pairs that cross the segment edge") {
  std::vector<CenteringUnit> units = {unit("U1", {"a"}), unit("U2", {"a"}), unit("U3", {"a"}),
                                      unit("U4", {"a"})};
  std::span<const CenteringUnit> segment(units.data() + 2, 2);
  SmoothnessReport ct = ct_score(segment);
  REQUIRE(ct.transitions.size() == 1);
  CHECK(ct.transitions[0].from_unit == std::optional<std::string>("U3"));
  CHECK(ct.total == 4);
  // U4 reaches back to U2 through its domain, but U2 lies outside the range.
  auto item = [](const char* u, int p) { return VeinItem{u, p, false}; };
  std::map<std::string, std::vector<VeinItem>> domains = {
      {"u3", {item("U3", 3)}}, {"u4", {item("U2", 2), item("U4", 4)}}};
  SmoothnessReport vt = vt_score(segment, domains);
  REQUIRE(vt.transitions.size() == 1);
  CHECK_FALSE(vt.transitions[0].from_unit.has_value());
  CHECK(vt.transitions[0].kind == Transition::kNoCb);
}
