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

#include "veintex/centering.h"

#include <algorithm>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "veintex/error.h"
#include "veintex/text.h"

namespace veintex {

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<int> rank_;
};

TransitionRecord transition(const std::optional<std::string>& from,
                            const std::optional<std::string>& previous_cb,
                            const CfList* previous_cf, const CenteringUnit& current,
                            const ScoreTable& table) {
  TransitionRecord r;
  r.from_unit = from;
  r.to_unit = current.id;
  if (previous_cf) r.cb = compute_cb(*previous_cf, current.chains);
  r.kind = classify_transition(previous_cb, r.cb, current.cf.cp());
  r.score = table.score(r.kind);
  return r;
}

}  // namespace

const std::vector<std::string>& Chains::members(const std::string& chain) const {
  static const std::vector<std::string> kEmpty;
  auto it = members_.find(chain);
  return it == members_.end() ? kEmpty : it->second;
}

std::string Chains::chain_of(std::string_view rs) const {
  auto it = chain_of_.find(fold_case(rs));
  return it == chain_of_.end() ? std::string(rs) : it->second;
}

std::vector<std::string> Chains::chain_ids() const { return order_; }

Chains build_chains(std::span<const std::string> rs_ids,
                    std::span<const std::pair<std::string, std::string>> coref_links) {
  std::vector<std::string> ids;
  std::map<std::string, std::size_t> slot;
  auto intern = [&](const std::string& id) {
    auto [it, inserted] = slot.emplace(fold_case(id), ids.size());
    if (inserted) ids.push_back(id);
    return it->second;
  };
  for (const std::string& id : rs_ids) intern(id);
  for (const auto& [a, b] : coref_links) {
    intern(a);
    intern(b);
  }
  UnionFind uf(ids.size());
  for (const auto& [a, b] : coref_links) uf.unite(slot.at(fold_case(a)), slot.at(fold_case(b)));

  Chains chains;
  std::map<std::size_t, std::string> name_of_root;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    std::size_t root = uf.find(i);
    auto [it, first] = name_of_root.emplace(root, ids[i]);
    if (first) chains.order_.push_back(ids[i]);
    chains.chain_of_[fold_case(ids[i])] = it->second;
    chains.members_[it->second].push_back(ids[i]);
  }
  return chains;
}

CfList derive_cf(const std::string& unit, std::span<const std::string> rs_in_unit,
                 const Chains& chains) {
  CfList cf;
  cf.unit = unit;
  for (const std::string& rs : rs_in_unit) {
    std::string chain = chains.chain_of(rs);
    if (std::find(cf.centers.begin(), cf.centers.end(), chain) == cf.centers.end()) {
      cf.centers.push_back(chain);
    }
  }
  return cf;
}

std::optional<std::string> compute_cb(const CfList& previous,
                                      const std::set<std::string>& current_chains) {
  for (const std::string& c : previous.centers) {
    if (current_chains.count(c)) return c;
  }
  return std::nullopt;
}

std::string_view transition_name(Transition t) {
  switch (t) {
    case Transition::kContinuation: return "continuation";
    case Transition::kRetaining: return "retaining";
    case Transition::kSmoothShift: return "smooth-shift";
    case Transition::kAbruptShift: return "abrupt-shift";
    case Transition::kNoCb: return "no-cb";
  }
  return "unknown";
}

std::optional<Transition> transition_from_name(std::string_view name) {
  for (Transition t : {Transition::kContinuation, Transition::kRetaining, Transition::kSmoothShift,
                       Transition::kAbruptShift, Transition::kNoCb}) {
    if (iequals(transition_name(t), name)) return t;
  }
  return std::nullopt;
}

Transition classify_transition(const std::optional<std::string>& previous_cb,
                               const std::optional<std::string>& cb,
                               const std::optional<std::string>& cp) {
  if (!cb) return Transition::kNoCb;
  const bool same_as_cp = cp && *cb == *cp;
  const bool same_as_previous = previous_cb && *cb == *previous_cb;
  if (same_as_cp && (!previous_cb || same_as_previous)) return Transition::kContinuation;
  if (same_as_previous && !same_as_cp) return Transition::kRetaining;
  if (!same_as_previous && same_as_cp) return Transition::kSmoothShift;
  return Transition::kAbruptShift;
}

int ScoreTable::score(Transition t) const {
  switch (t) {
    case Transition::kContinuation: return continuation;
    case Transition::kRetaining: return retaining;
    case Transition::kSmoothShift: return smooth_shift;
    case Transition::kAbruptShift: return abrupt_shift;
    case Transition::kNoCb: return no_cb;
  }
  return 0;
}

void ScoreTable::set(Transition t, int value) {
  if (value < 0) {
    throw Error(ErrorCode::kInvalidArgument, "transition weights must be non-negative");
  }
  switch (t) {
    case Transition::kContinuation: continuation = value; break;
    case Transition::kRetaining: retaining = value; break;
    case Transition::kSmoothShift: smooth_shift = value; break;
    case Transition::kAbruptShift: abrupt_shift = value; break;
    case Transition::kNoCb: no_cb = value; break;
  }
}

std::string Average::to_string(int decimals) const {
  if (count == 0) return "-";
  std::int64_t scale = 1;
  for (int i = 0; i < decimals; ++i) scale *= 10;
  // round half up on the exact fraction
  std::int64_t scaled = (2 * total * scale + count) / (2 * count);
  std::ostringstream out;
  out << scaled / scale;
  if (decimals > 0) {
    out << '.' << std::setw(decimals) << std::setfill('0') << scaled % scale;
  }
  return out.str();
}

SmoothnessReport ct_score(std::span<const CenteringUnit> units, const ScoreTable& table) {
  if (units.size() < 2) {
    throw Error(ErrorCode::kTooFewUnits, "scoring needs at least two units");
  }
  SmoothnessReport report;
  report.mode = ScoreMode::kCT;
  std::optional<std::string> previous_cb;
  for (std::size_t i = 1; i < units.size(); ++i) {
    TransitionRecord r = transition(units[i - 1].id, previous_cb, &units[i - 1].cf, units[i], table);
    previous_cb = r.cb;
    report.total += r.score;
    report.transitions.push_back(std::move(r));
  }
  return report;
}

std::optional<std::string> vt_predecessor(
    std::string_view unit, const std::map<std::string, std::vector<VeinItem>>& domains) {
  auto it = domains.find(fold_case(unit));
  if (it == domains.end()) return std::nullopt;
  const VeinItem* self = nullptr;
  for (const VeinItem& i : it->second) {
    if (iequals(i.unit, unit)) self = &i;
  }
  if (!self) return std::nullopt;
  const VeinItem* best = nullptr;
  for (const VeinItem& i : it->second) {
    if (i.position < self->position && (!best || i.position > best->position)) best = &i;
  }
  if (!best) return std::nullopt;
  return best->unit;
}

SmoothnessReport vt_score(std::span<const CenteringUnit> units,
                          const std::map<std::string, std::vector<VeinItem>>& domains,
                          const ScoreTable& table) {
  if (units.size() < 2) {
    throw Error(ErrorCode::kTooFewUnits, "scoring needs at least two units");
  }
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < units.size(); ++i) index[fold_case(units[i].id)] = i;
  std::vector<std::optional<std::string>> cb_of(units.size());

  SmoothnessReport report;
  report.mode = ScoreMode::kVT;
  for (std::size_t i = 1; i < units.size(); ++i) {
    std::optional<std::string> from = vt_predecessor(units[i].id, domains);
    const CfList* previous_cf = nullptr;
    std::optional<std::string> previous_cb;
    if (from) {
      auto it = index.find(fold_case(*from));
      if (it != index.end()) {
        previous_cf = &units[it->second].cf;
        previous_cb = cb_of[it->second];
      } else {
        from.reset();  // predecessor outside the scored range
      }
    }
    TransitionRecord r = transition(from, previous_cb, previous_cf, units[i], table);
    cb_of[i] = r.cb;
    report.total += r.score;
    report.transitions.push_back(std::move(r));
  }
  return report;
}

ComparisonRow comparison_report(const SmoothnessReport& ct, const SmoothnessReport& vt,
                                std::string source) {
  if (ct.transitions.size() != vt.transitions.size()) {
    throw Error(ErrorCode::kInvalidArgument, "CT and VT reports cover different documents");
  }
  ComparisonRow row;
  row.source = std::move(source);
  row.transitions = static_cast<std::int64_t>(ct.transitions.size());
  row.ct_total = ct.total;
  row.vt_total = vt.total;
  return row;
}

ComparisonRow aggregate(std::span<const ComparisonRow> rows, std::string source) {
  ComparisonRow total;
  total.source = std::move(source);
  for (const ComparisonRow& r : rows) {
    total.transitions += r.transitions;
    total.ct_total += r.ct_total;
    total.vt_total += r.vt_total;
  }
  return total;
}

namespace {

std::vector<ComparisonRow> with_total(std::span<const ComparisonRow> rows) {
  std::vector<ComparisonRow> out(rows.begin(), rows.end());
  if (rows.size() > 1) out.push_back(aggregate(rows));
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string comparison_csv(std::span<const ComparisonRow> rows) {
  std::ostringstream out;
  out << "Source,No. of transitions,CT Score,Average CT score per transition,VT score,"
         "Average VT score per transition\n";
  for (const ComparisonRow& r : with_total(rows)) {
    out << csv_field(r.source) << ',' << r.transitions << ',' << r.ct_total << ','
        << r.ct_average().to_string() << ',' << r.vt_total << ',' << r.vt_average().to_string()
        << '\n';
  }
  return out.str();
}

std::string comparison_text(std::span<const ComparisonRow> rows) {
  std::ostringstream out;
  out << std::left << std::setw(16) << "Source" << std::right << std::setw(12) << "Transitions"
      << std::setw(8) << "CT" << std::setw(8) << "CT avg" << std::setw(8) << "VT" << std::setw(8)
      << "VT avg" << '\n';
  for (const ComparisonRow& r : with_total(rows)) {
    out << std::left << std::setw(16) << r.source << std::right << std::setw(12) << r.transitions
        << std::setw(8) << r.ct_total << std::setw(8) << r.ct_average().to_string()
        << std::setw(8) << r.vt_total << std::setw(8) << r.vt_average().to_string() << '\n';
  }
  return out.str();
}

}  // namespace veintex
