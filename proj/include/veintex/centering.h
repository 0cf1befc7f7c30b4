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

// Centering: coreference chains, Cf lists, Cb, transition classes and the
// smoothness scores computed either over sequential units (CT) or over
// accessibility domains (VT).

#ifndef VEINTEX_CENTERING_H_
#define VEINTEX_CENTERING_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "veintex/veins.h"

namespace veintex {

// Partition of rs ids into coreference chains. A chain is named by its
// earliest member in text order.
class Chains {
 public:
  // rs ids in text order.
  const std::vector<std::string>& members(const std::string& chain) const;
  // Case-insensitive; unknown ids map to themselves.
  std::string chain_of(std::string_view rs) const;
  // Chain ids ordered by first mention.
  std::vector<std::string> chain_ids() const;
  std::size_t size() const { return members_.size(); }
  // rs id (case-folded) -> chain id.
  const std::map<std::string, std::string>& assignment() const { return chain_of_; }

 private:
  friend Chains build_chains(std::span<const std::string>,
                             std::span<const std::pair<std::string, std::string>>);
  std::map<std::string, std::string> chain_of_;
  std::map<std::string, std::vector<std::string>> members_;
  std::vector<std::string> order_;
};

// Union-find closure of the coreference links over `rs_ids` (text order).
// Ids named only by links are added after the listed ones.
Chains build_chains(std::span<const std::string> rs_ids,
                    std::span<const std::pair<std::string, std::string>> coref_links);

struct CfList {
  std::string unit;
  std::vector<std::string> centers;
  std::optional<std::string> cp() const {
    if (centers.empty()) return std::nullopt;
    return centers.front();
  }
};

// Centers ranked by first mention within the unit.
CfList derive_cf(const std::string& unit, std::span<const std::string> rs_in_unit,
                 const Chains& chains);

std::optional<std::string> compute_cb(const CfList& previous,
                                      const std::set<std::string>& current_chains);

enum class Transition { kContinuation, kRetaining, kSmoothShift, kAbruptShift, kNoCb };
std::string_view transition_name(Transition t);
std::optional<Transition> transition_from_name(std::string_view name);

Transition classify_transition(const std::optional<std::string>& previous_cb,
                               const std::optional<std::string>& cb,
                               const std::optional<std::string>& cp);

// Elementary transition scores. Defaults are the standard smoothness table.
struct ScoreTable {
  int continuation = 4;
  int retaining = 3;
  int smooth_shift = 2;
  int abrupt_shift = 1;
  int no_cb = 0;

  int score(Transition t) const;
  void set(Transition t, int value);
};

// Exact rational average rendered with round-half-up to two decimals.
struct Average {
  std::int64_t total = 0;
  std::int64_t count = 0;
  double value() const { return count ? static_cast<double>(total) / count : 0.0; }
  std::string to_string(int decimals = 2) const;
};

struct TransitionRecord {
  std::optional<std::string> from_unit;  // context unit; absent when VT finds none
  std::string to_unit;
  std::optional<std::string> cb;
  Transition kind = Transition::kNoCb;
  int score = 0;
};

enum class ScoreMode { kCT, kVT };

struct SmoothnessReport {
  ScoreMode mode = ScoreMode::kCT;
  std::vector<TransitionRecord> transitions;
  int total = 0;
  Average average() const { return {total, static_cast<std::int64_t>(transitions.size())}; }
};

// Per-unit centering input, in text order.
struct CenteringUnit {
  std::string id;
  CfList cf;
  std::set<std::string> chains;  // chains realized in the unit
};

// Throws TooFewUnits for fewer than two units. Any contiguous sub-range of
// units can be scored the same way (segment scores).
SmoothnessReport ct_score(std::span<const CenteringUnit> units, const ScoreTable& table = {});

// Nearest unit before `unit` in its accessibility domain.
std::optional<std::string> vt_predecessor(std::string_view unit,
                                          const std::map<std::string, std::vector<VeinItem>>& domains);

SmoothnessReport vt_score(std::span<const CenteringUnit> units,
                          const std::map<std::string, std::vector<VeinItem>>& domains,
                          const ScoreTable& table = {});

// One row of the CT-vs-VT comparison table.
struct ComparisonRow {
  std::string source;
  std::int64_t transitions = 0;
  std::int64_t ct_total = 0;
  std::int64_t vt_total = 0;
  Average ct_average() const { return {ct_total, transitions}; }
  Average vt_average() const { return {vt_total, transitions}; }
};

ComparisonRow comparison_report(const SmoothnessReport& ct, const SmoothnessReport& vt,
                                std::string source = {});
// Sums counts and totals; averages are recomputed from the sums.
ComparisonRow aggregate(std::span<const ComparisonRow> rows, std::string source = "Total");

// CSV with the standard column headers; a Total row is appended when there
// is more than one row.
std::string comparison_csv(std::span<const ComparisonRow> rows);
std::string comparison_text(std::span<const ComparisonRow> rows);

}  // namespace veintex

#endif  // VEINTEX_CENTERING_H_
