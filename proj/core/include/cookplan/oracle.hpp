// Copyright 2026 The cookplan Authors
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

// Deterministic reference reasoner for every planning sub-problem, plus the
// instruction grammar used to generate and interpret benchmark instructions.

#ifndef COOKPLAN_ORACLE_HPP_
#define COOKPLAN_ORACLE_HPP_

#include <cstdint>
#include <map>
#include <utility>
#include <tuple>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cookplan/convention.hpp"
#include "cookplan/kitchen.hpp"

namespace cookplan {

class OracleError : public std::runtime_error {
 public:
  enum class Code {
    AmbiguousDescriptor,
    UnknownPot,
    NoCandidate,
    UnsupportedInstruction,
    UnsupportedPrompt,
  };

  OracleError(Code code, const std::string& message)
      : std::runtime_error(std::string(name(code)) + ": " + message), code_(code) {}

  Code code() const noexcept { return code_; }
  static std::string_view name(Code c);

 private:
  Code code_;
};

/// Tile coordinates a planner needs, each list in listing order.
struct LayoutFacts {
  std::vector<GridPos> pots;
  std::vector<GridPos> onions;
  std::vector<GridPos> tomatoes;
  std::vector<GridPos> dishes;
  std::vector<GridPos> ports;

  static LayoutFacts of(const Layout& layout);
  const std::vector<GridPos>& sources(Ingredient i) const {
    return i == Ingredient::Onion ? onions : tomatoes;
  }

  friend bool operator==(const LayoutFacts&, const LayoutFacts&) = default;
};

// --- Sub-problem solvers ---------------------------------------------------

GridPos resolve_pot(const PotDescriptor& d, const std::vector<GridPos>& pots);

/// All -> every pot; NotMentioned -> none; Named -> each descriptor resolved,
/// duplicates dropped, first occurrence kept.
std::vector<GridPos> resolve_pots(const PotSelector& selector, const std::vector<GridPos>& pots);

/// The AI's work units: Fetch items for the fetch pots, then Deliver items for
/// the delivery pots, each group in listing order.
std::vector<RoughWorkItem> ai_assignment(const KeyInfo& info, const std::vector<GridPos>& pots);

/// Every (kind, pot) unit not taken by the AI, Fetches first, in listing order.
std::vector<RoughWorkItem> complement_assignment(const std::vector<RoughWorkItem>& ai_items,
                                                 const std::vector<GridPos>& pots);

RoughPlan rough_plan(const KeyInfo& info, const std::vector<GridPos>& pots);

/// Candidates left after applying every constraint on `item`, in listing order.
std::vector<GridPos> filter_sources(const std::vector<GridPos>& candidates, SourceItem item,
                                    const std::vector<SourceConstraint>& constraints);

/// The unique tile at the extreme named by `where`. Throws AmbiguousDescriptor.
GridPos extreme_tile(const std::vector<GridPos>& tiles, SourceDescriptor where);

/// Nearest compatible source (manhattan to the pot; first listed wins ties).
RefinedWorkItem refine(const RoughWorkItem& item, const LayoutFacts& facts, Ingredient objective,
                       const std::vector<SourceConstraint>& constraints = {});

int estimate_time(const RefinedWorkItem& item);

/// Greedy wait-filling order. Items need est_steps set. A Deliver becomes
/// ready `cook_wait` steps after the last Fetch for its pot finishes; a pot
/// with no Fetch in the list is treated as filled elsewhere.
std::vector<RoughWorkItem> schedule(const std::vector<RoughWorkItem>& items, int cook_wait = 20);

/// Start time of every item when executed back to back with idle waits.
std::vector<int> simulate_start_times(const std::vector<RoughWorkItem>& order, int cook_wait = 20);

// --- Instruction grammar ---------------------------------------------------

/// Coordination preference expressed with 1-based pot numbers. An empty set
/// means the AI does no work of that kind.
struct PreferenceSpec {
  Ingredient objective = Ingredient::Onion;
  std::vector<int> placement_pots;
  std::vector<int> delivery_pots;
  std::vector<SourceConstraint> source_constraints;

  friend bool operator==(const PreferenceSpec&, const PreferenceSpec&) = default;
};

/// Throws std::invalid_argument when the spec cannot be planned on `layout`.
void validate(const PreferenceSpec& spec, const Layout& layout);

/// A random spec in the generator's domain.
PreferenceSpec random_spec(const Layout& layout, std::uint64_t seed);

/// Renders a spec through one of the fixed English templates, picked by seed.
std::string gen_instruction(const PreferenceSpec& spec, const Layout& layout, std::uint64_t seed);

/// Reads an instruction written in the template grammar (feedback sentences
/// appended). Later clauses override earlier ones. Throws OracleError.
KeyInfo interpret_instruction(std::string_view text);

// --- Ground truth ----------------------------------------------------------

struct GroundTruth {
  LayoutFacts facts;
  KeyInfo key_info;
  RoughPlan rough;
  std::map<std::pair<PlayerId, std::pair<WorkKind, GridPos>>, RefinedWorkItem> refined;
  std::map<std::pair<PlayerId, std::pair<WorkKind, GridPos>>, int> times;
  std::vector<RoughWorkItem> ai_schedule;
  std::vector<RoughWorkItem> human_schedule;
  Convention convention;
};

GroundTruth ground_truth(const PreferenceSpec& spec, const Layout& layout, int cook_wait = 20);

/// Same pipeline, starting from already interpreted key information.
GroundTruth ground_truth(const KeyInfo& info, const LayoutFacts& facts, int cook_wait = 20);

/// Pots named by each selector, as sorted coordinate sets, plus constraints.
struct NormalizedKeyInfo {
  Ingredient objective;
  std::set<GridPos> fetch;
  std::set<GridPos> deliver;
  std::set<std::tuple<int, int, int>> constraints;

  friend bool operator==(const NormalizedKeyInfo&, const NormalizedKeyInfo&) = default;
};

NormalizedKeyInfo normalize(const KeyInfo& info, const std::vector<GridPos>& pots);

// --- Prompt answering ------------------------------------------------------

enum class PromptKind { KeyInfo, Rough, Refine, Time, RefineTime, Schedule, Unknown };

std::string_view to_string(PromptKind k);

/// Recognises which planning sub-problem a prompt poses.
PromptKind classify_prompt(std::string_view prompt);

/// The text after the last "Now, " marker, up to the closing request line.
std::string query_block(std::string_view prompt);

/// Answers a planning prompt in the few-shot answer format. Throws OracleError.
std::string oracle_answer(std::string_view prompt);

}  // namespace cookplan

#endif  // COOKPLAN_ORACLE_HPP_
