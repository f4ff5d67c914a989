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

// Typed planner artifacts, from parsed intent to an ordered per-agent plan,
// together with the text parsers and renderers for each of them. The text
// forms anchor on fixed template phrases ("refined work content is:",
// "approximate time is:", "adjusted to:") so that model answers written in
// the example format parse reliably.

#ifndef COOKPLAN_CONVENTION_HPP_
#define COOKPLAN_CONVENTION_HPP_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cookplan/errors.hpp"
#include "cookplan/kitchen.hpp"

namespace cookplan {

// --- Key information -------------------------------------------------------

struct PotDescriptor {
  enum class Kind : std::uint8_t { Left, Middle, Right, Below, Above, Coord };
  Kind kind = Kind::Left;
  GridPos coord;  // Coord only

  static PotDescriptor at(GridPos p) { return {Kind::Coord, p}; }
  friend bool operator==(const PotDescriptor&, const PotDescriptor&) = default;
};

std::string describe(const PotDescriptor& d);

struct PotSelector {
  enum class Kind : std::uint8_t { All, NotMentioned, Named };
  Kind kind = Kind::All;
  std::vector<PotDescriptor> named;  // non-empty iff Named

  static PotSelector all() { return {Kind::All, {}}; }
  static PotSelector not_mentioned() { return {Kind::NotMentioned, {}}; }
  static PotSelector of(std::vector<PotDescriptor> pots);

  friend bool operator==(const PotSelector&, const PotSelector&) = default;
};

std::string describe(const PotSelector& s);
PotSelector parse_pot_selector(std::string_view text);

enum class SourceItem : std::uint8_t { Onion, Tomato, Dish };
enum class SourceDescriptor : std::uint8_t { Below, Above, Left, Right };

SourceItem source_item(Ingredient i);

struct SourceConstraint {
  enum class Restriction : std::uint8_t { OnlyFrom, Forbidden };
  SourceItem item = SourceItem::Onion;
  Restriction restriction = Restriction::OnlyFrom;
  SourceDescriptor where = SourceDescriptor::Below;

  friend bool operator==(const SourceConstraint&, const SourceConstraint&) = default;
};

/// "only take onions from the onion dots below" /
/// "do not take plates from the plate spots on the left".
std::string describe(const SourceConstraint& c);
/// Noun phrase naming the restricted tiles: "the onion dots below".
std::string describe_sources(SourceItem item, SourceDescriptor where);

/// Every source restriction phrased in the instruction grammar, in text order.
std::vector<SourceConstraint> parse_constraints(std::string_view text);

struct KeyInfo {
  Ingredient objective = Ingredient::Onion;
  PotSelector ai_fetch;
  PotSelector ai_deliver;
  std::vector<SourceConstraint> constraints;

  friend bool operator==(const KeyInfo&, const KeyInfo&) = default;
};

/// Labeled answer block: "Cooking objectives: ... / AI’s jobs: / Fetching
/// vegetables: ... / Delivering food: ...", plus a "Restrictions:" line when
/// constraints exist.
KeyInfo parse_key_info(std::string_view text);
std::string render_key_info(const KeyInfo& info);

/// The numbered key-information block embedded in rough-planning prompts.
std::string render_key_info_query(const KeyInfo& info);

// --- Work items ------------------------------------------------------------

enum class WorkKind : std::uint8_t { Fetch, Deliver };

struct RoughWorkItem {
  PlayerId agent = PlayerId::AI;
  WorkKind kind = WorkKind::Fetch;
  GridPos pot;
  std::optional<int> est_steps;

  friend bool operator==(const RoughWorkItem&, const RoughWorkItem&) = default;
};

/// "Fetch onions for pot at (1,2)" / "Deliver onion soup for pot (1,2)".
std::string render_rough_item(const RoughWorkItem& item, Ingredient objective);
/// Parses one item phrase (no list number). Agent is set to `agent`.
RoughWorkItem parse_rough_item(std::string_view text, PlayerId agent);

struct RoughPlan {
  std::vector<RoughWorkItem> ai;
  std::vector<RoughWorkItem> human;

  friend bool operator==(const RoughPlan&, const RoughPlan&) = default;
};

/// Reads the numbered items under the AI heading and the human heading.
/// A heading followed by "None" yields an empty list.
RoughPlan parse_rough_plan(std::string_view text);
/// Headings plus numbered items; `preamble` lines (pot resolutions) come first.
std::string render_rough_plan(const RoughPlan& plan, Ingredient objective,
                              const std::vector<std::string>& preamble = {});

struct FetchPlan {
  GridPos source;
  GridPos pot;
  friend bool operator==(const FetchPlan&, const FetchPlan&) = default;
};

struct DeliverPlan {
  GridPos dish_source;
  GridPos pot;
  GridPos port;
  friend bool operator==(const DeliverPlan&, const DeliverPlan&) = default;
};

using RefinedWorkItem = std::variant<FetchPlan, DeliverPlan>;

GridPos pot_of(const RefinedWorkItem& item);

/// "Take the onion from position (2,1) and place it in the pot (1,2)." or
/// "Take the plate from (4, 1), then take the food from the pot (1, 3), and
/// finally deliver it to the delivery port (5, 2)."
std::string render_refined(const RefinedWorkItem& item, Ingredient objective);
RefinedWorkItem parse_refined(std::string_view text);

/// Final integer of the "approximate time is:" line.
int parse_time(std::string_view text);

/// Numbered items after "adjusted to:", each optionally suffixed ", N steps".
std::vector<RoughWorkItem> parse_schedule(std::string_view text, PlayerId agent = PlayerId::AI);
/// Numbered "<item>, N steps" lines.
std::string render_timed_items(const std::vector<RoughWorkItem>& items, Ingredient objective);
std::string render_schedule(const std::vector<RoughWorkItem>& items, Ingredient objective);

// --- Convention ------------------------------------------------------------

struct ConventionEntry {
  RoughWorkItem rough;
  RefinedWorkItem refined;
  int est_steps = 0;

  friend bool operator==(const ConventionEntry&, const ConventionEntry&) = default;
};

class InfeasiblePlan : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Convention {
  Ingredient objective = Ingredient::Onion;
  std::vector<ConventionEntry> ai_plan;
  std::vector<ConventionEntry> human_plan;
  std::vector<std::string> transcript_ids;

  /// Builds a convention and checks that, within each plan, every Deliver
  /// for a pot comes after all Fetches for that pot. Throws InfeasiblePlan.
  static Convention make(Ingredient objective, std::vector<ConventionEntry> ai,
                         std::vector<ConventionEntry> human,
                         std::vector<std::string> transcript_ids = {});

  const std::vector<ConventionEntry>& plan_of(PlayerId id) const {
    return id == PlayerId::AI ? ai_plan : human_plan;
  }
};

/// Structural equality on the plans; transcript ids are ignored.
bool same_plan(const Convention& a, const Convention& b);

/// True when no Deliver for a pot precedes a Fetch for the same pot.
bool plan_feasible(const std::vector<RoughWorkItem>& plan);

/// "The work content and execution sequence of AI:" followed by numbered
/// "<rough>, N steps: <refined>" lines, then the same for Human ("None" when
/// empty).
std::string render_convention(const Convention& c);
Convention parse_convention(std::string_view text);

}  // namespace cookplan

#endif  // COOKPLAN_CONVENTION_HPP_
