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

// Temporally extended Fetch/Deliver skills driven by shortest-path control.

#ifndef COOKPLAN_SKILLS_HPP_
#define COOKPLAN_SKILLS_HPP_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cookplan/errors.hpp"
#include "cookplan/kitchen.hpp"

namespace cookplan {

enum class SkillKind : std::uint8_t { Fetch, Deliver };
enum class SkillItem : std::uint8_t { Onion, Tomato, Dish, Soup };

std::string_view to_string(SkillItem item);
SkillItem skill_item(Ingredient i);

/// "Fetch <item> at <pos>" / "Deliver <item> to <pos>".
struct SkillCommand {
  SkillKind kind = SkillKind::Fetch;
  SkillItem item = SkillItem::Onion;
  GridPos target;

  friend bool operator==(const SkillCommand&, const SkillCommand&) = default;
};

std::string to_string(const SkillCommand& c);

/// Parses `Fetch <item> at (<r>,<c>)` or `Deliver <item> to (<r>,<c>)`,
/// case-insensitively, anywhere in a single line. Articles before the item
/// ("the dish", "an onion") and plurals are accepted. Throws ParseError.
SkillCommand parse_skill(std::string_view text);

enum class SkillPhase : std::uint8_t { Navigating, Interacting, Done, Failed };
enum class SkillFailure : std::uint8_t { None, Unreachable, PreconditionLost };

std::string_view to_string(SkillPhase p);
std::string_view to_string(SkillFailure f);

struct SkillProgress {
  SkillCommand command;
  SkillPhase phase = SkillPhase::Navigating;
  SkillFailure failure = SkillFailure::None;
  int partner_wait = 0;  // consecutive ticks spent waiting on the partner
  std::optional<GridPos> blocker;  // partner tile being waited on or routed around
  int detour_left = 0;   // moves still committed to routing around `blocker`
  int retreat_left = 0;  // ticks left backing away from a partner with no way around
  int ticks = 0;         // actions emitted so far
  bool interacted = false;
  std::optional<GridPos> last_pos;
  bool last_was_move = false;

  static SkillProgress start(SkillCommand c) {
    SkillProgress p;
    p.command = c;
    return p;
  }
  bool finished() const { return phase == SkillPhase::Done || phase == SkillPhase::Failed; }
};

/// Ticks a skill waits behind a blocking partner before routing around it.
/// The human side waits twice as long, so in a head-on meeting only one
/// player turns back.
inline constexpr int kPartnerWaitBudget = 3;
/// Ticks spent backing away when the partner cannot be routed around.
inline constexpr int kRetreatTicks = 3;

class PathError : public std::runtime_error {
 public:
  explicit PathError(std::string what) : std::runtime_error(std::move(what)) {}
};

/// Shortest action sequence that brings the player standing on `from` onto a
/// floor tile next to `goal` and facing it. Moves into blocked tiles only
/// turn the player, so the search runs over (tile, facing) pairs. The other
/// player's tile counts as blocked. Throws PathError when no such tile is
/// reachable.
std::vector<Action> plan_path(const Layout& layout, const GameState& state, GridPos from,
                              GridPos goal);

/// One closed-loop control tick for `agent`. Returns the action to take and
/// the updated progress. Finished progress yields Stay and is returned as is.
std::pair<Action, SkillProgress> skill_step(const Layout& layout, const GameState& state,
                                            PlayerId agent, SkillProgress progress,
                                            const EpisodeConfig& config = {});

}  // namespace cookplan

#endif  // COOKPLAN_SKILLS_HPP_
