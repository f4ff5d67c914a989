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

// Per-tick policies: a skill-driven agent that executes a convention plan,
// and the shared machinery that turns one work unit into skill commands.

#ifndef COOKPLAN_AGENTS_HPP_
#define COOKPLAN_AGENTS_HPP_

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cookplan/convention.hpp"
#include "cookplan/kitchen.hpp"
#include "cookplan/skills.hpp"

namespace cookplan {

class Policy {
 public:
  virtual ~Policy() = default;
  virtual Action act(const GameState& state, const Layout& layout) = 0;
  virtual std::string name() const = 0;
};

class StayPolicy : public Policy {
 public:
  Action act(const GameState&, const Layout&) override { return Action::Stay; }
  std::string name() const override { return "stay"; }
};

/// One concrete unit of kitchen work.
struct WorkUnit {
  WorkKind kind = WorkKind::Fetch;
  GridPos pot;
  Ingredient ingredient = Ingredient::Onion;
  GridPos source;  // ingredient dispenser (Fetch) or dish source (Deliver)
  GridPos port;    // Deliver only

  static WorkUnit from(const ConventionEntry& e, Ingredient objective);
  friend bool operator==(const WorkUnit&, const WorkUnit&) = default;
};

/// Drives the skill executor through a sequence of work units. `next_unit`
/// is consulted whenever the current unit completes or is abandoned.
class UnitDriver {
 public:
  UnitDriver(PlayerId self, EpisodeConfig config) : self_(self), config_(config) {}

  /// Action for this tick while working on `unit`. Sets `completed` when the
  /// unit has nothing left to do.
  Action step(const WorkUnit& unit, const GameState& state, const Layout& layout, bool& completed);

  /// Action that puts down whatever the player holds that `unit` cannot use.
  /// nullopt when the hands are already fine for it.
  std::optional<SkillCommand> clear_hands(const WorkUnit* unit, const GameState& state,
                                          const Layout& layout) const;

  /// Step toward the nearest tile not next to any station, so an idle
  /// player does not block one. Stay when already there.
  Action park(const GameState& state, const Layout& layout) const;

  PlayerId self() const { return self_; }
  const EpisodeConfig& config() const { return config_; }

 private:
  std::optional<SkillCommand> desired(const WorkUnit& unit, const GameState& state, const Layout& layout,
                                      bool& completed);
  Action drive(const SkillCommand& cmd, const GameState& state, const Layout& layout, bool& done);

  PlayerId self_;
  EpisodeConfig config_;
  std::optional<SkillProgress> progress_;
  bool served_ = false;  // current Deliver unit has handed in its soup
  std::optional<WorkUnit> last_unit_;
  HeldItem::Kind last_held_ = HeldItem::Kind::Nothing;
};

/// Executes its side of a convention in order, cycling back to the first
/// entry after the last one. Stays when the plan is empty.
class ConventionAgent : public Policy {
 public:
  ConventionAgent(PlayerId self, const Convention& convention, EpisodeConfig config = {});

  Action act(const GameState& state, const Layout& layout) override;
  std::string name() const override { return "convention"; }

  std::size_t current_entry() const { return index_; }

 private:
  std::vector<WorkUnit> units_;
  UnitDriver driver_;
  std::size_t index_ = 0;
};

}  // namespace cookplan

#endif  // COOKPLAN_AGENTS_HPP_
