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

#include "cookplan/agents.hpp"

#include <algorithm>
#include <climits>
#include <array>
#include <deque>
#include <functional>
#include <map>
#include <set>

namespace cookplan {

WorkUnit WorkUnit::from(const ConventionEntry& e, Ingredient objective) {
  WorkUnit u;
  u.kind = e.rough.kind;
  u.pot = e.rough.pot;
  u.ingredient = objective;
  if (const auto* f = std::get_if<FetchPlan>(&e.refined)) {
    u.source = f->source;
  } else {
    const auto& d = std::get<DeliverPlan>(e.refined);
    u.source = d.dish_source;
    u.port = d.port;
  }
  return u;
}

namespace {

bool has_floor_neighbor(const Layout& layout, GridPos p) {
  for (Direction d : {Direction::North, Direction::South, Direction::West, Direction::East}) {
    if (layout.walkable(neighbor(p, d))) return true;
  }
  return false;
}

GridPos nearest_of(const std::vector<GridPos>& tiles, GridPos from) {
  return *std::min_element(tiles.begin(), tiles.end(), [&](GridPos a, GridPos b) {
    return manhattan(a, from) < manhattan(b, from);
  });
}

bool next_to_station(const Layout& layout, GridPos p) {
  for (Direction d : {Direction::North, Direction::South, Direction::West, Direction::East}) {
    const GridPos n = neighbor(p, d);
    if (!layout.in_bounds(n)) continue;
    const TileKind k = layout.tile(n);
    if (k != TileKind::Floor && k != TileKind::Counter) return true;
  }
  return false;
}

/// Floor tiles whose removal splits the walkable area.
std::set<GridPos> chokepoints(const Layout& layout) {
  std::map<GridPos, int> order, low;
  std::set<GridPos> cut;
  int counter = 0;
  const std::array<Direction, 4> dirs{Direction::North, Direction::South, Direction::West, Direction::East};
  std::function<void(GridPos, std::optional<GridPos>)> visit = [&](GridPos u, std::optional<GridPos> parent) {
    order[u] = low[u] = counter++;
    int children = 0;
    for (Direction d : dirs) {
      const GridPos v = neighbor(u, d);
      if (!layout.walkable(v) || (parent && v == *parent)) continue;
      if (order.count(v)) {
        low[u] = std::min(low[u], order[v]);
        continue;
      }
      ++children;
      visit(v, u);
      low[u] = std::min(low[u], low[v]);
      if (parent && low[v] >= order[u]) cut.insert(u);
    }
    if (!parent && children > 1) cut.insert(u);
  };
  for (int r = 0; r < layout.height(); ++r) {
    for (int c = 0; c < layout.width(); ++c) {
      const GridPos p{r, c};
      if (layout.walkable(p) && !order.count(p)) visit(p, std::nullopt);
    }
  }
  return cut;
}

}  // namespace

Action UnitDriver::park(const GameState& state, const Layout& layout) const {
  const GridPos me = state.player(self_).pos;
  const std::set<GridPos> cut = chokepoints(layout);
  auto in_the_way = [&](GridPos p) { return next_to_station(layout, p) || cut.count(p) > 0; };
  if (!in_the_way(me)) return Action::Stay;
  const GridPos other = state.player(partner_of(self_)).pos;
  // Breadth-first search for the closest tile that leaves stations and
  // passages free; failing that, one that at least leaves stations free.
  std::map<GridPos, Direction> first_step;
  std::deque<GridPos> frontier{me};
  std::optional<GridPos> fallback;
  first_step[me] = Direction::North;
  while (!frontier.empty()) {
    const GridPos cur = frontier.front();
    frontier.pop_front();
    if (cur != me && !in_the_way(cur)) return move_toward(first_step[cur]);
    if (cur != me && !fallback && !next_to_station(layout, cur)) fallback = cur;
    for (Direction d : {Direction::North, Direction::South, Direction::West, Direction::East}) {
      const GridPos n = neighbor(cur, d);
      if (!layout.walkable(n) || n == other || first_step.count(n)) continue;
      // A first step next to the partner could collide with its own move.
      if (cur == me && manhattan(n, other) == 1) continue;
      first_step[n] = cur == me ? d : first_step[cur];
      frontier.push_back(n);
    }
  }
  if (fallback && next_to_station(layout, me)) return move_toward(first_step[*fallback]);
  return Action::Stay;
}

std::optional<SkillCommand> UnitDriver::clear_hands(const WorkUnit* unit, const GameState& state,
                                                    const Layout& layout) const {
  const PlayerState& me = state.player(self_);
  const HeldItem& held = me.held;
  if (held.empty()) return std::nullopt;
  if (held.kind == HeldItem::Kind::SoupDish) {
    if (unit && unit->kind == WorkKind::Deliver) return std::nullopt;
    const auto& ports = layout.tiles_of(TileKind::ServingPort);
    if (ports.empty()) return std::nullopt;
    return SkillCommand{SkillKind::Deliver, SkillItem::Soup, nearest_of(ports, me.pos)};
  }
  if (unit) {
    if (unit->kind == WorkKind::Fetch && held.is_raw(unit->ingredient)) return std::nullopt;
    if (unit->kind == WorkKind::Deliver && held.kind == HeldItem::Kind::CleanDish) return std::nullopt;
  }
  std::optional<GridPos> best;
  int best_d = INT_MAX;
  for (GridPos c : layout.tiles_of(TileKind::Counter)) {
    if (state.counter_items.count(c) || !has_floor_neighbor(layout, c)) continue;
    const int d = manhattan(c, me.pos);
    if (d < best_d) {
      best = c;
      best_d = d;
    }
  }
  if (!best) return std::nullopt;
  const SkillItem item =
      held.kind == HeldItem::Kind::CleanDish ? SkillItem::Dish : skill_item(held.ingredient);
  return SkillCommand{SkillKind::Deliver, item, *best};
}

std::optional<SkillCommand> UnitDriver::desired(const WorkUnit& unit, const GameState& state,
                                                const Layout& layout, bool& completed) {
  const HeldItem& held = state.player(self_).held;
  const PotState& pot = state.pots.at(unit.pot);
  if (unit.kind == WorkKind::Fetch) {
    const SkillItem item = skill_item(unit.ingredient);
    if (held.is_raw(unit.ingredient)) {
      if (pot_accepts(pot, config_)) return SkillCommand{SkillKind::Deliver, item, unit.pot};
      completed = true;
      return std::nullopt;
    }
    if (!held.empty()) return clear_hands(&unit, state, layout);
    if (!pot_accepts(pot, config_)) {
      completed = true;
      return std::nullopt;
    }
    return SkillCommand{SkillKind::Fetch, item, unit.source};
  }
  switch (held.kind) {
    case HeldItem::Kind::SoupDish:
      return SkillCommand{SkillKind::Deliver, SkillItem::Soup, unit.port};
    case HeldItem::Kind::CleanDish:
      // Stand clear of the pot until it has a full recipe in it.
      if (!pot.cook_ticks_remaining) return std::nullopt;
      return SkillCommand{SkillKind::Deliver, SkillItem::Dish, unit.pot};
    case HeldItem::Kind::RawIngredient:
      return clear_hands(&unit, state, layout);
    case HeldItem::Kind::Nothing:
      break;
  }
  if (served_) {
    completed = true;
    return std::nullopt;
  }
  return SkillCommand{SkillKind::Fetch, SkillItem::Dish, unit.source};
}

Action UnitDriver::drive(const SkillCommand& cmd, const GameState& state, const Layout& layout, bool& done) {
  if (!progress_ || progress_->command != cmd || progress_->finished()) progress_ = SkillProgress::start(cmd);
  auto [action, next] = skill_step(layout, state, self_, *progress_, config_);
  progress_ = next;
  if (next.phase == SkillPhase::Done) {
    done = true;
    return Action::Stay;
  }
  if (next.phase == SkillPhase::Failed) {
    // Waiting beside a target that is not ready yet, or blocked this tick.
    progress_.reset();
    return Action::Stay;
  }
  return action;
}

Action UnitDriver::step(const WorkUnit& unit, const GameState& state, const Layout& layout, bool& completed) {
  completed = false;
  if (!last_unit_ || *last_unit_ != unit) {
    last_unit_ = unit;
    served_ = false;
  }
  const HeldItem::Kind now = state.player(self_).held.kind;
  if (unit.kind == WorkKind::Deliver && last_held_ == HeldItem::Kind::SoupDish && now == HeldItem::Kind::Nothing) {
    served_ = true;
  }
  last_held_ = now;
  for (int attempt = 0; attempt < 4; ++attempt) {
    auto cmd = desired(unit, state, layout, completed);
    if (completed) {
      served_ = false;
      last_unit_.reset();
      progress_.reset();
      return Action::Stay;
    }
    if (!cmd) return park(state, layout);
    bool done = false;
    const Action a = drive(*cmd, state, layout, done);
    if (!done) return a;
  }
  return Action::Stay;
}

ConventionAgent::ConventionAgent(PlayerId self, const Convention& convention, EpisodeConfig config)
    : driver_(self, config) {
  for (const auto& e : convention.plan_of(self)) units_.push_back(WorkUnit::from(e, convention.objective));
}

Action ConventionAgent::act(const GameState& state, const Layout& layout) {
  if (units_.empty()) {
    if (auto clear = driver_.clear_hands(nullptr, state, layout)) {
      auto [a, p] = skill_step(layout, state, driver_.self(), SkillProgress::start(*clear), driver_.config());
      return a;
    }
    return driver_.park(state, layout);
  }
  for (std::size_t tries = 0; tries <= units_.size(); ++tries) {
    bool completed = false;
    const Action a = driver_.step(units_[index_], state, layout, completed);
    if (!completed) return a;
    index_ = (index_ + 1) % units_.size();
  }
  return driver_.park(state, layout);
}

}  // namespace cookplan
