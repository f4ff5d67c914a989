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

#include "cookplan/skills.hpp"

#include <array>
#include <deque>
#include <regex>

#include <fmt/format.h>

#include "cookplan/errors.hpp"

namespace cookplan {

std::string_view to_string(SkillItem item) {
  switch (item) {
    case SkillItem::Onion: return "onion";
    case SkillItem::Tomato: return "tomato";
    case SkillItem::Dish: return "dish";
    case SkillItem::Soup: return "soup";
  }
  return "?";
}

SkillItem skill_item(Ingredient i) {
  return i == Ingredient::Onion ? SkillItem::Onion : SkillItem::Tomato;
}

std::string to_string(const SkillCommand& c) {
  return fmt::format("{} {} {} {}", c.kind == SkillKind::Fetch ? "Fetch" : "Deliver",
                     to_string(c.item), c.kind == SkillKind::Fetch ? "at" : "to",
                     to_string(c.target));
}

std::string_view to_string(SkillPhase p) {
  switch (p) {
    case SkillPhase::Navigating: return "navigating";
    case SkillPhase::Interacting: return "interacting";
    case SkillPhase::Done: return "done";
    case SkillPhase::Failed: return "failed";
  }
  return "?";
}

std::string_view to_string(SkillFailure f) {
  switch (f) {
    case SkillFailure::None: return "none";
    case SkillFailure::Unreachable: return "unreachable";
    case SkillFailure::PreconditionLost: return "precondition_lost";
  }
  return "?";
}

SkillCommand parse_skill(std::string_view text) {
  const std::string line(text);
  static const std::regex verb_re(R"(\b(fetch|deliver)\b)", std::regex::icase);
  static const std::regex item_re(
      R"(^\s+(?:(?:the|a|an|some)\s+)?(onions?|tomato(?:es)?|dish(?:es)?|plates?|soups?)\b)",
      std::regex::icase);
  static const std::regex coord_re(R"(^\s+(?:at|to|from|into|in)\s+\(\s*(\d+)\s*,\s*(\d+)\s*\))",
                                   std::regex::icase);

  std::smatch verb;
  if (!std::regex_search(line, verb, verb_re)) throw ParseError(0, "Fetch or Deliver");
  SkillCommand cmd;
  cmd.kind = std::tolower(static_cast<unsigned char>(verb.str(1)[0])) == 'f' ? SkillKind::Fetch
                                                                             : SkillKind::Deliver;
  std::size_t pos = static_cast<std::size_t>(verb.position(0) + verb.length(0));

  std::smatch item;
  std::string rest = line.substr(pos);
  if (!std::regex_search(rest, item, item_re)) throw ParseError(pos, "item");
  char first = static_cast<char>(std::tolower(static_cast<unsigned char>(item.str(1)[0])));
  switch (first) {
    case 'o': cmd.item = SkillItem::Onion; break;
    case 't': cmd.item = SkillItem::Tomato; break;
    case 's': cmd.item = SkillItem::Soup; break;
    default: cmd.item = SkillItem::Dish; break;
  }
  pos += static_cast<std::size_t>(item.length(0));

  std::smatch coord;
  rest = line.substr(pos);
  if (!std::regex_search(rest, coord, coord_re)) throw ParseError(pos, "coordinate");
  cmd.target = {std::stoi(coord.str(1)), std::stoi(coord.str(2))};
  return cmd;
}

// --- Path planning ---------------------------------------------------------

namespace {

constexpr std::array<Direction, 4> kDirs = {Direction::North, Direction::South, Direction::West,
                                            Direction::East};

std::optional<std::vector<Action>> search(const Layout& layout, GridPos from, Direction facing,
                                          GridPos goal, std::optional<GridPos> blocked) {
  auto at_goal = [&](GridPos p, Direction f) {
    return manhattan(p, goal) == 1 && neighbor(p, f) == goal;
  };
  if (at_goal(from, facing)) return std::vector<Action>{};

  const int w = layout.width();
  auto key = [&](GridPos p, Direction f) {
    return (static_cast<std::size_t>(p.row) * static_cast<std::size_t>(w) +
            static_cast<std::size_t>(p.col)) * 4 +
           static_cast<std::size_t>(f);
  };
  struct Node {
    GridPos pos;
    Direction facing;
  };
  const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(layout.height()) * 4;
  std::vector<std::optional<std::pair<std::size_t, Action>>> parent(n);
  std::vector<char> seen(n, 0);
  std::deque<Node> frontier{{from, facing}};
  seen[key(from, facing)] = 1;

  while (!frontier.empty()) {
    Node cur = frontier.front();
    frontier.pop_front();
    for (Direction d : kDirs) {
      GridPos target = neighbor(cur.pos, d);
      bool free = layout.walkable(target) && (!blocked || target != *blocked);
      Node next{free ? target : cur.pos, d};
      std::size_t k = key(next.pos, next.facing);
      if (seen[k]) continue;
      seen[k] = 1;
      parent[k] = std::make_pair(key(cur.pos, cur.facing), move_toward(d));
      if (at_goal(next.pos, next.facing)) {
        std::vector<Action> path;
        std::size_t at = k;
        const std::size_t start = key(from, facing);
        while (at != start) {
          path.push_back(parent[at]->second);
          at = parent[at]->first;
        }
        return std::vector<Action>(path.rbegin(), path.rend());
      }
      frontier.push_back(next);
    }
  }
  return std::nullopt;
}

/// Floor distances from `origin`, -1 where unreachable.
std::vector<int> flood(const Layout& layout, GridPos origin) {
  const int w = layout.width();
  std::vector<int> dist(static_cast<std::size_t>(w * layout.height()), -1);
  auto idx = [&](GridPos p) { return static_cast<std::size_t>(p.row * w + p.col); };
  std::deque<GridPos> q{origin};
  dist[idx(origin)] = 0;
  while (!q.empty()) {
    GridPos cur = q.front();
    q.pop_front();
    for (Direction d : kDirs) {
      GridPos n = neighbor(cur, d);
      if (!layout.walkable(n) || dist[idx(n)] >= 0) continue;
      dist[idx(n)] = dist[idx(cur)] + 1;
      q.push_back(n);
    }
  }
  return dist;
}

/// Move that takes the player furthest from its partner, or Stay.
Action retreat_move(const Layout& layout, GridPos me, GridPos partner) {
  const auto dist = flood(layout, partner);
  auto at = [&](GridPos p) { return dist[static_cast<std::size_t>(p.row * layout.width() + p.col)]; };
  Action best = Action::Stay;
  int best_d = at(me);
  for (Direction d : kDirs) {
    GridPos n = neighbor(me, d);
    if (!layout.walkable(n) || n == partner) continue;
    if (at(n) > best_d) {
      best_d = at(n);
      best = move_toward(d);
    }
  }
  return best;
}

const PlayerState* player_at(const GameState& state, GridPos p) {
  for (const auto& pl : state.players) {
    if (pl.pos == p) return &pl;
  }
  return nullptr;
}

bool holds(const HeldItem& held, SkillItem item) {
  switch (item) {
    case SkillItem::Onion: return held.is_raw(Ingredient::Onion);
    case SkillItem::Tomato: return held.is_raw(Ingredient::Tomato);
    case SkillItem::Dish: return held.kind == HeldItem::Kind::CleanDish;
    case SkillItem::Soup: return held.kind == HeldItem::Kind::SoupDish;
  }
  return false;
}

bool postcondition(const SkillProgress& p, const HeldItem& held, TileKind target) {
  const SkillCommand& c = p.command;
  if (c.kind == SkillKind::Fetch) return holds(held, c.item);
  if (!p.interacted) return false;
  if (c.item == SkillItem::Dish && target == TileKind::Pot) {
    return held.kind == HeldItem::Kind::SoupDish;
  }
  return !holds(held, c.item);
}

bool precondition(const SkillCommand& c, const HeldItem& held, TileKind target) {
  if (c.kind == SkillKind::Deliver) return holds(held, c.item);
  if (c.item == SkillItem::Soup && target == TileKind::Pot) {
    return held.kind == HeldItem::Kind::CleanDish;
  }
  return held.empty();
}

bool target_accepts(const SkillCommand& c, const GameState& s, const Layout& layout,
                    const EpisodeConfig& config) {
  const TileKind kind = layout.tile(c.target);
  auto counter_item = [&]() -> const HeldItem* {
    auto it = s.counter_items.find(c.target);
    return it == s.counter_items.end() ? nullptr : &it->second;
  };
  if (kind == TileKind::Counter) {
    const HeldItem* on = counter_item();
    return c.kind == SkillKind::Fetch ? (on && holds(*on, c.item)) : on == nullptr;
  }
  if (c.kind == SkillKind::Fetch) {
    switch (c.item) {
      case SkillItem::Onion: return kind == TileKind::OnionSource;
      case SkillItem::Tomato: return kind == TileKind::TomatoSource;
      case SkillItem::Dish: return kind == TileKind::DishSource;
      case SkillItem::Soup: return kind == TileKind::Pot && s.pots.at(c.target).ready();
    }
  }
  switch (c.item) {
    case SkillItem::Onion:
    case SkillItem::Tomato:
      return kind == TileKind::Pot && pot_accepts(s.pots.at(c.target), config);
    case SkillItem::Dish: return kind == TileKind::Pot && s.pots.at(c.target).ready();
    case SkillItem::Soup: return kind == TileKind::ServingPort;
  }
  return false;
}

}  // namespace

std::vector<Action> plan_path(const Layout& layout, const GameState& state, GridPos from,
                              GridPos goal) {
  Direction facing = Direction::North;
  std::optional<GridPos> blocked;
  for (const auto& pl : state.players) {
    if (pl.pos == from) {
      facing = pl.facing;
    } else {
      blocked = pl.pos;
    }
  }
  if (!layout.in_bounds(goal)) throw PathError("goal " + to_string(goal) + " is off the map");
  auto path = search(layout, from, facing, goal, blocked);
  if (!path) throw PathError("no free tile next to " + to_string(goal) + " is reachable");
  return *path;
}

std::pair<Action, SkillProgress> skill_step(const Layout& layout, const GameState& state,
                                            PlayerId agent, SkillProgress progress,
                                            const EpisodeConfig& config) {
  if (progress.finished()) return {Action::Stay, progress};
  const PlayerState& me = state.player(agent);
  const PlayerState& partner = state.player(partner_of(agent));
  const SkillCommand& cmd = progress.command;

  auto fail = [&](SkillFailure why) {
    progress.phase = SkillPhase::Failed;
    progress.failure = why;
    return std::make_pair(Action::Stay, progress);
  };

  if (!layout.in_bounds(cmd.target)) return fail(SkillFailure::Unreachable);
  const TileKind target_kind = layout.tile(cmd.target);
  if (postcondition(progress, me.held, target_kind)) {
    progress.phase = SkillPhase::Done;
    return {Action::Stay, progress};
  }
  if (!precondition(cmd, me.held, target_kind) || progress.interacted) {
    // An interact that left the hand unchanged means the target refused it.
    return fail(SkillFailure::PreconditionLost);
  }

  const bool stalled = progress.last_pos && progress.last_was_move && *progress.last_pos == me.pos;

  auto free_path = search(layout, me.pos, me.facing, cmd.target, std::nullopt);
  if (!free_path) return fail(SkillFailure::Unreachable);

  Action action = Action::Stay;
  if (free_path->empty()) {
    if (!target_accepts(cmd, state, layout, config)) return fail(SkillFailure::PreconditionLost);
    progress.phase = SkillPhase::Interacting;
    progress.interacted = true;
    action = Action::Interact;
  } else {
    progress.phase = SkillPhase::Navigating;
    action = free_path->front();
    const GridPos next = neighbor(me.pos, *direction_of(action));
    if (progress.blocker && *progress.blocker != partner.pos && progress.detour_left == 0 &&
        progress.retreat_left == 0) {
      progress.blocker.reset();
      progress.partner_wait = 0;
    }
    const int budget = agent == PlayerId::Human ? 2 * kPartnerWaitBudget : kPartnerWaitBudget;
    const bool detouring =
        progress.blocker && (progress.detour_left > 0 || progress.partner_wait >= budget);
    bool routed = false;
    if (detouring && progress.retreat_left == 0) {
      auto detour = search(layout, me.pos, me.facing, cmd.target, *progress.blocker);
      if (detour) {
        routed = true;
        if (progress.detour_left == 0) progress.detour_left = static_cast<int>(detour->size());
        --progress.detour_left;
        action = detour->empty() ? Action::Stay : detour->front();
        if (auto d = direction_of(action); d && neighbor(me.pos, *d) == partner.pos) action = Action::Stay;
        if (progress.detour_left == 0) {
          progress.blocker.reset();
          progress.partner_wait = 0;
        }
      } else {
        // No way around: back off and let the partner through.
        progress.detour_left = 0;
        progress.retreat_left = kRetreatTicks;
      }
    }
    if (progress.retreat_left > 0) {
      action = retreat_move(layout, me.pos, partner.pos);
      if (--progress.retreat_left == 0) {
        progress.blocker.reset();
        progress.partner_wait = 0;
      }
    } else if (!routed && next == partner.pos) {
      ++progress.partner_wait;
      progress.blocker = partner.pos;
      action = Action::Stay;
    }
    // Head-on conflicts leave both players in place; the human side yields.
    if (stalled && agent == PlayerId::Human && action != Action::Stay) action = Action::Stay;
  }

  progress.last_pos = me.pos;
  progress.last_was_move = false;
  if (auto d = direction_of(action)) {
    GridPos n = neighbor(me.pos, *d);
    progress.last_was_move = layout.walkable(n) && !player_at(state, n);
  }
  ++progress.ticks;
  return {action, progress};
}

}  // namespace cookplan
