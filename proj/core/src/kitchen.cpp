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

#include "cookplan/kitchen.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>

#include <fmt/format.h>

namespace cookplan {

std::string to_string(GridPos p) { return fmt::format("({},{})", p.row, p.col); }

int manhattan(GridPos a, GridPos b) { return std::abs(a.row - b.row) + std::abs(a.col - b.col); }

bool listing_less(GridPos a, GridPos b) {
  return a.col != b.col ? a.col < b.col : a.row < b.row;
}

std::string_view to_string(TileKind k) {
  switch (k) {
    case TileKind::Floor: return "floor";
    case TileKind::Counter: return "counter";
    case TileKind::OnionSource: return "onion_source";
    case TileKind::TomatoSource: return "tomato_source";
    case TileKind::DishSource: return "dish_source";
    case TileKind::Pot: return "pot";
    case TileKind::ServingPort: return "serving_port";
  }
  return "?";
}

std::string_view to_string(Ingredient i) { return i == Ingredient::Onion ? "onion" : "tomato"; }

std::optional<Ingredient> ingredient_from_string(std::string_view s) {
  if (s == "onion" || s == "onions") return Ingredient::Onion;
  if (s == "tomato" || s == "tomatoes") return Ingredient::Tomato;
  return std::nullopt;
}

TileKind source_of(Ingredient i) {
  return i == Ingredient::Onion ? TileKind::OnionSource : TileKind::TomatoSource;
}

GridPos neighbor(GridPos p, Direction d) {
  switch (d) {
    case Direction::North: return {p.row - 1, p.col};
    case Direction::South: return {p.row + 1, p.col};
    case Direction::East: return {p.row, p.col + 1};
    case Direction::West: return {p.row, p.col - 1};
  }
  return p;
}

std::string_view to_string(PlayerId id) { return id == PlayerId::AI ? "ai" : "human"; }

std::string_view to_string(Action a) {
  switch (a) {
    case Action::Up: return "up";
    case Action::Down: return "down";
    case Action::Left: return "left";
    case Action::Right: return "right";
    case Action::Stay: return "stay";
    case Action::Interact: return "interact";
  }
  return "?";
}

std::optional<Action> action_from_string(std::string_view s) {
  for (Action a : {Action::Up, Action::Down, Action::Left, Action::Right, Action::Stay,
                   Action::Interact}) {
    if (to_string(a) == s) return a;
  }
  return std::nullopt;
}

std::optional<Direction> direction_of(Action a) {
  switch (a) {
    case Action::Up: return Direction::North;
    case Action::Down: return Direction::South;
    case Action::Left: return Direction::West;
    case Action::Right: return Direction::East;
    default: return std::nullopt;
  }
}

Action move_toward(Direction d) {
  switch (d) {
    case Direction::North: return Action::Up;
    case Direction::South: return Action::Down;
    case Direction::East: return Action::Right;
    case Direction::West: return Action::Left;
  }
  return Action::Stay;
}

HeldItem HeldItem::soup_of(std::vector<Ingredient> recipe) {
  std::sort(recipe.begin(), recipe.end());
  return {Kind::SoupDish, Ingredient::Onion, std::move(recipe)};
}

std::string to_string(const HeldItem& h) {
  switch (h.kind) {
    case HeldItem::Kind::Nothing: return "nothing";
    case HeldItem::Kind::RawIngredient: return std::string(to_string(h.ingredient));
    case HeldItem::Kind::CleanDish: return "dish";
    case HeldItem::Kind::SoupDish: {
      std::string out = "soup(";
      for (std::size_t i = 0; i < h.soup.size(); ++i) {
        if (i) out += ",";
        out += to_string(h.soup[i]);
      }
      return out + ")";
    }
  }
  return "?";
}

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::PickIngredient: return "pick_ingredient";
    case EventKind::PickDish: return "pick_dish";
    case EventKind::PlaceIngredient: return "place_ingredient";
    case EventKind::Scoop: return "scoop";
    case EventKind::Deliver: return "deliver";
    case EventKind::CounterPlace: return "counter_place";
    case EventKind::CounterPick: return "counter_pick";
  }
  return "?";
}

bool pot_accepts(const PotState& pot, const EpisodeConfig& config) {
  return !pot.cook_ticks_remaining.has_value() &&
         static_cast<int>(pot.contents.size()) < config.recipe_size;
}

// --- Layout ----------------------------------------------------------------

Layout::Layout(std::string name, int width, int height, std::vector<TileKind> tiles,
               std::array<GridPos, 2> spawns)
    : name_(std::move(name)), width_(width), height_(height), tiles_(std::move(tiles)),
      spawns_(spawns) {
  if (width_ <= 0 || height_ <= 0 ||
      tiles_.size() != static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_)) {
    throw LayoutError(LayoutError::Code::NonRectangular, "layout grid is not rectangular");
  }
  for (int r = 0; r < height_; ++r) {
    for (int c = 0; c < width_; ++c) {
      GridPos p{r, c};
      by_kind_[static_cast<std::size_t>(tile(p))].push_back(p);
      bool border = r == 0 || c == 0 || r == height_ - 1 || c == width_ - 1;
      if (border && tile(p) == TileKind::Floor) {
        throw LayoutError(LayoutError::Code::OpenBorder,
                          "floor tile on the border at " + to_string(p), p);
      }
    }
  }
  for (auto& v : by_kind_) std::sort(v.begin(), v.end(), listing_less);

  for (GridPos s : spawns_) {
    if (!walkable(s)) {
      throw LayoutError(LayoutError::Code::MissingSpawn, "spawn is not on a floor tile", s);
    }
  }
  if (spawns_[0] == spawns_[1]) {
    throw LayoutError(LayoutError::Code::DuplicateSpawn, "both spawns share a tile", spawns_[0]);
  }

  auto require = [&](std::initializer_list<TileKind> kinds, std::string_view what) {
    for (TileKind k : kinds) {
      if (!tiles_of(k).empty()) return;
    }
    throw LayoutError(LayoutError::Code::MissingTile, fmt::format("layout has no {}", what));
  };
  require({TileKind::Pot}, "pot");
  require({TileKind::ServingPort}, "serving port");
  require({TileKind::DishSource}, "dish source");
  require({TileKind::OnionSource, TileKind::TomatoSource}, "ingredient source");

  const auto& floor = tiles_of(TileKind::Floor);
  std::vector<char> seen(tiles_.size(), 0);
  std::deque<GridPos> frontier{floor.front()};
  seen[index(floor.front())] = 1;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    GridPos p = frontier.front();
    frontier.pop_front();
    for (Direction d : {Direction::North, Direction::South, Direction::East, Direction::West}) {
      GridPos n = neighbor(p, d);
      if (walkable(n) && !seen[index(n)]) {
        seen[index(n)] = 1;
        ++reached;
        frontier.push_back(n);
      }
    }
  }
  if (reached != floor.size()) {
    throw LayoutError(LayoutError::Code::DisconnectedFloor, "floor tiles are not all connected");
  }
}

const std::vector<GridPos>& Layout::tiles_of(TileKind k) const {
  return by_kind_[static_cast<std::size_t>(k)];
}

std::optional<int> Layout::pot_number(GridPos p) const {
  const auto& ps = pots();
  auto it = std::find(ps.begin(), ps.end(), p);
  if (it == ps.end()) return std::nullopt;
  return static_cast<int>(it - ps.begin()) + 1;
}

Layout parse_layout(std::string_view text, std::string name) {
  std::vector<std::string_view> rows;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    rows.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  if (!rows.empty() && rows.back().empty()) rows.pop_back();
  for (auto& r : rows) {
    if (!r.empty() && r.back() == '\r') r.remove_suffix(1);
  }
  if (rows.empty() || rows.front().empty()) {
    throw LayoutError(LayoutError::Code::NonRectangular, "layout is empty");
  }
  const int width = static_cast<int>(rows.front().size());
  const int height = static_cast<int>(rows.size());
  std::vector<TileKind> tiles;
  tiles.reserve(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  std::optional<GridPos> spawn1, spawn2;
  for (int r = 0; r < height; ++r) {
    if (static_cast<int>(rows[static_cast<std::size_t>(r)].size()) != width) {
      throw LayoutError(LayoutError::Code::NonRectangular,
                        fmt::format("row {} has length {}, expected {}", r,
                                    rows[static_cast<std::size_t>(r)].size(), width),
                        {r, 0});
    }
    for (int c = 0; c < width; ++c) {
      char ch = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      GridPos p{r, c};
      switch (ch) {
        case 'X': tiles.push_back(TileKind::Counter); break;
        case 'O': tiles.push_back(TileKind::OnionSource); break;
        case 'T': tiles.push_back(TileKind::TomatoSource); break;
        case 'D': tiles.push_back(TileKind::DishSource); break;
        case 'P': tiles.push_back(TileKind::Pot); break;
        case 'S': tiles.push_back(TileKind::ServingPort); break;
        case ' ': tiles.push_back(TileKind::Floor); break;
        case '1':
        case '2': {
          auto& slot = ch == '1' ? spawn1 : spawn2;
          if (slot) {
            throw LayoutError(LayoutError::Code::DuplicateSpawn,
                              fmt::format("spawn {} appears twice", ch), p);
          }
          slot = p;
          tiles.push_back(TileKind::Floor);
          break;
        }
        default:
          throw LayoutError(LayoutError::Code::UnknownCharacter,
                            fmt::format("unknown character '{}' at ({},{})", ch, r, c), p);
      }
    }
  }
  if (!spawn1 || !spawn2) {
    throw LayoutError(LayoutError::Code::MissingSpawn, "layout needs spawn markers 1 and 2");
  }
  return Layout(std::move(name), width, height, std::move(tiles), {*spawn1, *spawn2});
}

std::string render_layout(const Layout& layout) {
  std::string out;
  for (int r = 0; r < layout.height(); ++r) {
    for (int c = 0; c < layout.width(); ++c) {
      GridPos p{r, c};
      char ch = ' ';
      switch (layout.tile(p)) {
        case TileKind::Floor:
          ch = p == layout.spawn(PlayerId::AI) ? '1' : p == layout.spawn(PlayerId::Human) ? '2' : ' ';
          break;
        case TileKind::Counter: ch = 'X'; break;
        case TileKind::OnionSource: ch = 'O'; break;
        case TileKind::TomatoSource: ch = 'T'; break;
        case TileKind::DishSource: ch = 'D'; break;
        case TileKind::Pot: ch = 'P'; break;
        case TileKind::ServingPort: ch = 'S'; break;
      }
      out += ch;
    }
    out += '\n';
  }
  return out;
}

// --- Dynamics --------------------------------------------------------------

GameState initial_state(const Layout& layout) {
  GameState s;
  for (PlayerId id : {PlayerId::AI, PlayerId::Human}) {
    s.player(id) = PlayerState{id, layout.spawn(id), Direction::North, HeldItem::nothing()};
  }
  for (GridPos p : layout.pots()) s.pots.emplace(p, PotState{});
  return s;
}

namespace {

void interact(GameState& s, PlayerId who, const Layout& layout, const EpisodeConfig& config,
              int& reward, std::vector<Event>& events) {
  PlayerState& me = s.player(who);
  GridPos target = me.facing_tile();
  if (!layout.in_bounds(target)) return;
  auto log = [&](EventKind kind, HeldItem item) {
    events.push_back(Event{s.tick, who, kind, target, std::move(item)});
  };

  switch (layout.tile(target)) {
    case TileKind::Floor:
      break;
    case TileKind::OnionSource:
    case TileKind::TomatoSource:
      if (me.held.empty()) {
        Ingredient i = layout.tile(target) == TileKind::OnionSource ? Ingredient::Onion
                                                                     : Ingredient::Tomato;
        me.held = HeldItem::raw(i);
        log(EventKind::PickIngredient, me.held);
      }
      break;
    case TileKind::DishSource:
      if (me.held.empty()) {
        me.held = HeldItem::dish();
        log(EventKind::PickDish, me.held);
      }
      break;
    case TileKind::Pot: {
      PotState& pot = s.pots.at(target);
      if (me.held.kind == HeldItem::Kind::RawIngredient && pot_accepts(pot, config)) {
        pot.contents.push_back(me.held.ingredient);
        log(EventKind::PlaceIngredient, me.held);
        me.held = HeldItem::nothing();
        if (static_cast<int>(pot.contents.size()) == config.recipe_size) {
          pot.cook_ticks_remaining = config.cook_time;
        }
      } else if (me.held.kind == HeldItem::Kind::CleanDish && pot.ready()) {
        me.held = HeldItem::soup_of(pot.contents);
        pot = PotState{};
        log(EventKind::Scoop, me.held);
      }
      break;
    }
    case TileKind::ServingPort:
      if (me.held.kind == HeldItem::Kind::SoupDish) {
        log(EventKind::Deliver, me.held);
        me.held = HeldItem::nothing();
        reward += config.score_per_soup;
      }
      break;
    case TileKind::Counter: {
      auto it = s.counter_items.find(target);
      if (!me.held.empty() && it == s.counter_items.end()) {
        log(EventKind::CounterPlace, me.held);
        s.counter_items.emplace(target, me.held);
        me.held = HeldItem::nothing();
      } else if (me.held.empty() && it != s.counter_items.end()) {
        me.held = it->second;
        s.counter_items.erase(it);
        log(EventKind::CounterPick, me.held);
      }
      break;
    }
  }
}

}  // namespace

StepResult step(const GameState& state, const Layout& layout, const JointAction& actions,
                const EpisodeConfig& config) {
  StepResult out{state, 0, {}};
  GameState& s = out.state;

  // Movement: facing always updates; position only if the target is free.
  std::array<GridPos, 2> from{s.players[0].pos, s.players[1].pos};
  std::array<GridPos, 2> to = from;
  for (std::size_t i = 0; i < 2; ++i) {
    if (auto d = direction_of(actions[i])) {
      s.players[i].facing = *d;
      GridPos n = neighbor(from[i], *d);
      if (layout.walkable(n)) to[i] = n;
    }
  }
  if (to[0] == from[1] && to[1] == from[0]) {
    to = from;  // swap
  }
  for (int guard = 0; guard < 3 && to[0] == to[1]; ++guard) {
    for (std::size_t i = 0; i < 2; ++i) {
      if (to[i] != from[i]) to[i] = from[i];
    }
  }
  s.players[0].pos = to[0];
  s.players[1].pos = to[1];

  for (PlayerId who : {PlayerId::AI, PlayerId::Human}) {
    if (actions[index_of(who)] == Action::Interact) {
      interact(s, who, layout, config, out.reward, out.events);
    }
  }

  for (auto& [pos, pot] : s.pots) {
    if (pot.cook_ticks_remaining && *pot.cook_ticks_remaining > 0) --*pot.cook_ticks_remaining;
  }
  s.score += out.reward;
  ++s.tick;
  return out;
}

}  // namespace cookplan
