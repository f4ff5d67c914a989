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

// Deterministic two-player kitchen model: layouts, state, transition and
// reward. Everything here is a value type; `step` is a pure function.

#ifndef COOKPLAN_KITCHEN_HPP_
#define COOKPLAN_KITCHEN_HPP_

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cookplan {

/// Tile coordinate. Row 0 is the top row, column 0 the leftmost column.
struct GridPos {
  int row = 0;
  int col = 0;

  friend constexpr auto operator<=>(const GridPos&, const GridPos&) = default;
};

/// "(r,c)" with no inner space.
std::string to_string(GridPos p);

int manhattan(GridPos a, GridPos b);

/// Ordering used whenever tiles are listed: left to right, then top to
/// bottom. Tie-breaks between equidistant candidates follow this order.
bool listing_less(GridPos a, GridPos b);

enum class TileKind : std::uint8_t {
  Floor,
  Counter,
  OnionSource,
  TomatoSource,
  DishSource,
  Pot,
  ServingPort,
};

std::string_view to_string(TileKind k);

enum class Ingredient : std::uint8_t { Onion, Tomato };

std::string_view to_string(Ingredient i);
std::optional<Ingredient> ingredient_from_string(std::string_view s);
TileKind source_of(Ingredient i);

enum class Direction : std::uint8_t { North, South, East, West };

GridPos neighbor(GridPos p, Direction d);

enum class PlayerId : std::uint8_t { AI = 0, Human = 1 };

constexpr std::size_t index_of(PlayerId id) { return static_cast<std::size_t>(id); }
constexpr PlayerId partner_of(PlayerId id) {
  return id == PlayerId::AI ? PlayerId::Human : PlayerId::AI;
}
std::string_view to_string(PlayerId id);

enum class Action : std::uint8_t { Up, Down, Left, Right, Stay, Interact };

std::string_view to_string(Action a);
std::optional<Action> action_from_string(std::string_view s);
std::optional<Direction> direction_of(Action a);
Action move_toward(Direction d);

/// Per-player joint action, indexed by `index_of(PlayerId)`.
using JointAction = std::array<Action, 2>;

struct HeldItem {
  enum class Kind : std::uint8_t { Nothing, RawIngredient, CleanDish, SoupDish };

  Kind kind = Kind::Nothing;
  Ingredient ingredient = Ingredient::Onion;  // meaningful for RawIngredient
  std::vector<Ingredient> soup;               // sorted; meaningful for SoupDish

  static HeldItem nothing() { return {}; }
  static HeldItem raw(Ingredient i) { return {Kind::RawIngredient, i, {}}; }
  static HeldItem dish() { return {Kind::CleanDish, Ingredient::Onion, {}}; }
  static HeldItem soup_of(std::vector<Ingredient> recipe);

  bool empty() const { return kind == Kind::Nothing; }
  bool is_raw(Ingredient i) const { return kind == Kind::RawIngredient && ingredient == i; }

  friend bool operator==(const HeldItem&, const HeldItem&) = default;
};

std::string to_string(const HeldItem& h);

class LayoutError : public std::runtime_error {
 public:
  enum class Code {
    NonRectangular,
    UnknownCharacter,
    MissingSpawn,
    DuplicateSpawn,
    OpenBorder,
    DisconnectedFloor,
    MissingTile,
  };

  LayoutError(Code code, std::string message, GridPos where = {})
      : std::runtime_error(std::move(message)), code_(code), where_(where) {}

  Code code() const noexcept { return code_; }
  GridPos where() const noexcept { return where_; }

 private:
  Code code_;
  GridPos where_;
};

/// A validated kitchen map. Construction throws LayoutError on any invariant
/// violation, so holding a Layout means the map is well formed.
class Layout {
 public:
  Layout(std::string name, int width, int height, std::vector<TileKind> tiles,
         std::array<GridPos, 2> spawns);

  const std::string& name() const { return name_; }
  int width() const { return width_; }
  int height() const { return height_; }

  bool in_bounds(GridPos p) const {
    return p.row >= 0 && p.row < height_ && p.col >= 0 && p.col < width_;
  }
  TileKind tile(GridPos p) const { return tiles_[index(p)]; }
  bool walkable(GridPos p) const { return in_bounds(p) && tile(p) == TileKind::Floor; }
  GridPos spawn(PlayerId id) const { return spawns_[index_of(id)]; }

  /// All tiles of one kind, in listing order.
  const std::vector<GridPos>& tiles_of(TileKind k) const;
  const std::vector<GridPos>& pots() const { return tiles_of(TileKind::Pot); }

  /// 1-based pot number in listing order, or nullopt for a non-pot tile.
  std::optional<int> pot_number(GridPos p) const;

 private:
  std::size_t index(GridPos p) const {
    return static_cast<std::size_t>(p.row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(p.col);
  }

  std::string name_;
  int width_;
  int height_;
  std::vector<TileKind> tiles_;
  std::array<GridPos, 2> spawns_;
  std::array<std::vector<GridPos>, 7> by_kind_;
};

/// Parses the ASCII layout format: X counter, O onion, T tomato, D dish,
/// P pot, S serving port, 1/2 spawn (floor), space floor.
Layout parse_layout(std::string_view text, std::string name = "custom");
std::string render_layout(const Layout& layout);

struct PotState {
  std::vector<Ingredient> contents;
  std::optional<int> cook_ticks_remaining;

  bool cooking() const { return cook_ticks_remaining.has_value() && *cook_ticks_remaining > 0; }
  bool ready() const { return cook_ticks_remaining.has_value() && *cook_ticks_remaining == 0; }
  bool empty() const { return contents.empty(); }

  friend bool operator==(const PotState&, const PotState&) = default;
};

struct PlayerState {
  PlayerId id = PlayerId::AI;
  GridPos pos;
  Direction facing = Direction::North;
  HeldItem held;

  GridPos facing_tile() const { return neighbor(pos, facing); }

  friend bool operator==(const PlayerState&, const PlayerState&) = default;
};

struct GameState {
  int tick = 0;
  std::array<PlayerState, 2> players;
  std::map<GridPos, PotState> pots;
  std::map<GridPos, HeldItem> counter_items;
  int score = 0;

  const PlayerState& player(PlayerId id) const { return players[index_of(id)]; }
  PlayerState& player(PlayerId id) { return players[index_of(id)]; }

  friend bool operator==(const GameState&, const GameState&) = default;
};

struct EpisodeConfig {
  int horizon = 400;
  double discount = 1.0;
  int score_per_soup = 20;
  int recipe_size = 3;
  int cook_time = 20;
  std::uint64_t seed = 0;
};

/// True when the pot can take one more ingredient.
bool pot_accepts(const PotState& pot, const EpisodeConfig& config);

enum class EventKind : std::uint8_t {
  PickIngredient,
  PickDish,
  PlaceIngredient,
  Scoop,
  Deliver,
  CounterPlace,
  CounterPick,
};

std::string_view to_string(EventKind k);

/// One Interact-caused change. `where` is the interacted tile and `item` the
/// object that moved.
struct Event {
  int tick = 0;
  PlayerId agent = PlayerId::AI;
  EventKind kind = EventKind::PickIngredient;
  GridPos where;
  HeldItem item;

  friend bool operator==(const Event&, const Event&) = default;
};

struct StepResult {
  GameState state;
  int reward = 0;
  std::vector<Event> events;
};

/// Deterministic start state: players on their spawns facing north, empty
/// hands, empty pots, score 0.
GameState initial_state(const Layout& layout);

/// One simultaneous tick. Movement conflicts (same target, swaps) leave both
/// movers in place; interacts resolve AI first, then Human; afterwards every
/// cooking pot counts down one tick.
StepResult step(const GameState& state, const Layout& layout, const JointAction& actions,
                const EpisodeConfig& config);

}  // namespace cookplan

#endif  // COOKPLAN_KITCHEN_HPP_
