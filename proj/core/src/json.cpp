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

#include "cookplan/json.hpp"

#include <sstream>
#include <string>

namespace cookplan {

using nlohmann::json;

namespace {

std::string_view direction_name(Direction d) {
  switch (d) {
    case Direction::North: return "north";
    case Direction::South: return "south";
    case Direction::East: return "east";
    case Direction::West: return "west";
  }
  return "north";
}

std::string_view held_kind(HeldItem::Kind k) {
  switch (k) {
    case HeldItem::Kind::Nothing: return "nothing";
    case HeldItem::Kind::RawIngredient: return "ingredient";
    case HeldItem::Kind::CleanDish: return "dish";
    case HeldItem::Kind::SoupDish: return "soup";
  }
  return "nothing";
}

json ingredients_json(const std::vector<Ingredient>& v) {
  json out = json::array();
  for (Ingredient i : v) out.push_back(to_string(i));
  return out;
}

json positions_json(const std::vector<GridPos>& v) {
  json out = json::array();
  for (GridPos p : v) out.push_back(pos_json(p));
  return out;
}

json entry_json(const ConventionEntry& e, Ingredient objective) {
  json j{{"kind", e.rough.kind == WorkKind::Fetch ? "fetch" : "deliver"},
         {"pot", pos_json(e.rough.pot)},
         {"est_steps", e.est_steps},
         {"text", render_rough_item(e.rough, objective)},
         {"refined", render_refined(e.refined, objective)}};
  if (const auto* f = std::get_if<FetchPlan>(&e.refined)) {
    j["source"] = pos_json(f->source);
  } else {
    const auto& d = std::get<DeliverPlan>(e.refined);
    j["dish_source"] = pos_json(d.dish_source);
    j["port"] = pos_json(d.port);
  }
  return j;
}

}  // namespace

json pos_json(GridPos p) { return json::array({p.row, p.col}); }

json held_json(const HeldItem& h) {
  json j{{"kind", held_kind(h.kind)}};
  if (h.kind == HeldItem::Kind::RawIngredient) j["ingredient"] = to_string(h.ingredient);
  if (h.kind == HeldItem::Kind::SoupDish) j["soup"] = ingredients_json(h.soup);
  return j;
}

json state_json(const GameState& state) {
  json players = json::array();
  for (const PlayerState& p : state.players) {
    players.push_back({{"id", to_string(p.id)},
                       {"pos", pos_json(p.pos)},
                       {"facing", direction_name(p.facing)},
                       {"held", held_json(p.held)}});
  }
  json pots = json::array();
  for (const auto& [pos, pot] : state.pots) {
    pots.push_back({{"pos", pos_json(pos)},
                    {"contents", ingredients_json(pot.contents)},
                    {"cook_ticks_remaining", pot.cook_ticks_remaining ? json(*pot.cook_ticks_remaining) : json()},
                    {"ready", pot.ready()}});
  }
  json counters = json::array();
  for (const auto& [pos, item] : state.counter_items) {
    counters.push_back({{"pos", pos_json(pos)}, {"item", held_json(item)}});
  }
  return {{"tick", state.tick}, {"score", state.score}, {"players", players}, {"pots", pots},
          {"counter_items", counters}};
}

json layout_json(const Layout& layout) {
  json rows = json::array();
  std::istringstream in(render_layout(layout));
  for (std::string line; std::getline(in, line);) rows.push_back(line);
  return {{"name", layout.name()},
          {"width", layout.width()},
          {"height", layout.height()},
          {"rows", rows},
          {"spawns", {{"ai", pos_json(layout.spawn(PlayerId::AI))}, {"human", pos_json(layout.spawn(PlayerId::Human))}}},
          {"pots", positions_json(layout.pots())},
          {"onion_sources", positions_json(layout.tiles_of(TileKind::OnionSource))},
          {"tomato_sources", positions_json(layout.tiles_of(TileKind::TomatoSource))},
          {"dish_sources", positions_json(layout.tiles_of(TileKind::DishSource))},
          {"serving_ports", positions_json(layout.tiles_of(TileKind::ServingPort))}};
}

json event_json(const Event& e) {
  return {{"tick", e.tick}, {"agent", to_string(e.agent)}, {"kind", to_string(e.kind)},
          {"where", pos_json(e.where)}, {"item", held_json(e.item)}};
}

json convention_json(const Convention& c) {
  json ai = json::array(), human = json::array();
  for (const auto& e : c.ai_plan) ai.push_back(entry_json(e, c.objective));
  for (const auto& e : c.human_plan) human.push_back(entry_json(e, c.objective));
  return {{"objective", to_string(c.objective)}, {"ai", ai}, {"human", human},
          {"text", render_convention(c)}, {"transcript_ids", c.transcript_ids}};
}

json transcripts_json(const std::vector<SessionTranscript>& ts) {
  json out = json::array();
  for (const auto& t : ts) out.push_back(json::parse(transcript_to_json(t)));
  return out;
}

json proportions_json(const EventProportions& p) {
  json out = json::object();
  for (PlayerId id : {PlayerId::AI, PlayerId::Human}) {
    json shares = json::object();
    if (auto it = p.fractions.find(id); it != p.fractions.end()) {
      for (const auto& [key, f] : it->second) {
        shares[std::string(to_string(key.first)) + ":" + std::to_string(key.second)] = f;
      }
    }
    const auto t = p.totals.find(id);
    out[std::string(to_string(id))] = {{"events", t == p.totals.end() ? 0 : t->second}, {"fractions", shares}};
  }
  return out;
}

json episode_json(const EpisodeResult& r, const Layout& layout) {
  json events = json::array();
  for (const auto& e : r.event_log) events.push_back(event_json(e));
  return {{"layout", layout.name()},
          {"score", r.score},
          {"deliveries", r.deliveries()},
          {"discounted_return", r.discounted_return},
          {"ticks", r.ticks},
          {"seed", r.seed},
          {"event_proportions", proportions_json(event_proportions(r, layout))},
          {"event_log", events}};
}

}  // namespace cookplan
