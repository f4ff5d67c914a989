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

#include "cookplan/proxy.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace cookplan {

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t at = s.find(sep, start);
    out.emplace_back(s.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return out;
}

std::string lower(std::string s) {
  for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

GridPos nearest_of(const std::vector<GridPos>& tiles, GridPos to) {
  return *std::min_element(tiles.begin(), tiles.end(),
                           [&](GridPos a, GridPos b) { return manhattan(a, to) < manhattan(b, to); });
}

bool full(const PotState& pot) { return pot.cook_ticks_remaining.has_value(); }

}  // namespace

ProxyPreference ProxyPreference::parse(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() != 4 || parts[0] != "proxy") {
    throw std::invalid_argument("partner must look like proxy:<task>[+<task>]:<ingredient>:<pots>, got '" +
                                std::string(text) + "'");
  }
  ProxyPreference p;
  for (const auto& task : split(parts[1], '+')) {
    const std::string t = lower(task);
    if (t == "placement" || t == "place") {
      p.placement = true;
    } else if (t == "delivery" || t == "deliver") {
      p.delivery = true;
    } else {
      throw std::invalid_argument("unknown proxy task '" + task + "'");
    }
  }
  if (!parts[2].empty()) {
    p.ingredient = ingredient_from_string(lower(parts[2]));
    if (!p.ingredient) throw std::invalid_argument("unknown ingredient '" + parts[2] + "'");
  }
  const std::string pots = lower(parts[3]);
  if (!pots.empty() && pots != "all") {
    for (const auto& n : split(pots, '+')) {
      try {
        std::size_t used = 0;
        const int k = std::stoi(n, &used);
        if (used != n.size() || k < 1) throw std::invalid_argument(n);
        p.pots.push_back(k);
      } catch (const std::logic_error&) {
        throw std::invalid_argument("bad pot number '" + n + "'");
      }
    }
    std::sort(p.pots.begin(), p.pots.end());
    p.pots.erase(std::unique(p.pots.begin(), p.pots.end()), p.pots.end());
  }
  return p;
}

std::string ProxyPreference::to_string() const {
  std::string tasks;
  if (placement) tasks = "placement";
  if (delivery) tasks += tasks.empty() ? "delivery" : "+delivery";
  std::string pot_list = "all";
  if (!pots.empty()) {
    pot_list.clear();
    for (int k : pots) pot_list += (pot_list.empty() ? "" : "+") + std::to_string(k);
  }
  return fmt::format("proxy:{}:{}:{}", tasks, ingredient ? std::string(cookplan::to_string(*ingredient)) : "",
                     pot_list);
}

bool ProxyPreference::covers(int pot_number) const {
  return pots.empty() || std::find(pots.begin(), pots.end(), pot_number) != pots.end();
}

ProxyPolicy::ProxyPolicy(PlayerId self, ProxyPreference pref, const Layout& layout, EpisodeConfig config)
    : pref_(std::move(pref)), driver_(self, config) {
  if (!pref_.placement && !pref_.delivery) throw IncompatiblePreference("proxy needs at least one task");
  const auto& all = layout.pots();
  for (int k : pref_.pots) {
    if (k > static_cast<int>(all.size())) {
      throw IncompatiblePreference(fmt::format("layout {} has no pot {}", layout.name(), k));
    }
  }
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (pref_.covers(static_cast<int>(i) + 1)) pots_.push_back(all[i]);
  }
  if (pref_.placement) {
    if (pref_.ingredient) {
      ingredient_ = *pref_.ingredient;
    } else {
      ingredient_ = layout.tiles_of(TileKind::OnionSource).empty() ? Ingredient::Tomato : Ingredient::Onion;
    }
    if (layout.tiles_of(source_of(ingredient_)).empty()) {
      throw IncompatiblePreference(fmt::format("layout {} has no {} source", layout.name(),
                                               cookplan::to_string(ingredient_)));
    }
  }
  if (pref_.delivery && (layout.tiles_of(TileKind::DishSource).empty() ||
                         layout.tiles_of(TileKind::ServingPort).empty())) {
    throw IncompatiblePreference("layout " + layout.name() + " cannot serve soup");
  }
}

bool ProxyPolicy::still_useful(const WorkUnit& unit, const GameState& state) const {
  if (unit.kind == WorkKind::Fetch) return true;
  const HeldItem& held = state.player(driver_.self()).held;
  return held.kind == HeldItem::Kind::SoupDish || full(state.pots.at(unit.pot));
}

std::optional<WorkUnit> ProxyPolicy::pick(const GameState& state, const Layout& layout) {
  const HeldItem& held = state.player(driver_.self()).held;
  for (std::size_t k = 0; k < pots_.size(); ++k) {
    const std::size_t i = (next_pot_ + k) % pots_.size();
    const GridPos pot = pots_[i];
    const PotState& ps = state.pots.at(pot);
    WorkUnit u;
    u.pot = pot;
    u.ingredient = ingredient_;
    if (pref_.delivery && full(ps) && !held.is_raw(ingredient_)) {
      u.kind = WorkKind::Deliver;
      u.source = nearest_of(layout.tiles_of(TileKind::DishSource), pot);
      u.port = nearest_of(layout.tiles_of(TileKind::ServingPort), pot);
    } else if (pref_.placement && pot_accepts(ps, driver_.config()) &&
               held.kind != HeldItem::Kind::CleanDish) {
      u.kind = WorkKind::Fetch;
      u.source = nearest_of(layout.tiles_of(source_of(ingredient_)), pot);
    } else {
      continue;
    }
    next_pot_ = (i + 1) % pots_.size();
    return u;
  }
  return std::nullopt;
}

Action ProxyPolicy::act(const GameState& state, const Layout& layout) {
  for (int attempt = 0; attempt < 3; ++attempt) {
    if (current_ && !still_useful(*current_, state)) current_.reset();
    if (!current_) current_ = pick(state, layout);
    if (!current_) break;
    bool completed = false;
    const Action a = driver_.step(*current_, state, layout, completed);
    if (!completed) return a;
    current_.reset();
  }
  // Idle: keep a clean dish for the next soup, put anything else down.
  const HeldItem& held = state.player(driver_.self()).held;
  const bool keep = held.kind == HeldItem::Kind::CleanDish && pref_.delivery;
  if (!keep && !held.empty()) {
    if (auto clear = driver_.clear_hands(nullptr, state, layout)) {
      return skill_step(layout, state, driver_.self(), SkillProgress::start(*clear), driver_.config()).first;
    }
  }
  return driver_.park(state, layout);
}

std::unique_ptr<ProxyPolicy> make_proxy(const ProxyPreference& pref, const Layout& layout, PlayerId self,
                                        EpisodeConfig config) {
  return std::make_unique<ProxyPolicy>(self, pref, layout, config);
}

}  // namespace cookplan
