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

// JSON views of the domain types, with snake_case field names. Positions are
// [row, col] pairs.

#ifndef COOKPLAN_JSON_HPP_
#define COOKPLAN_JSON_HPP_

#include <nlohmann/json.hpp>

#include "cookplan/convention.hpp"
#include "cookplan/eval.hpp"
#include "cookplan/kitchen.hpp"
#include "cookplan/planner.hpp"

namespace cookplan {

nlohmann::json pos_json(GridPos p);
nlohmann::json held_json(const HeldItem& h);
nlohmann::json state_json(const GameState& state);
/// Name, size, ASCII rows, spawns and station coordinates.
nlohmann::json layout_json(const Layout& layout);
nlohmann::json event_json(const Event& e);
/// Structured entries per agent plus the rendered text.
nlohmann::json convention_json(const Convention& c);
nlohmann::json transcripts_json(const std::vector<SessionTranscript>& ts);
nlohmann::json proportions_json(const EventProportions& p);
/// Score, deliveries, return, ticks, seed, event log and event proportions.
nlohmann::json episode_json(const EpisodeResult& r, const Layout& layout);

}  // namespace cookplan

#endif  // COOKPLAN_JSON_HPP_
