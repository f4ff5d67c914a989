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

// Reference implementations used only by tests. They share no code with the
// library so that agreement between the two is meaningful.

#ifndef COOKPLAN_TESTS_ORACLES_HPP_
#define COOKPLAN_TESTS_ORACLES_HPP_

#include <algorithm>
#include <functional>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "cookplan/kitchen.hpp"

namespace cookplan::testing {

/// Off-map position used to take the partner out of play.
inline constexpr GridPos kNowhere{-100, -100};

/// Plain 4-neighbour flood fill over floor tiles; -1 marks unreachable.
inline std::vector<std::vector<int>> flood_fill(const Layout& layout, GridPos from) {
  std::vector<std::vector<int>> dist(static_cast<std::size_t>(layout.height()),
                                     std::vector<int>(static_cast<std::size_t>(layout.width()), -1));
  std::queue<GridPos> q;
  dist[static_cast<std::size_t>(from.row)][static_cast<std::size_t>(from.col)] = 0;
  q.push(from);
  const int dr[4] = {-1, 1, 0, 0};
  const int dc[4] = {0, 0, -1, 1};
  while (!q.empty()) {
    GridPos p = q.front();
    q.pop();
    for (int k = 0; k < 4; ++k) {
      GridPos n{p.row + dr[k], p.col + dc[k]};
      if (!layout.in_bounds(n) || layout.tile(n) != TileKind::Floor) continue;
      int& d = dist[static_cast<std::size_t>(n.row)][static_cast<std::size_t>(n.col)];
      if (d >= 0) continue;
      d = dist[static_cast<std::size_t>(p.row)][static_cast<std::size_t>(p.col)] + 1;
      q.push(n);
    }
  }
  return dist;
}

/// Actions needed to stand next to `goal` and face it, starting on `from`
/// facing `facing`: the walking distance to the nearest adjacent floor tile,
/// plus one turn unless some shortest route already arrives facing the goal.
inline std::optional<int> bfs_distance(const Layout& layout, GridPos from, Direction facing,
                                       GridPos goal) {
  if (manhattan(from, goal) == 1 && neighbor(from, facing) == goal) return 0;
  const auto dist = flood_fill(layout, from);
  auto at = [&](GridPos p) -> int {
    if (!layout.in_bounds(p)) return -1;
    return dist[static_cast<std::size_t>(p.row)][static_cast<std::size_t>(p.col)];
  };
  const int dr[4] = {-1, 1, 0, 0};
  const int dc[4] = {0, 0, -1, 1};
  int best = -1;
  for (int k = 0; k < 4; ++k) {
    GridPos a{goal.row + dr[k], goal.col + dc[k]};
    if (at(a) >= 0 && (best < 0 || at(a) < best)) best = at(a);
  }
  if (best < 0) return std::nullopt;
  if (best == 0) return 1;
  for (int k = 0; k < 4; ++k) {
    GridPos a{goal.row + dr[k], goal.col + dc[k]};
    if (at(a) != best) continue;
    // Arriving at `a` while moving toward the goal means coming from the
    // tile on the far side of `a`.
    GridPos behind{a.row - (goal.row - a.row), a.col - (goal.col - a.col)};
    if (at(behind) == best - 1) return best;
  }
  return best + 1;
}

/// Last letters of whitespace/comma separated words, folded left to right.
inline std::string last_letters(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!w.empty()) out.push_back(w.back());
  }
  return out;
}

/// SCAN semantics written as the textbook rewrite rules over tokens.
inline std::string scan_reference(const std::string& command) {
  std::vector<std::string> toks;
  std::string cur;
  for (char c : command + " ") {
    if (c == ' ') {
      if (!cur.empty()) toks.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  auto upper = [](std::string w) {
    for (auto& ch : w) ch = static_cast<char>(ch - 'a' + 'A');
    return w;
  };
  std::function<std::vector<std::string>(std::vector<std::string>)> phrase =
      [&](std::vector<std::string> t) -> std::vector<std::string> {
    if (t.back() == "twice" || t.back() == "thrice") {
      const int n = t.back() == "twice" ? 2 : 3;
      t.pop_back();
      const auto once = phrase(t);
      std::vector<std::string> out;
      for (int i = 0; i < n; ++i) out.insert(out.end(), once.begin(), once.end());
      return out;
    }
    const std::string act = t[0] == "turn" ? "" : upper(t[0]);
    if (t.size() == 1) return {act};
    const std::string turn = t.back() == "left" ? "TURN_LEFT" : "TURN_RIGHT";
    std::vector<std::string> unit{turn};
    if (!act.empty()) unit.push_back(act);
    if (t.size() == 2) return unit;
    if (t[1] == "opposite") {
      unit.insert(unit.begin(), turn);
      return unit;
    }
    std::vector<std::string> out;
    for (int i = 0; i < 4; ++i) out.insert(out.end(), unit.begin(), unit.end());
    return out;
  };
  std::vector<std::string> out;
  auto conj = std::find_if(toks.begin(), toks.end(), [](const std::string& w) { return w == "and" || w == "after"; });
  if (conj == toks.end()) {
    out = phrase(toks);
  } else {
    auto x = phrase({toks.begin(), conj});
    auto y = phrase({conj + 1, toks.end()});
    if (*conj == "after") std::swap(x, y);
    out = x;
    out.insert(out.end(), y.begin(), y.end());
  }
  std::string text;
  for (const auto& w : out) text += (text.empty() ? "" : " ") + w;
  return text;
}

}  // namespace cookplan::testing

#endif  // COOKPLAN_TESTS_ORACLES_HPP_
