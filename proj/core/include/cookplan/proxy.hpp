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

// Scripted partners with a fixed coordination preference.

#ifndef COOKPLAN_PROXY_HPP_
#define COOKPLAN_PROXY_HPP_

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cookplan/agents.hpp"

namespace cookplan {

class IncompatiblePreference : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ProxyPreference {
  bool placement = false;
  bool delivery = false;
  std::optional<Ingredient> ingredient;
  std::vector<int> pots;  // 1-based pot numbers; empty means every pot

  /// `proxy:<task>[+<task>]:<ingredient>:<pots>`, e.g. `proxy:placement:onion:all`,
  /// `proxy:delivery::2`, `proxy:placement+delivery:tomato:1+3`.
  /// Throws std::invalid_argument.
  static ProxyPreference parse(std::string_view text);
  std::string to_string() const;

  bool covers(int pot_number) const;

  friend bool operator==(const ProxyPreference&, const ProxyPreference&) = default;
};

class ProxyPolicy : public Policy {
 public:
  ProxyPolicy(PlayerId self, ProxyPreference pref, const Layout& layout, EpisodeConfig config);

  Action act(const GameState& state, const Layout& layout) override;
  std::string name() const override { return pref_.to_string(); }
  const ProxyPreference& preference() const { return pref_; }

 private:
  std::optional<WorkUnit> pick(const GameState& state, const Layout& layout);
  bool still_useful(const WorkUnit& unit, const GameState& state) const;

  ProxyPreference pref_;
  Ingredient ingredient_ = Ingredient::Onion;
  std::vector<GridPos> pots_;
  UnitDriver driver_;
  std::optional<WorkUnit> current_;
  std::size_t next_pot_ = 0;
};

/// Throws IncompatiblePreference when the layout cannot serve the preference.
std::unique_ptr<ProxyPolicy> make_proxy(const ProxyPreference& pref, const Layout& layout,
                                        PlayerId self = PlayerId::Human, EpisodeConfig config = {});

}  // namespace cookplan

#endif  // COOKPLAN_PROXY_HPP_
