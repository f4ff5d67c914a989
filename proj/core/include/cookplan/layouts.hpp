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

#ifndef COOKPLAN_LAYOUTS_HPP_
#define COOKPLAN_LAYOUTS_HPP_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cookplan/kitchen.hpp"

namespace cookplan {

class UnknownLayout : public std::runtime_error {
 public:
  explicit UnknownLayout(std::string_view name)
      : std::runtime_error("unknown layout: " + std::string(name)) {}
};

/// The five benchmark kitchens, in presentation order.
const std::vector<std::string>& bundled_layout_names();

/// Small kitchens that reproduce the coordinates of the worked planning
/// examples: `session_example` and `replan_example`.
const std::vector<std::string>& example_layout_names();

/// ASCII source of any bundled or example layout.
std::string_view layout_source(std::string_view name);

/// Parses a bundled or example layout by name. Throws UnknownLayout.
Layout load_layout(std::string_view name);

/// Raw prompt template by asset name (e.g. "session1_key_info").
std::string_view prompt_asset(std::string_view name);

}  // namespace cookplan

#endif  // COOKPLAN_LAYOUTS_HPP_
