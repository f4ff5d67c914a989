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

#include "cookplan/layouts.hpp"

#include <utility>

namespace cookplan {

namespace assets {
const std::vector<std::pair<std::string_view, std::string_view>>& layout_table();
const std::vector<std::pair<std::string_view, std::string_view>>& prompt_table();
}  // namespace assets

namespace {

std::string_view find_asset(const std::vector<std::pair<std::string_view, std::string_view>>& t,
                            std::string_view name) {
  for (const auto& [key, text] : t) {
    if (key == name) return text;
  }
  return {};
}

}  // namespace

const std::vector<std::string>& bundled_layout_names() {
  static const std::vector<std::string> names = {
      "counter_circle", "asymmetric_advantages", "soup_coordination", "distant_tomato",
      "many_orders"};
  return names;
}

const std::vector<std::string>& example_layout_names() {
  static const std::vector<std::string> names = {"session_example", "replan_example"};
  return names;
}

std::string_view layout_source(std::string_view name) {
  std::string_view text = find_asset(assets::layout_table(), name);
  if (text.empty()) throw UnknownLayout(name);
  return text;
}

Layout load_layout(std::string_view name) {
  return parse_layout(layout_source(name), std::string(name));
}

std::string_view prompt_asset(std::string_view name) {
  std::string_view text = find_asset(assets::prompt_table(), name);
  if (text.empty()) throw std::out_of_range("unknown prompt asset: " + std::string(name));
  return text;
}

}  // namespace cookplan
