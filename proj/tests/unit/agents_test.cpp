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

#include <gtest/gtest.h>

#include <set>

#include "cookplan/agents.hpp"
#include "cookplan/eval.hpp"
#include "cookplan/layouts.hpp"
#include "cookplan/oracle.hpp"
#include "cookplan/planner.hpp"
#include "cookplan/proxy.hpp"

namespace cookplan {
namespace {

Convention plan_for(const Layout& layout, const std::string& instruction) {
  OracleBackend backend;
  return run_pipeline(PlanningContext::of(layout, instruction), backend, DecompositionProfile::haplan5())
      .convention;
}

constexpr const char* kPlacementOnly =
    "Please make onion soup, and you are only responsible for putting the onion into the pot.";

TEST(ConventionAgent, EmptyPlanStays) {
  const Layout layout = load_layout("many_orders");
  Convention c;
  ConventionAgent agent(PlayerId::AI, c);
  const GameState s = initial_state(layout);
  EXPECT_EQ(agent.act(s, layout), Action::Stay);
}

TEST(ConventionAgent, CyclesThroughItsEntries) {
  const Layout layout = load_layout("many_orders");
  const Convention c = plan_for(layout, "Please make onion soup.");
  ASSERT_EQ(c.plan_of(PlayerId::AI).size(), 6u);
  ConventionAgent ai(PlayerId::AI, c);
  StayPolicy partner;
  std::set<std::size_t> visited;
  std::size_t wraps = 0, last = 0;
  EpisodeConfig cfg;
  run_episode(layout, ai, partner, cfg, [&](const GameState&, const StepResult&) {
    if (ai.current_entry() < last) ++wraps;
    last = ai.current_entry();
    visited.insert(last);
  });
  EXPECT_EQ(visited.size(), 6u);
  EXPECT_GE(wraps, 1u);
}

TEST(WorkUnit, FromRefinedEntries) {
  const Layout layout = load_layout("many_orders");
  const Convention c = plan_for(layout, "Please make onion soup.");
  const auto& plan = c.plan_of(PlayerId::AI);
  const WorkUnit fetch = WorkUnit::from(plan.front(), c.objective);
  EXPECT_EQ(fetch.kind, WorkKind::Fetch);
  EXPECT_EQ(layout.tile(fetch.source), TileKind::OnionSource);
  const WorkUnit deliver = WorkUnit::from(plan.back(), c.objective);
  EXPECT_EQ(deliver.kind, WorkKind::Deliver);
  EXPECT_EQ(layout.tile(deliver.source), TileKind::DishSource);
  EXPECT_EQ(layout.tile(deliver.port), TileKind::ServingPort);
}

TEST(UnitDriver, ParkLeavesStationTiles) {
  const Layout layout = load_layout("many_orders");
  GameState s = initial_state(layout);
  s.player(PlayerId::AI).pos = GridPos{1, 3};  // below the first pot
  s.player(PlayerId::Human).pos = GridPos{3, 6};
  UnitDriver driver(PlayerId::AI, EpisodeConfig{});
  const Action a = driver.park(s, layout);
  ASSERT_NE(a, Action::Stay);
  const GridPos next = neighbor(s.player(PlayerId::AI).pos, *direction_of(a));
  EXPECT_TRUE(layout.walkable(next));
  s.player(PlayerId::AI).pos = GridPos{2, 4};
  EXPECT_EQ(driver.park(s, layout), Action::Stay);
}

class Floor : public ::testing::TestWithParam<std::string> {};

TEST_P(Floor, OraclePlannedConventionDelivers) {
  const Layout layout = load_layout(GetParam());
  const Convention c = plan_for(layout, kPlacementOnly);
  ConventionAgent ai(PlayerId::AI, c), human(PlayerId::Human, c);
  const EpisodeResult r = run_episode(layout, ai, human, EpisodeConfig{});
  const int floor = GetParam() == "many_orders" ? 3 : 1;
  EXPECT_GE(r.deliveries(), floor);
  EXPECT_EQ(r.score, 20 * r.deliveries());
}

TEST_P(Floor, RandomPreferencesNeverDeadlock) {
  const Layout layout = load_layout(GetParam());
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const PreferenceSpec spec = random_spec(layout, seed);
    const Convention c = plan_for(layout, gen_instruction(spec, layout, seed));
    ConventionAgent ai(PlayerId::AI, c), human(PlayerId::Human, c);
    const EpisodeResult r = run_episode(layout, ai, human, EpisodeConfig{});
    EXPECT_GE(r.deliveries(), 1) << "seed " << seed;
  }
}

INSTANTIATE_TEST_SUITE_P(Layouts, Floor, ::testing::ValuesIn(bundled_layout_names()),
                         [](const auto& info) { return info.param; });

// --- Proxies -------------------------------------------------------------------------

TEST(ProxyPreference, ParseAndRender) {
  const auto p = ProxyPreference::parse("proxy:placement+delivery:tomato:3+1");
  EXPECT_TRUE(p.placement);
  EXPECT_TRUE(p.delivery);
  EXPECT_EQ(p.ingredient, Ingredient::Tomato);
  EXPECT_EQ(p.pots, (std::vector<int>{1, 3}));
  EXPECT_EQ(p.to_string(), "proxy:placement+delivery:tomato:1+3");
  EXPECT_TRUE(p.covers(3));
  EXPECT_FALSE(p.covers(2));

  const auto d = ProxyPreference::parse("proxy:delivery::all");
  EXPECT_FALSE(d.placement);
  EXPECT_FALSE(d.ingredient.has_value());
  EXPECT_TRUE(d.covers(7));
  EXPECT_EQ(ProxyPreference::parse(d.to_string()), d);
}

TEST(ProxyPreference, RejectsMalformedSpecs) {
  for (const char* bad : {"placement:onion:all", "proxy:cooking:onion:all", "proxy:placement:leek:all",
                          "proxy:placement:onion:0", "proxy:placement:onion:x", "proxy:placement:onion"}) {
    EXPECT_THROW(ProxyPreference::parse(bad), std::invalid_argument) << bad;
  }
}

TEST(Proxy, IncompatibleWithLayout) {
  EXPECT_THROW(make_proxy(ProxyPreference::parse("proxy:delivery::2"), load_layout("soup_coordination")),
               IncompatiblePreference);
  EXPECT_THROW(make_proxy(ProxyPreference::parse("proxy:placement:tomato:all"), load_layout("counter_circle")),
               IncompatiblePreference);
  EXPECT_NO_THROW(make_proxy(ProxyPreference::parse("proxy:placement:tomato:all"), load_layout("many_orders")));
}

TEST(Proxy, PlacementAndDeliveryAloneServesSoup) {
  for (const auto& name : bundled_layout_names()) {
    const Layout layout = load_layout(name);
    auto proxy = make_proxy(ProxyPreference::parse("proxy:placement+delivery:onion:1"), layout);
    StayPolicy ai;
    const EpisodeResult r = run_episode(layout, ai, *proxy, EpisodeConfig{});
    EXPECT_GE(r.deliveries(), 1) << name;
  }
}

TEST(Proxy, DeliveryOnlyAloneNeverPlaces) {
  const Layout layout = load_layout("many_orders");
  auto proxy = make_proxy(ProxyPreference::parse("proxy:delivery::all"), layout);
  StayPolicy ai;
  const EpisodeResult r = run_episode(layout, ai, *proxy, EpisodeConfig{});
  EXPECT_EQ(r.score, 0);
  for (const Event& e : r.event_log) EXPECT_NE(e.kind, EventKind::PlaceIngredient);
}

TEST(Proxy, PlacementOnlyNeverHoldsADish) {
  const Layout layout = load_layout("counter_circle");
  const auto pref = ProxyPreference::parse("proxy:placement:onion:all");
  const Convention c = plan_for(layout, gen_instruction(complement_spec(pref, layout), layout, 0));
  ConventionAgent ai(PlayerId::AI, c);
  auto proxy = make_proxy(pref, layout);
  int ticks = 0;
  run_episode(layout, ai, *proxy, EpisodeConfig{}, [&](const GameState& s, const StepResult&) {
    const HeldItem& held = s.player(PlayerId::Human).held;
    EXPECT_NE(held.kind, HeldItem::Kind::CleanDish) << s.tick;
    EXPECT_NE(held.kind, HeldItem::Kind::SoupDish) << s.tick;
    ++ticks;
  });
  EXPECT_EQ(ticks, 400);
}

std::vector<std::string> partner_specs(const Layout& layout) {
  std::vector<std::string> out;
  const int n = static_cast<int>(layout.pots().size());
  const bool onion = !layout.tiles_of(TileKind::OnionSource).empty();
  const bool tomato = !layout.tiles_of(TileKind::TomatoSource).empty();
  for (int k = 0; k <= n; ++k) {
    const std::string pots = k == 0 ? "all" : std::to_string(k);
    out.push_back("proxy:delivery::" + pots);
    if (onion) out.push_back("proxy:placement:onion:" + pots);
    if (tomato) out.push_back("proxy:placement:tomato:" + pots);
    if (onion) out.push_back("proxy:placement+delivery:onion:" + pots);
  }
  return out;
}

class Purity : public ::testing::TestWithParam<std::string> {};

TEST_P(Purity, ProxyEventsMatchPreference) {
  const Layout layout = load_layout(GetParam());
  for (const auto& text : partner_specs(layout)) {
    const ProxyPreference pref = ProxyPreference::parse(text);
    const PreferenceSpec spec = complement_spec(pref, layout);
    const Convention c = plan_for(layout, gen_instruction(spec, layout, 0));
    ConventionAgent ai(PlayerId::AI, c);
    auto proxy = make_proxy(pref, layout);
    const EpisodeResult r = run_episode(layout, ai, *proxy, EpisodeConfig{});
    EXPECT_TRUE(preference_pure(r, layout, PlayerId::Human, pref)) << text;
    EXPECT_EQ(r.score, 20 * r.deliveries()) << text;
  }
}

INSTANTIATE_TEST_SUITE_P(Layouts, Purity, ::testing::ValuesIn(bundled_layout_names()),
                         [](const auto& info) { return info.param; });

}  // namespace
}  // namespace cookplan
