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

#include <cstdio>
#include <fstream>

#include "cookplan/layouts.hpp"
#include "cookplan/proxy.hpp"
#include "cookplan/server.hpp"
#include "cookplan/service.hpp"
#include "support/golden.hpp"

namespace cookplan {
namespace {

using testing::golden;
using nlohmann::json;

constexpr const char* kJoinMe = "Please join me in making onion soup.";

Convention untimed(Convention c) {
  for (auto* plan : {&c.ai_plan, &c.human_plan}) {
    for (auto& e : *plan) e.est_steps = 0;
  }
  return c;
}

std::string expect_error(const std::function<void()>& f) {
  try {
    f();
  } catch (const ServiceError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no ServiceError";
  return "";
}

std::string script_file(const std::string& name, const std::string& text) {
  const std::string path = ::testing::TempDir() + name;
  std::ofstream(path) << text;
  return path;
}

TEST(GameService, CreateStartsInPlanning) {
  GameService svc;
  const std::string a = svc.create_game("many_orders");
  const std::string b = svc.create_game("many_orders");
  EXPECT_NE(a, b);
  EXPECT_EQ(svc.phase(a), Phase::Planning);
  EXPECT_EQ(svc.state(a), initial_state(load_layout("many_orders")));
  const json v = svc.view(a);
  EXPECT_EQ(v.at("phase"), "planning");
  EXPECT_EQ(v.at("remaining_ticks"), 400);
  EXPECT_TRUE(v.at("convention").is_null());
}

TEST(GameService, CreateRejectsBadInput) {
  GameService svc;
  EXPECT_EQ(expect_error([&] { svc.create_game("nowhere"); }), "UnknownLayout");
  GameConfig c;
  c.profile = "haplan-9";
  EXPECT_EQ(expect_error([&] { svc.create_game("many_orders", c); }), "BadRequest");
  c = {};
  c.backend = "carrier-pigeon";
  EXPECT_EQ(expect_error([&] { svc.create_game("many_orders", c); }), "BadRequest");
  EXPECT_EQ(expect_error([&] { svc.view("g999"); }), "GameNotFound");
}

TEST(GameService, ReplanDialogue) {
  GameService svc;
  const std::string id = svc.create_game("replan_example");
  const PlanReply first = svc.submit_instruction(id, kJoinMe);
  EXPECT_EQ(svc.phase(id), Phase::Reviewing);
  EXPECT_TRUE(same_plan(untimed(first.convention), parse_convention(golden("replan_round1_convention"))));
  EXPECT_FALSE(first.transcripts.empty());

  const PlanReply second = svc.submit_feedback(id, golden("replan_feedback"));
  EXPECT_EQ(svc.phase(id), Phase::Reviewing);
  EXPECT_TRUE(same_plan(untimed(second.convention), parse_convention(golden("replan_round2_convention"))));
  EXPECT_EQ(svc.view(id).at("feedback_history").size(), 1u);

  const PlanReply same = svc.submit_feedback(id, "");
  EXPECT_TRUE(same_plan(same.convention, second.convention));
}

TEST(GameService, SecondInstructionReplacesPending) {
  GameService svc;
  const std::string id = svc.create_game("replan_example");
  svc.submit_instruction(id, kJoinMe);
  svc.submit_feedback(id, golden("replan_feedback"));
  const PlanReply again = svc.submit_instruction(id, kJoinMe);
  EXPECT_TRUE(same_plan(untimed(again.convention), parse_convention(golden("replan_round1_convention"))));
  EXPECT_TRUE(svc.view(id).at("feedback_history").empty());
}

TEST(GameService, StageFailureCarriesStage) {
  GameService svc;
  GameConfig c;
  c.backend = "mock:" + script_file("garbage.txt", "no plan here\n-----\nstill nothing\n-----\nnope\n");
  const std::string id = svc.create_game("many_orders", c);
  try {
    svc.submit_instruction(id, "Please make onion soup.");
    FAIL();
  } catch (const ServiceError& e) {
    EXPECT_EQ(e.code(), "StageFailed");
    ASSERT_TRUE(e.stage().has_value());
    EXPECT_EQ(*e.stage(), 1);
    EXPECT_EQ(e.body().at("error").at("stage"), 1);
  }
  EXPECT_EQ(svc.phase(id), Phase::Planning);
}

TEST(GameService, FeedbackFailureKeepsPreviousPlan) {
  GameService svc;
  const std::string id = svc.create_game("replan_example");
  const PlanReply first = svc.submit_instruction(id, kJoinMe);
  EXPECT_EQ(expect_error([&] {
              svc.submit_feedback(id,
                                  "do not take onions from the onion dots below. "
                                  "do not take onions from the onion dots above");
            }),
            "StageFailed");
  EXPECT_TRUE(svc.view(id).at("feedback_history").empty());
  EXPECT_EQ(svc.view(id).at("convention").at("text"), render_convention(first.convention));
}

TEST(GameService, PhaseMachine) {
  GameService svc;
  const std::string id = svc.create_game("replan_example");
  EXPECT_EQ(expect_error([&] { svc.accept(id); }), "PhaseError");
  EXPECT_EQ(expect_error([&] { svc.submit_feedback(id, "x"); }), "PhaseError");
  EXPECT_FALSE(svc.step(id));
  svc.submit_instruction(id, kJoinMe);
  svc.accept(id);
  EXPECT_EQ(svc.phase(id), Phase::Playing);
  EXPECT_EQ(expect_error([&] { svc.submit_feedback(id, "x"); }), "PhaseError");
  EXPECT_EQ(expect_error([&] { svc.submit_instruction(id, kJoinMe); }), "PhaseError");
  EXPECT_EQ(expect_error([&] { svc.accept(id); }), "PhaseError");
}

TEST(GameService, HeadlessRunFinishesAndFreezes) {
  GameService svc;
  const std::string id = svc.create_game("replan_example");
  const PlanReply plan = svc.submit_instruction(id, kJoinMe);
  svc.accept(id);
  int ticks = 0;
  while (svc.step(id)) ++ticks;
  EXPECT_EQ(ticks, 400);
  EXPECT_EQ(svc.phase(id), Phase::Finished);
  const auto result = svc.result(id);
  ASSERT_TRUE(result.has_value());

  // With no human input the AI still does its own fetching.
  int fetches = 0;
  for (const auto& e : plan.convention.ai_plan) fetches += e.rough.kind == WorkKind::Fetch ? 1 : 0;
  int placed = 0;
  for (const Event& e : result->event_log) {
    placed += e.agent == PlayerId::AI && e.kind == EventKind::PlaceIngredient ? 1 : 0;
  }
  EXPECT_GE(placed, fetches);
  EXPECT_EQ(result->score, 20 * result->deliveries());

  const json before = svc.view(id);
  EXPECT_EQ(before.at("result").at("score"), result->score);
  EXPECT_EQ(expect_error([&] { svc.queue_action(id, Action::Up); }), "PhaseError");
  EXPECT_EQ(expect_error([&] { svc.submit_instruction(id, kJoinMe); }), "PhaseError");
  EXPECT_EQ(expect_error([&] { svc.submit_feedback(id, ""); }), "PhaseError");
  EXPECT_EQ(expect_error([&] { svc.accept(id); }), "PhaseError");
  EXPECT_FALSE(svc.step(id));
  EXPECT_EQ(svc.view(id), before);
}

TEST(GameService, SilenceRecordsStays) {
  GameService svc;
  const std::string id = svc.create_game("many_orders");
  svc.submit_instruction(id, "Please make onion soup.");
  svc.accept(id);
  svc.queue_action(id, Action::Left);
  svc.queue_action(id, Action::Right);
  for (int k = 0; k < 6; ++k) svc.step(id);
  const auto actions = svc.human_actions(id);
  ASSERT_EQ(actions.size(), 6u);
  EXPECT_EQ(actions[0], Action::Right);
  for (std::size_t k = 1; k < actions.size(); ++k) EXPECT_EQ(actions[k], Action::Stay);
}

TEST(GameService, FreePlayAcceptsWithoutConvention) {
  GameService svc;
  GameConfig c;
  c.free_play = true;
  c.episode.horizon = 10;
  const std::string id = svc.create_game("many_orders", c);
  svc.accept(id);
  EXPECT_EQ(svc.phase(id), Phase::Playing);
  for (int k = 0; k < 10; ++k) svc.step(id);
  EXPECT_EQ(svc.phase(id), Phase::Finished);
  EXPECT_EQ(svc.state(id).player(PlayerId::AI).pos, load_layout("many_orders").spawn(PlayerId::AI));
}

TEST(GameService, ScriptedHumanDeliveryShowsInNextSnapshot) {
  GameService svc;
  GameConfig c;
  c.free_play = true;
  const std::string id = svc.create_game("counter_circle", c);
  svc.accept(id);
  const Layout layout = svc.layout(id);
  ProxyPolicy human(PlayerId::Human, ProxyPreference::parse("proxy:placement+delivery:onion:all"), layout, {});
  int deliveries = 0;
  while (svc.phase(id) == Phase::Playing) {
    const GameState before = svc.state(id);
    const HeldItem held = before.player(PlayerId::Human).held;
    svc.queue_action(id, human.act(before, layout));
    svc.step(id);
    const Snapshot snap = svc.snapshot(id);
    const bool served = held.kind == HeldItem::Kind::SoupDish &&
                        svc.state(id).player(PlayerId::Human).held.empty();
    EXPECT_EQ(snap.body.at("score").get<int>(), before.score + (served ? 20 : 0)) << snap.tick;
    deliveries += served ? 1 : 0;
  }
  EXPECT_GE(deliveries, 1);
  EXPECT_EQ(svc.snapshot(id).body.at("type"), "finished");
}

TEST(GameService, TickClock) {
  ServiceOptions opts;
  opts.tick_interval = std::chrono::milliseconds(100);
  GameService svc(opts);
  const std::string id = svc.create_game("many_orders");
  svc.submit_instruction(id, "Please make onion soup.");
  svc.accept(id);
  const auto t0 = std::chrono::steady_clock::now();
  svc.resume_clock(id, t0);
  EXPECT_FALSE(svc.step_if_due(id, t0 + std::chrono::milliseconds(50)));
  EXPECT_TRUE(svc.step_if_due(id, t0 + std::chrono::milliseconds(100)));
  EXPECT_FALSE(svc.step_if_due(id, t0 + std::chrono::milliseconds(150)));
  // A long pause does not make up the missed ticks.
  EXPECT_TRUE(svc.step_if_due(id, t0 + std::chrono::seconds(10)));
  EXPECT_FALSE(svc.step_if_due(id, t0 + std::chrono::seconds(10)));
  EXPECT_EQ(svc.state(id).tick, 2);
}

TEST(GameService, SnapshotShape) {
  GameService svc;
  const std::string id = svc.create_game("many_orders");
  const json body = svc.snapshot(id).body;
  for (const char* key : {"type", "phase", "tick", "score", "remaining_ticks", "state"}) {
    EXPECT_TRUE(body.contains(key)) << key;
  }
  const json& state = body.at("state");
  ASSERT_EQ(state.at("players").size(), 2u);
  EXPECT_EQ(state.at("players")[0].at("id"), "ai");
  EXPECT_EQ(state.at("pots").size(), load_layout("many_orders").pots().size());
}

}  // namespace
}  // namespace cookplan
