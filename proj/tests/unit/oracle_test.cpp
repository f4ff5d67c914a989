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

#include <random>

#include "cookplan/layouts.hpp"
#include "cookplan/oracle.hpp"
#include "support/golden.hpp"

namespace cookplan {
namespace {

using testing::golden;
using D = PotDescriptor::Kind;

RoughWorkItem F(int r, int c, std::optional<int> t = std::nullopt, PlayerId who = PlayerId::AI) {
  return {who, WorkKind::Fetch, {r, c}, t};
}
RoughWorkItem Dl(int r, int c, std::optional<int> t = std::nullopt, PlayerId who = PlayerId::AI) {
  return {who, WorkKind::Deliver, {r, c}, t};
}

std::string fill(std::string_view asset, const std::string& query) {
  std::string p(prompt_asset(asset));
  const std::string slot = "{{query}}";
  p.replace(p.find(slot), slot.size(), query);
  const std::string wait = "{{cook_wait}}";
  if (auto at = p.find(wait); at != std::string::npos) p.replace(at, wait.size(), "20");
  return p;
}

// The replan goldens carry no step estimates.
Convention untimed(Convention c) {
  for (auto* plan : {&c.ai_plan, &c.human_plan}) {
    for (auto& e : *plan) e.est_steps = 0;
  }
  return c;
}

const LayoutFacts& session_facts() {
  static const LayoutFacts f = LayoutFacts::of(load_layout("session_example"));
  return f;
}

TEST(ResolvePot, Descriptors) {
  const std::vector<GridPos> pots{{1, 2}, {1, 3}, {1, 4}};
  EXPECT_EQ(resolve_pot({D::Left, {}}, pots), (GridPos{1, 2}));
  EXPECT_EQ(resolve_pot({D::Middle, {}}, pots), (GridPos{1, 3}));
  EXPECT_EQ(resolve_pot({D::Right, {}}, pots), (GridPos{1, 4}));
  EXPECT_EQ(resolve_pot(PotDescriptor::at({1, 3}), pots), (GridPos{1, 3}));
  EXPECT_THROW(resolve_pot({D::Below, {}}, pots), OracleError);
  EXPECT_THROW(resolve_pot(PotDescriptor::at({9, 9}), pots), OracleError);

  const std::vector<GridPos> stacked{{1, 3}, {2, 3}};
  EXPECT_EQ(resolve_pot({D::Below, {}}, stacked), (GridPos{2, 3}));
  EXPECT_EQ(resolve_pot({D::Above, {}}, stacked), (GridPos{1, 3}));
  try {
    resolve_pot({D::Left, {}}, stacked);
    FAIL();
  } catch (const OracleError& e) {
    EXPECT_EQ(e.code(), OracleError::Code::AmbiguousDescriptor);
  }
}

TEST(Assignment, RoughExample) {
  KeyInfo info = parse_key_info(golden("session1_example4"));
  RoughPlan plan = rough_plan(info, session_facts().pots);
  EXPECT_EQ(plan.ai, (std::vector<RoughWorkItem>{F(1, 2), Dl(1, 2), Dl(1, 3)}));
  EXPECT_EQ(plan.human, (std::vector<RoughWorkItem>{F(1, 3, {}, PlayerId::Human),
                                                    F(1, 4, {}, PlayerId::Human),
                                                    Dl(1, 4, {}, PlayerId::Human)}));
  EXPECT_EQ(plan, parse_rough_plan(golden("session2_example1")));
}

TEST(Assignment, PartitionProperty) {
  std::mt19937_64 rng(7);
  for (const auto& name : bundled_layout_names()) {
    const Layout layout = load_layout(name);
    for (int trial = 0; trial < 50; ++trial) {
      auto gt = ground_truth(random_spec(layout, rng()), layout);
      std::set<std::pair<WorkKind, GridPos>> units;
      for (const auto* side : {&gt.rough.ai, &gt.rough.human}) {
        for (const auto& it : *side) EXPECT_TRUE(units.insert({it.kind, it.pot}).second);
      }
      EXPECT_EQ(units.size(), 2 * layout.pots().size());
    }
  }
}

TEST(Refine, ExamplePicks) {
  const auto& f = session_facts();
  EXPECT_EQ(refine(F(1, 2), f, Ingredient::Onion), (RefinedWorkItem{FetchPlan{{2, 1}, {1, 2}}}));
  EXPECT_EQ(refine(Dl(1, 3), f, Ingredient::Tomato),
            (RefinedWorkItem{DeliverPlan{{4, 1}, {1, 3}, {5, 2}}}));
  auto below = parse_constraints("You can only take onions from the onion dots below.");
  EXPECT_EQ(refine(F(1, 2), f, Ingredient::Onion, below),
            (RefinedWorkItem{FetchPlan{{3, 1}, {1, 2}}}));
}

TEST(Refine, NearestProperty) {
  std::mt19937_64 rng(11);
  for (const auto& name : bundled_layout_names()) {
    const Layout layout = load_layout(name);
    const auto facts = LayoutFacts::of(layout);
    for (int trial = 0; trial < 30; ++trial) {
      auto spec = random_spec(layout, rng());
      auto gt = ground_truth(spec, layout);
      for (const auto& [key, r] : gt.refined) {
        if (const auto* fp = std::get_if<FetchPlan>(&r)) {
          auto cands = filter_sources(facts.sources(spec.objective), source_item(spec.objective),
                                      spec.source_constraints);
          for (GridPos c : cands) EXPECT_LE(manhattan(fp->source, fp->pot), manhattan(c, fp->pot));
        } else {
          const auto& dp = std::get<DeliverPlan>(r);
          for (GridPos p : facts.ports) EXPECT_LE(manhattan(dp.port, dp.pot), manhattan(p, dp.pot));
        }
      }
    }
  }
}

TEST(Refine, NoCandidateWhenEverySourceForbidden) {
  const auto facts = LayoutFacts::of(load_layout("replan_example"));
  auto cs = parse_constraints(
      "do not take onions from the onion dots below. do not take onions from the onion dots above");
  try {
    refine(F(3, 6), facts, Ingredient::Onion, cs);
    FAIL();
  } catch (const OracleError& e) {
    EXPECT_EQ(e.code(), OracleError::Code::NoCandidate);
  }
}

TEST(Time, Examples) {
  EXPECT_EQ(estimate_time(FetchPlan{{2, 1}, {1, 2}}), 12);
  EXPECT_EQ(estimate_time(DeliverPlan{{4, 1}, {1, 3}, {5, 2}}), 12);
}

TEST(Time, ScalesWithDistance) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> d(0, 12);
  for (int i = 0; i < 500; ++i) {
    GridPos a{d(rng), d(rng)}, b{d(rng), d(rng)}, c{d(rng), d(rng)};
    EXPECT_EQ(estimate_time(FetchPlan{a, b}), 6 * manhattan(a, b));
    const int tri = estimate_time(DeliverPlan{a, b, c});
    EXPECT_EQ(tri, manhattan(a, b) + manhattan(b, c) + manhattan(c, a));
    EXPECT_EQ(tri % 2, 0);
  }
}

TEST(Schedule, Example) {
  auto order = schedule({F(1, 2, 12), Dl(1, 2, 10), F(1, 3, 18)});
  EXPECT_EQ(order, (std::vector<RoughWorkItem>{F(1, 2, 12), F(1, 3, 18), Dl(1, 2, 10)}));
  EXPECT_EQ(simulate_start_times(order), (std::vector<int>{0, 12, 32}));
}

TEST(Schedule, FetchesFillTheWait) {
  auto order = schedule({F(1, 2, 12), Dl(1, 2, 10), F(1, 3, 8), F(1, 4, 10)});
  EXPECT_EQ(order, (std::vector<RoughWorkItem>{F(1, 2, 12), F(1, 3, 8), F(1, 4, 10), Dl(1, 2, 10)}));
  EXPECT_EQ(schedule({F(1, 2, 6)}), (std::vector<RoughWorkItem>{F(1, 2, 6)}));
}

TEST(Schedule, ExternalPotAlwaysReady) {
  auto order = schedule({Dl(1, 3, 12), F(1, 2, 12)});
  EXPECT_EQ(order.front(), Dl(1, 3, 12));
}

TEST(Schedule, PermutationFeasibleAndNoWorse) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<RoughWorkItem> items;
    for (int pot = 1; pot <= 3; ++pot) {
      if (rng() % 2) items.push_back(F(1, pot, 1 + static_cast<int>(rng() % 30)));
      if (rng() % 2) items.push_back(Dl(1, pot, 1 + static_cast<int>(rng() % 30)));
    }
    if (items.empty()) continue;
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.kind < b.kind; });
    auto order = schedule(items);
    ASSERT_TRUE(std::is_permutation(order.begin(), order.end(), items.begin(), items.end()));
    EXPECT_TRUE(plan_feasible(order));
    auto finish = [](const std::vector<RoughWorkItem>& o) {
      auto s = simulate_start_times(o);
      return s.back() + *o.back().est_steps;
    };
    EXPECT_LE(finish(order), finish(items));
  }
}

TEST(GroundTruth, SessionConvention) {
  KeyInfo info = parse_key_info(golden("session1_example4"));
  auto gt = ground_truth(info, session_facts());
  EXPECT_TRUE(same_plan(gt.convention, parse_convention(golden("session2_convention"))));
}

TEST(GroundTruth, ReplanRounds) {
  const auto facts = LayoutFacts::of(load_layout("replan_example"));
  const std::string instr = "Please make onion soup.";
  auto r1 = ground_truth(interpret_instruction(instr), facts);
  EXPECT_EQ(r1.key_info, parse_key_info(golden("replan_round1_session1")));
  EXPECT_EQ(r1.rough, parse_rough_plan(golden("replan_round1_session2")));
  EXPECT_TRUE(same_plan(untimed(r1.convention), parse_convention(golden("replan_round1_convention"))));

  auto r2 = ground_truth(interpret_instruction(instr + " " + golden("replan_feedback")), facts);
  auto want = normalize(parse_key_info(golden("replan_round2_session1")), facts.pots);
  auto got = normalize(r2.key_info, facts.pots);
  EXPECT_EQ(got.fetch, want.fetch);
  EXPECT_EQ(got.deliver, want.deliver);
  EXPECT_EQ(got.constraints.size(), 1u);
  EXPECT_TRUE(same_plan(untimed(r2.convention), parse_convention(golden("replan_round2_convention"))));
}

TEST(Grammar, ExampleInstructions) {
  const auto& pots = session_facts().pots;
  struct Case {
    const char* text;
    const char* golden;
  };
  for (const Case& c : {Case{"Please join me in making tomato soup.", "session1_example1"},
                        Case{"Please make tomato soup, and you are only responsible for putting "
                             "the tomato into the pot.",
                             "session1_example2"},
                        Case{"Please use the pot on the right to make onion soup.", "session1_example3"},
                        Case{"Please use the pot on the left to make onion soup and be responsible "
                             "for the delivery of the middle pot.",
                             "session1_example4"}}) {
    EXPECT_EQ(normalize(interpret_instruction(c.text), pots),
              normalize(parse_key_info(golden(c.golden)), pots))
        << c.text;
  }
  EXPECT_THROW(interpret_instruction("hello there"), OracleError);
}

TEST(Grammar, GeneratedInstructionsRoundTrip) {
  std::mt19937_64 rng(21);
  for (const auto& name : bundled_layout_names()) {
    const Layout layout = load_layout(name);
    for (int trial = 0; trial < 200; ++trial) {
      const auto spec = random_spec(layout, rng());
      ASSERT_NO_THROW(validate(spec, layout));
      const std::string text = gen_instruction(spec, layout, rng());
      const auto truth = ground_truth(spec, layout);
      EXPECT_EQ(normalize(interpret_instruction(text), layout.pots()),
                normalize(truth.key_info, layout.pots()))
          << name << ": " << text;
    }
  }
}

TEST(Prompts, Classify) {
  EXPECT_EQ(classify_prompt(prompt_asset("session1_key_info")), PromptKind::KeyInfo);
  EXPECT_EQ(classify_prompt(prompt_asset("session2_rough")), PromptKind::Rough);
  EXPECT_EQ(classify_prompt(prompt_asset("session3_refine")), PromptKind::Refine);
  EXPECT_EQ(classify_prompt(prompt_asset("session4_time")), PromptKind::Time);
  EXPECT_EQ(classify_prompt(prompt_asset("session5_schedule")), PromptKind::Schedule);
  EXPECT_EQ(classify_prompt("what is the weather"), PromptKind::Unknown);
  EXPECT_THROW(oracle_answer("what is the weather"), OracleError);
}

TEST(Prompts, AnswersParseToTruth) {
  const auto& f = session_facts();
  EXPECT_EQ(parse_key_info(oracle_answer(fill(
                "session1_key_info",
                "Please use the pot on the right to make onion soup."))),
            parse_key_info(golden("session1_example3")));

  KeyInfo info = parse_key_info(golden("session1_example4"));
  const std::string rough_q = "(1,2), (1,3), (1,4)\nKey information in human instructions:\n" +
                              render_key_info_query(info);
  EXPECT_EQ(parse_rough_plan(oracle_answer(fill("session2_rough", rough_q))),
            parse_rough_plan(golden("session2_example1")));

  const std::string scen =
      "\nScenario information is:\nLocation of Tomatoes: (2,5), (3,5)\nLocation of Onions: (2,1), "
      "(3,1)\nLocation of the dining plate: (4,1), (4,5)\nLocation of the delivery port: (5,2)";
  const std::string q3 = "the human instructions are: Please prepare onions. You can only take "
                         "onions from the onion dots below.\nThe rough work content is: Fetch "
                         "onions for pot at (1,2)" +
                         scen;
  EXPECT_EQ(parse_refined(oracle_answer(fill("session3_refine", q3))),
            parse_refined(golden("session3_example3")));

  const std::string q4 = "the rough work content is: Fetch onions for pot at (1,2)\nThe refined "
                         "work content is: Take the onion from position (2,1) and place it in the "
                         "pot (1,2).";
  const std::string a4 = oracle_answer(fill("session4_time", q4));
  EXPECT_EQ(a4, golden("session4_example1"));
  EXPECT_EQ(parse_time(a4), 12);

  const std::string q5 = render_timed_items({F(1, 2, 12), Dl(1, 2, 10), F(1, 3, 18)}, Ingredient::Onion);
  EXPECT_EQ(parse_schedule(oracle_answer(fill("session5_schedule", q5))),
            parse_schedule(golden("session5_example1")));
  (void)f;
}

}  // namespace
}  // namespace cookplan
