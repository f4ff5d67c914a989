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

#include <random>

#include <gtest/gtest.h>

#include "cookplan/convention.hpp"
#include "support/golden.hpp"

namespace cookplan {
namespace {

using testing::golden;
using D = PotDescriptor::Kind;

RoughWorkItem F(int r, int c, PlayerId who = PlayerId::AI) {
  return {who, WorkKind::Fetch, {r, c}, std::nullopt};
}
RoughWorkItem Dl(int r, int c, PlayerId who = PlayerId::AI) {
  return {who, WorkKind::Deliver, {r, c}, std::nullopt};
}

TEST(KeyInfo, ExampleFour) {
  KeyInfo k = parse_key_info(golden("session1_example4"));
  EXPECT_EQ(k.objective, Ingredient::Onion);
  EXPECT_EQ(k.ai_fetch, PotSelector::of({{D::Left, {}}}));
  EXPECT_EQ(k.ai_deliver, PotSelector::of({{D::Left, {}}, {D::Middle, {}}}));
  EXPECT_TRUE(k.constraints.empty());
}

TEST(KeyInfo, OtherExamples) {
  KeyInfo k1 = parse_key_info(golden("session1_example1"));
  EXPECT_EQ(k1.objective, Ingredient::Tomato);
  EXPECT_EQ(k1.ai_fetch, PotSelector::all());
  EXPECT_EQ(k1.ai_deliver, PotSelector::all());
  KeyInfo k2 = parse_key_info(golden("session1_example2"));
  EXPECT_EQ(k2.ai_deliver, PotSelector::not_mentioned());
  KeyInfo k3 = parse_key_info(golden("session1_example3"));
  EXPECT_EQ(k3.ai_fetch, PotSelector::of({{D::Right, {}}}));
  KeyInfo r2 = parse_key_info(golden("replan_round2_session1"));
  EXPECT_EQ(r2.ai_fetch, PotSelector::all());
  EXPECT_EQ(r2.ai_deliver, PotSelector::not_mentioned());
}

TEST(KeyInfo, MissingObjective) {
  try {
    parse_key_info("AI’s jobs:\nFetching vegetables: All pots.\nDelivering food: All pots.");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.expected(), "objective");
  }
}

TEST(KeyInfo, RoundTripWithRestrictionsAndCoordinates) {
  KeyInfo k;
  k.objective = Ingredient::Tomato;
  k.ai_fetch = PotSelector::of({PotDescriptor::at({0, 4}), {D::Below, {}}});
  k.ai_deliver = PotSelector::not_mentioned();
  k.constraints = {{SourceItem::Tomato, SourceConstraint::Restriction::OnlyFrom,
                    SourceDescriptor::Right},
                   {SourceItem::Dish, SourceConstraint::Restriction::Forbidden,
                    SourceDescriptor::Above}};
  EXPECT_EQ(parse_key_info(render_key_info(k)), k);
  EXPECT_EQ(parse_key_info(render_key_info_query(k)).ai_fetch, k.ai_fetch);
}

TEST(Constraints, InstructionPhrases) {
  auto c = parse_constraints(golden("replan_feedback"));
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0], (SourceConstraint{SourceItem::Onion, SourceConstraint::Restriction::Forbidden,
                                    SourceDescriptor::Below}));
  auto only = parse_constraints(
      "Please prepare onions. You can only take onions from the onion dots below.");
  ASSERT_EQ(only.size(), 1u);
  EXPECT_EQ(only[0].restriction, SourceConstraint::Restriction::OnlyFrom);
  EXPECT_TRUE(parse_constraints("Please prepare onions.").empty());
}

TEST(RoughPlan, SessionTwoExample) {
  RoughPlan p = parse_rough_plan(golden("session2_example1"));
  EXPECT_EQ(p.ai, (std::vector<RoughWorkItem>{F(1, 2), Dl(1, 2), Dl(1, 3)}));
  EXPECT_EQ(p.human, (std::vector<RoughWorkItem>{F(1, 3, PlayerId::Human),
                                                 F(1, 4, PlayerId::Human),
                                                 Dl(1, 4, PlayerId::Human)}));
}

TEST(RoughPlan, InlineNoneSection) {
  RoughPlan p = parse_rough_plan(golden("replan_round1_session2"));
  EXPECT_EQ(p.ai, (std::vector<RoughWorkItem>{F(3, 6), Dl(3, 6)}));
  EXPECT_TRUE(p.human.empty());
}

TEST(RoughPlan, RenderRoundTrip) {
  RoughPlan p{{F(1, 2), Dl(1, 2)}, {}};
  std::string text = render_rough_plan(p, Ingredient::Onion, {"the pot on the left is pot (1,2)"});
  EXPECT_NE(text.find("None"), std::string::npos);
  EXPECT_EQ(parse_rough_plan(text), p);
}

TEST(RoughPlan, MalformedCoordinate) {
  EXPECT_THROW(parse_rough_plan("So, the rough work contents that AI need to do are:\n"
                                "(1) Fetch onions for pot at (1,)\n"
                                "Correspondingly, the rough tasks that humans need to complete "
                                "are:\nNone"),
               ParseError);
  EXPECT_THROW(parse_rough_plan("nothing to see"), ParseError);
}

TEST(Refined, Examples) {
  EXPECT_EQ(parse_refined("Take the onion from position (2,1) and place it in the pot (1,2)."),
            RefinedWorkItem(FetchPlan{{2, 1}, {1, 2}}));
  EXPECT_EQ(parse_refined("Take the plate from (4, 1), then take the food from the pot (1, 3), and "
                          "finally deliver it to the delivery port (5, 2)."),
            RefinedWorkItem(DeliverPlan{{4, 1}, {1, 3}, {5, 2}}));
  EXPECT_EQ(parse_refined(golden("session3_example1")), RefinedWorkItem(FetchPlan{{2, 1}, {1, 2}}));
  EXPECT_EQ(parse_refined(golden("session3_example2")),
            RefinedWorkItem(DeliverPlan{{4, 1}, {1, 3}, {5, 2}}));
  EXPECT_EQ(parse_refined(golden("session3_example3")), RefinedWorkItem(FetchPlan{{3, 1}, {1, 2}}));
  EXPECT_THROW(parse_refined("I would rather not."), ParseError);
}

TEST(Refined, RenderRoundTrip) {
  RefinedWorkItem f = FetchPlan{{2, 5}, {1, 4}};
  RefinedWorkItem d = DeliverPlan{{4, 5}, {1, 4}, {5, 2}};
  EXPECT_EQ(parse_refined(render_refined(f, Ingredient::Tomato)), f);
  EXPECT_EQ(parse_refined(render_refined(d, Ingredient::Tomato)), d);
  EXPECT_EQ(render_refined(d, Ingredient::Onion),
            "Take the plate from (4, 5), then take the food from the pot (1, 4), and finally "
            "deliver it to the delivery port (5, 2).");
}

TEST(Time, Examples) {
  EXPECT_EQ(parse_time(golden("session4_example1")), 12);
  EXPECT_EQ(parse_time(golden("session4_example2")), 12);
  EXPECT_THROW(parse_time("So, the approximate time is: twelve"), ParseError);
  EXPECT_THROW(parse_time("no idea"), ParseError);
}

TEST(Schedule, Example) {
  auto s = parse_schedule(golden("session5_example1"));
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0].pot, (GridPos{1, 2}));
  EXPECT_EQ(s[0].kind, WorkKind::Fetch);
  EXPECT_EQ(s[0].est_steps, 12);
  EXPECT_EQ(s[1].pot, (GridPos{1, 3}));
  EXPECT_EQ(s[1].kind, WorkKind::Fetch);
  EXPECT_EQ(s[2].pot, (GridPos{1, 2}));
  EXPECT_EQ(s[2].kind, WorkKind::Deliver);
}

TEST(Schedule, SingleItemAndShuffledRoundTrip) {
  std::vector<RoughWorkItem> one{F(1, 2)};
  one[0].est_steps = 6;
  EXPECT_EQ(parse_schedule(render_schedule(one, Ingredient::Onion)), one);

  std::mt19937 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<RoughWorkItem> items;
    for (int k = 0; k < 4; ++k) {
      RoughWorkItem it{PlayerId::AI, rng() % 2 ? WorkKind::Fetch : WorkKind::Deliver,
                       {static_cast<int>(rng() % 9), static_cast<int>(rng() % 9)},
                       static_cast<int>(rng() % 40)};
      items.push_back(it);
    }
    EXPECT_EQ(parse_schedule(render_schedule(items, Ingredient::Tomato)), items);
  }
  EXPECT_THROW(parse_schedule("(1) Fetch onions for pot at (1,2)"), ParseError);
}

Convention replan_round_one() {
  return Convention::make(
      Ingredient::Onion,
      {{F(3, 6), FetchPlan{{5, 5}, {3, 6}}, 12},
       {Dl(3, 6), DeliverPlan{{1, 4}, {3, 6}, {3, 1}}, 16}},
      {});
}

TEST(ConventionText, ParsesReplanDialogue) {
  Convention c = parse_convention(golden("replan_round1_convention"));
  ASSERT_EQ(c.ai_plan.size(), 2u);
  EXPECT_TRUE(c.human_plan.empty());
  EXPECT_EQ(c.ai_plan[0].rough, F(3, 6));
  EXPECT_EQ(c.ai_plan[0].refined, RefinedWorkItem(FetchPlan{{5, 5}, {3, 6}}));
  EXPECT_EQ(c.ai_plan[1].refined, RefinedWorkItem(DeliverPlan{{1, 4}, {3, 6}, {3, 1}}));

  Convention c2 = parse_convention(golden("replan_round2_convention"));
  ASSERT_EQ(c2.ai_plan.size(), 1u);
  ASSERT_EQ(c2.human_plan.size(), 1u);
  EXPECT_EQ(c2.human_plan[0].rough, Dl(3, 6, PlayerId::Human));
}

TEST(ConventionText, RenderRoundTrip) {
  Convention c = replan_round_one();
  std::string text = render_convention(c);
  EXPECT_NE(text.find("The work content and execution sequence of Human:\nNone"),
            std::string::npos);
  EXPECT_LT(text.find("Fetch onions"), text.find("Deliver onion soup"));
  EXPECT_TRUE(same_plan(parse_convention(text), c));

  Convention empty = Convention::make(Ingredient::Tomato, {}, {});
  std::string none = render_convention(empty);
  EXPECT_EQ(none,
            "The work content and execution sequence of AI:\nNone\n"
            "The work content and execution sequence of Human:\nNone");
  Convention back = parse_convention(none);
  EXPECT_TRUE(back.ai_plan.empty());
  EXPECT_TRUE(back.human_plan.empty());
}

TEST(ConventionText, SessionTwoConventionGolden) {
  Convention c = Convention::make(
      Ingredient::Onion,
      {{F(1, 2), FetchPlan{{2, 1}, {1, 2}}, 12},
       {Dl(1, 3), DeliverPlan{{4, 1}, {1, 3}, {5, 2}}, 12},
       {Dl(1, 2), DeliverPlan{{4, 1}, {1, 2}, {5, 2}}, 10}},
      {{F(1, 3, PlayerId::Human), FetchPlan{{2, 1}, {1, 3}}, 18},
       {F(1, 4, PlayerId::Human), FetchPlan{{2, 1}, {1, 4}}, 24},
       {Dl(1, 4, PlayerId::Human), DeliverPlan{{4, 5}, {1, 4}, {5, 2}}, 14}});
  EXPECT_EQ(render_convention(c), golden("session2_convention"));
}

TEST(ConventionModel, RejectsDeliverBeforeFetch) {
  EXPECT_THROW(Convention::make(Ingredient::Onion,
                                {{Dl(1, 2), DeliverPlan{{4, 1}, {1, 2}, {5, 2}}, 12},
                                 {F(1, 2), FetchPlan{{2, 1}, {1, 2}}, 12}},
                                {}),
               InfeasiblePlan);
  EXPECT_TRUE(plan_feasible({F(1, 2), F(1, 3), Dl(1, 2)}));
  EXPECT_FALSE(plan_feasible({Dl(1, 2), F(1, 2)}));
}

TEST(Parsers, TotalOnRandomInput) {
  std::mt19937 rng(5);
  const std::string alphabet =
      "abcdefghijklmnopqrstuvwxyz (),:.+0123456789\nFetchDeliverAIHumanpotonionsoup";
  const std::vector<std::string> seeds = {golden("session2_example1"), golden("session5_example1"),
                                          golden("replan_round2_convention"),
                                          golden("session1_example4")};
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    if (i % 2 == 0) {
      s = seeds[rng() % seeds.size()];
      for (int k = 0; k < 5; ++k) s[rng() % s.size()] = alphabet[rng() % alphabet.size()];
    } else {
      int n = static_cast<int>(rng() % 120);
      for (int k = 0; k < n; ++k) s.push_back(alphabet[rng() % alphabet.size()]);
    }
    auto ok_or_parse_error = [&](auto&& fn) {
      try {
        fn();
      } catch (const ParseError&) {
      }
    };
    ok_or_parse_error([&] { parse_key_info(s); });
    ok_or_parse_error([&] { parse_rough_plan(s); });
    ok_or_parse_error([&] { parse_refined(s); });
    ok_or_parse_error([&] { parse_time(s); });
    ok_or_parse_error([&] { parse_schedule(s); });
    ok_or_parse_error([&] { parse_convention(s); });
  }
}

}  // namespace
}  // namespace cookplan
