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

#include <benchmark/benchmark.h>

#include "cookplan/eval.hpp"
#include "cookplan/layouts.hpp"
#include "cookplan/oracle.hpp"
#include "cookplan/planner.hpp"
#include "cookplan/skills.hpp"

namespace cookplan {
namespace {

void BM_KitchenStep(benchmark::State& st) {
  const Layout layout = load_layout("many_orders");
  const GameState start = initial_state(layout);
  const EpisodeConfig cfg;
  const JointAction moves{Action::Left, Action::Right};
  for (auto _ : st) {
    StepResult r = step(start, layout, moves, cfg);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_KitchenStep);

void BM_PlanPath(benchmark::State& st) {
  const Layout layout = load_layout(bundled_layout_names()[static_cast<std::size_t>(st.range(0))]);
  const GameState state = initial_state(layout);
  const GridPos goal = layout.tiles_of(TileKind::ServingPort).front();
  for (auto _ : st) {
    auto path = plan_path(layout, state, state.player(PlayerId::AI).pos, goal);
    benchmark::DoNotOptimize(path);
  }
  st.SetLabel(layout.name());
}
BENCHMARK(BM_PlanPath)->DenseRange(0, 4);

void BM_OraclePipeline(benchmark::State& st) {
  const Layout layout = load_layout("many_orders");
  const auto profile = st.range(0) == 5 ? DecompositionProfile::haplan5() : DecompositionProfile::haplan4();
  const PlanningContext ctx = PlanningContext::of(layout, gen_instruction(random_spec(layout, 7), layout, 7));
  OracleBackend oracle;
  for (auto _ : st) {
    auto r = run_pipeline(ctx, oracle, profile);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_OraclePipeline)->Arg(4)->Arg(5)->Unit(benchmark::kMicrosecond);

void BM_ConventionEpisode(benchmark::State& st) {
  const Layout layout = load_layout("many_orders");
  OracleBackend oracle;
  const Convention c =
      run_pipeline(PlanningContext::of(layout, "Please make onion soup."), oracle, DecompositionProfile::haplan5())
          .convention;
  for (auto _ : st) {
    ConventionAgent ai(PlayerId::AI, c), human(PlayerId::Human, c);
    auto r = run_episode(layout, ai, human, EpisodeConfig{});
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_ConventionEpisode)->Unit(benchmark::kMillisecond);

void BM_ScanInterpret(benchmark::State& st) {
  const auto items = gen_scan(256, 2, 1);
  std::size_t i = 0;
  for (auto _ : st) {
    auto out = scan_interpret(items[i++ % items.size()].input);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_ScanInterpret);

void BM_LastLetterBench(benchmark::State& st) {
  ReasoningOracleBackend oracle;
  for (auto _ : st) {
    auto r = run_reasoning_bench(ReasoningTask::LastLetter, 2, oracle, 20, static_cast<int>(st.range(0)), 0);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_LastLetterBench)->Arg(4)->Arg(12)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace cookplan

BENCHMARK_MAIN();
