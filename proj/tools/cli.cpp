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

#include "cli.hpp"

#include <csignal>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "cookplan/eval.hpp"
#include "cookplan/json.hpp"
#include "cookplan/layouts.hpp"
#include "cookplan/oracle.hpp"
#include "cookplan/server.hpp"

namespace cookplan {

using nlohmann::json;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::vector<std::string> kDefaultPartners = {
    "proxy:placement:onion:all", "proxy:placement:tomato:all", "proxy:delivery::all",
    "proxy:placement+delivery:onion:1", "proxy:delivery::2"};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + path);
  file << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --- play ----------------------------------------------------------------------------

struct PlayArgs {
  std::string layout;
  std::string partner = "convention";
  std::string backend = "oracle";
  std::string profile = "haplan-5";
  std::string instruction;
  int horizon = 400;
  std::uint64_t seed = 0;
  std::string out;
  std::string transcripts;
};

int run_play(const PlayArgs& a, std::ostream& out, std::ostream& err) {
  const Layout layout = load_layout(a.layout);
  EpisodeConfig cfg;
  cfg.horizon = a.horizon;
  cfg.seed = a.seed;

  std::optional<ProxyPreference> pref;
  if (a.partner.rfind("proxy:", 0) == 0) {
    pref = ProxyPreference::parse(a.partner);
  } else if (a.partner != "convention" && a.partner != "stay") {
    throw UsageError("--partner must be convention, stay or proxy:<tasks>:<ingredient>:<pots>");
  }

  std::string instruction = a.instruction;
  if (instruction.empty()) {
    const PreferenceSpec spec = complement_spec(pref.value_or(ProxyPreference{}), layout);
    instruction = gen_instruction(spec, layout, a.seed);
  }

  json report{{"layout", a.layout},   {"partner", a.partner}, {"backend", a.backend},
              {"profile", a.profile}, {"seed", a.seed},       {"horizon", a.horizon},
              {"instruction", instruction}};

  std::optional<Convention> convention;
  if (a.backend != "stay") {
    const DecompositionProfile profile = DecompositionProfile::by_name(a.profile);
    auto backend = make_backend(a.backend);
    PlanningContext ctx = PlanningContext::of(layout, instruction);
    ctx.cook_wait = cfg.cook_time;
    PipelineResult plan = run_pipeline(ctx, *backend, profile);
    report["convention"] = convention_json(plan.convention);
    if (!a.transcripts.empty()) write_output(a.transcripts, transcripts_to_jsonl(plan.transcripts), out);
    convention = std::move(plan.convention);
  }

  std::unique_ptr<Policy> ai = std::make_unique<StayPolicy>();
  if (convention) ai = std::make_unique<ConventionAgent>(PlayerId::AI, *convention, cfg);
  std::unique_ptr<Policy> partner;
  if (pref) {
    partner = make_proxy(*pref, layout, PlayerId::Human, cfg);
  } else if (a.partner == "convention" && convention) {
    partner = std::make_unique<ConventionAgent>(PlayerId::Human, *convention, cfg);
  } else {
    partner = std::make_unique<StayPolicy>();
  }

  const EpisodeResult result = run_episode(layout, *ai, *partner, cfg);
  report["score"] = result.score;
  report["episode"] = episode_json(result, layout);
  if (a.out.empty()) {
    out << report.dump(2) << "\n";
  } else {
    write_output(a.out, report.dump(2) + "\n", out);
    fmt::print(err, "{}: score {} ({} deliveries) -> {}\n", a.layout, result.score, result.deliveries(), a.out);
  }
  return 0;
}

// --- bench -----------------------------------------------------------------------------

struct CoordArgs {
  std::string layouts;
  std::string partners;
  std::string backend = "oracle";
  std::string profile = "haplan-5";
  int episodes = 5;
  int horizon = 400;
  std::uint64_t seed = 0;
  std::string out;
};

int run_bench_coord(const CoordArgs& a, std::ostream& out, std::ostream& err) {
  const auto layouts = a.layouts.empty() ? bundled_layout_names() : split_list(a.layouts);
  const auto partners = a.partners.empty() ? kDefaultPartners : split_list(a.partners);
  PlannerConfig planner;
  planner.backend = a.backend;
  planner.profile = a.profile;
  EpisodeConfig cfg;
  cfg.horizon = a.horizon;

  std::vector<CoordCell> cells;
  for (const auto& layout : layouts) {
    for (const auto& partner : partners) {
      try {
        auto cell = run_coord_bench({layout}, {partner}, planner, a.episodes, a.seed, cfg);
        cells.insert(cells.end(), cell.begin(), cell.end());
      } catch (const IncompatiblePreference& e) {
        // Only the default sweep skips partners a layout cannot host.
        if (!a.partners.empty()) throw;
        fmt::print(err, "skipping {} on {}: {}\n", partner, layout, e.what());
      }
    }
  }
  write_output(a.out, to_jsonl(cells), out);
  if (!a.out.empty() && a.out != "-") {
    for (const auto& c : cells) fmt::print(err, "{:<22} {:<34} {:8.2f} +- {:.2f}\n", c.layout, c.partner, c.mean, c.std);
  }
  return 0;
}

struct ReasoningArgs {
  std::string task = "lastletter";
  int sessions = 2;
  std::vector<int> lengths;
  int n = 50;
  std::string backend = "oracle";
  std::uint64_t seed = 0;
  std::string out;
};

int run_bench_reasoning(const ReasoningArgs& a, std::ostream& out, std::ostream& err) {
  const ReasoningTask task = reasoning_task_from(a.task);
  auto backend = make_reasoning_backend(a.backend);
  std::vector<int> lengths = a.lengths;
  if (lengths.empty()) lengths = task == ReasoningTask::LastLetter ? std::vector<int>{4, 6, 8, 10, 12} : std::vector<int>{1, 2};
  std::vector<ReasoningReport> rows;
  for (int length : lengths) rows.push_back(run_reasoning_bench(task, a.sessions, *backend, a.n, length, a.seed));
  write_output(a.out, to_jsonl(rows), out);
  if (!a.out.empty() && a.out != "-") {
    for (const auto& r : rows) fmt::print(err, "{} L={} sessions={} accuracy {:.3f}\n", r.task, r.length, r.sessions, r.mean);
  }
  return 0;
}

// --- serve -----------------------------------------------------------------------------

struct ServeArgs {
  std::string address = "127.0.0.1";
  unsigned short port = 8080;
  std::string backend = "oracle";
  int tick_ms = 1000 / 6;
};

Server* g_server = nullptr;

extern "C" void on_signal(int) {
  if (g_server) g_server->stop();
}

int run_serve(const ServeArgs& a, std::ostream& out) {
  make_backend(a.backend);  // fail fast on a bad spec
  ServiceOptions opts;
  opts.default_backend = a.backend;
  opts.tick_interval = std::chrono::milliseconds(a.tick_ms);
  GameService service(opts);
  ServerOptions sopts;
  sopts.address = a.address;
  sopts.port = a.port;
  Server server(service, sopts);
  const unsigned short port = server.start();
  fmt::print(out, "listening on http://{}:{}\n", a.address, port);
  out.flush();
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  server.wait();
  g_server = nullptr;
  return 0;
}

// --- grade -----------------------------------------------------------------------------

struct GradeArgs {
  std::string transcripts;
  std::string layout;
  std::string instruction;
  std::optional<std::uint64_t> spec_seed;
  std::string profile = "haplan-5";
  int cook_time = 20;
};

int run_grade(const GradeArgs& a, std::ostream& out) {
  if (a.instruction.empty() == !a.spec_seed) throw UsageError("give exactly one of --instruction or --spec-seed");
  const Layout layout = load_layout(a.layout);
  const DecompositionProfile profile = DecompositionProfile::by_name(a.profile);
  const auto transcripts = transcripts_from_jsonl(read_file(a.transcripts));
  const GroundTruth truth = a.spec_seed
                                ? ground_truth(random_spec(layout, *a.spec_seed), layout, a.cook_time)
                                : ground_truth(interpret_instruction(a.instruction), LayoutFacts::of(layout), a.cook_time);
  const GradeReport report = grade(transcripts, truth, profile);
  json stages = json::array();
  for (const auto& s : report.stages) stages.push_back({{"stage", s.stage}, {"correct", s.correct}});
  out << json{{"stages", stages}, {"final_solution", report.final_solution}, {"all_true", report.all_true()},
              {"flagged", report.flagged()}}
             .dump()
      << "\n";
  return report.all_true() ? 0 : 1;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"cookplan: convention planning and coordination workbench"};
  app.require_subcommand(1);

  PlayArgs play;
  auto* play_cmd = app.add_subcommand("play", "Plan and run one headless episode");
  play_cmd->add_option("--layout", play.layout, "Kitchen layout")->required();
  play_cmd->add_option("--partner", play.partner, "convention | stay | proxy:<tasks>:<ingredient>:<pots>");
  play_cmd->add_option("--backend", play.backend, "oracle | mock:<file> | llm | stay");
  play_cmd->add_option("--profile", play.profile, "haplan-5 | haplan-4");
  play_cmd->add_option("--instruction", play.instruction, "Instruction text (default: generated)");
  play_cmd->add_option("--horizon", play.horizon)->check(CLI::PositiveNumber);
  play_cmd->add_option("--seed", play.seed);
  play_cmd->add_option("--out", play.out, "Report file (default: stdout)");
  play_cmd->add_option("--transcripts", play.transcripts, "Write session transcripts as JSON lines");

  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark");
  bench_cmd->require_subcommand(1);
  CoordArgs coord;
  auto* coord_cmd = bench_cmd->add_subcommand("coord", "Coordination scores against proxy partners");
  coord_cmd->add_option("--layouts", coord.layouts, "Comma-separated layouts (default: all)");
  coord_cmd->add_option("--partners", coord.partners, "Comma-separated partner specs");
  coord_cmd->add_option("--backend", coord.backend, "oracle | mock:<file> | llm | stay");
  coord_cmd->add_option("--profile", coord.profile);
  coord_cmd->add_option("--episodes,--n", coord.episodes)->check(CLI::PositiveNumber);
  coord_cmd->add_option("--horizon", coord.horizon)->check(CLI::PositiveNumber);
  coord_cmd->add_option("--seed", coord.seed);
  coord_cmd->add_option("--out", coord.out, "JSON lines report (default: stdout)");

  ReasoningArgs reasoning;
  auto* reasoning_cmd = bench_cmd->add_subcommand("reasoning", "Multi-session reasoning accuracy");
  reasoning_cmd->add_option("--task", reasoning.task)->check(CLI::IsMember({"lastletter", "scan"}));
  reasoning_cmd->add_option("--sessions", reasoning.sessions)->check(CLI::PositiveNumber);
  reasoning_cmd->add_option("--lengths", reasoning.lengths, "Word counts (lastletter) or clause counts (scan)")
      ->delimiter(',');
  reasoning_cmd->add_option("--n", reasoning.n)->check(CLI::PositiveNumber);
  reasoning_cmd->add_option("--backend", reasoning.backend, "oracle | lesioned | mock:<file> | llm");
  reasoning_cmd->add_option("--seed", reasoning.seed);
  reasoning_cmd->add_option("--out", reasoning.out, "JSON lines report (default: stdout)");

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP/WebSocket service");
  serve_cmd->add_option("--address", serve.address);
  serve_cmd->add_option("--port", serve.port);
  serve_cmd->add_option("--backend", serve.backend, "oracle | mock:<file> | llm");
  serve_cmd->add_option("--tick-ms", serve.tick_ms)->check(CLI::PositiveNumber);

  GradeArgs grade_args;
  auto* grade_cmd = app.add_subcommand("grade", "Grade planner transcripts against the reference");
  grade_cmd->add_option("--transcripts", grade_args.transcripts, "JSON lines transcript file")->required();
  grade_cmd->add_option("--layout", grade_args.layout)->required();
  grade_cmd->add_option("--instruction", grade_args.instruction, "Instruction the transcripts answered");
  grade_cmd->add_option("--spec-seed", grade_args.spec_seed, "Seed of the generated preference spec");
  grade_cmd->add_option("--profile", grade_args.profile);
  grade_cmd->add_option("--cook-time", grade_args.cook_time);

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*play_cmd) return run_play(play, out, err);
    if (*coord_cmd) return run_bench_coord(coord, out, err);
    if (*reasoning_cmd) return run_bench_reasoning(reasoning, out, err);
    if (*serve_cmd) return run_serve(serve, out);
    if (*grade_cmd) return run_grade(grade_args, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace cookplan
