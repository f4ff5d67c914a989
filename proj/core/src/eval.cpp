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

#include "cookplan/eval.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "cookplan/layouts.hpp"
#include "cookplan/oracle.hpp"

namespace cookplan {

namespace assets {
const std::vector<std::pair<std::string_view, std::string_view>>& word_table();
}  // namespace assets

using nlohmann::json;

// --- Episodes ----------------------------------------------------------------------

int EpisodeResult::deliveries() const {
  return static_cast<int>(std::count_if(event_log.begin(), event_log.end(),
                                        [](const Event& e) { return e.kind == EventKind::Deliver; }));
}

EpisodeResult run_episode(const Layout& layout, Policy& ai, Policy& partner, const EpisodeConfig& config,
                          const TickObserver& observer) {
  EpisodeResult result;
  result.seed = config.seed;
  GameState state = initial_state(layout);
  double weight = 1.0;
  for (int t = 0; t < config.horizon; ++t) {
    const JointAction actions{ai.act(state, layout), partner.act(state, layout)};
    StepResult r = step(state, layout, actions, config);
    result.discounted_return += weight * r.reward;
    weight *= config.discount;
    result.event_log.insert(result.event_log.end(), r.events.begin(), r.events.end());
    if (observer) observer(r.state, r);
    state = std::move(r.state);
    ++result.ticks;
  }
  result.score = state.score;
  return result;
}

std::string_view to_string(TaskKind k) { return k == TaskKind::Placement ? "placement" : "delivery"; }

bool EventProportions::zero_events(PlayerId id) const {
  auto it = totals.find(id);
  return it == totals.end() || it->second == 0;
}

namespace {

int pot_number(const Layout& layout, GridPos p) {
  const auto& pots = layout.pots();
  auto it = std::find(pots.begin(), pots.end(), p);
  return it == pots.end() ? 0 : static_cast<int>(it - pots.begin()) + 1;
}

std::optional<TaskKind> task_of(const Event& e) {
  if (e.kind == EventKind::PlaceIngredient) return TaskKind::Placement;
  if (e.kind == EventKind::Scoop) return TaskKind::Delivery;
  return std::nullopt;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const double m = mean_of(v);
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace

EventProportions event_proportions(const EpisodeResult& result, const Layout& layout) {
  EventProportions out;
  std::map<PlayerId, std::map<std::pair<TaskKind, int>, int>> counts;
  for (PlayerId id : {PlayerId::AI, PlayerId::Human}) out.totals[id] = 0;
  for (const Event& e : result.event_log) {
    auto task = task_of(e);
    if (!task) continue;
    ++counts[e.agent][{*task, pot_number(layout, e.where)}];
    ++out.totals[e.agent];
  }
  for (const auto& [id, cells] : counts) {
    for (const auto& [key, c] : cells) {
      out.fractions[id][key] = static_cast<double>(c) / out.totals[id];
    }
  }
  return out;
}

bool preference_pure(const EpisodeResult& result, const Layout& layout, PlayerId agent,
                     const ProxyPreference& pref) {
  for (const Event& e : result.event_log) {
    if (e.agent != agent) continue;
    auto task = task_of(e);
    if (!task) continue;
    const int pot = pot_number(layout, e.where);
    if (!pref.covers(pot)) return false;
    if (*task == TaskKind::Placement) {
      if (!pref.placement) return false;
      if (pref.ingredient && !e.item.is_raw(*pref.ingredient)) return false;
    } else if (!pref.delivery) {
      return false;
    }
  }
  return true;
}

// --- Coordination benchmark ----------------------------------------------------------

PreferenceSpec complement_spec(const ProxyPreference& pref, const Layout& layout) {
  PreferenceSpec spec;
  if (pref.ingredient) {
    spec.objective = *pref.ingredient;
  } else {
    spec.objective = layout.tiles_of(TileKind::OnionSource).empty() ? Ingredient::Tomato : Ingredient::Onion;
  }
  const int n = static_cast<int>(layout.pots().size());
  for (int k = 1; k <= n; ++k) {
    if (!(pref.placement && pref.covers(k))) spec.placement_pots.push_back(k);
    if (!(pref.delivery && pref.covers(k))) spec.delivery_pots.push_back(k);
  }
  if (spec.placement_pots.empty() && spec.delivery_pots.empty()) {
    // The partner claims everything; the AI joins in on all of it.
    for (int k = 1; k <= n; ++k) {
      spec.placement_pots.push_back(k);
      spec.delivery_pots.push_back(k);
    }
  }
  return spec;
}

namespace {

std::unique_ptr<Policy> make_partner(std::string_view spec, const Layout& layout, const EpisodeConfig& config,
                                     std::optional<ProxyPreference>& pref) {
  if (spec == "stay") return std::make_unique<StayPolicy>();
  pref = ProxyPreference::parse(spec);
  return make_proxy(*pref, layout, PlayerId::Human, config);
}

}  // namespace

std::vector<CoordCell> run_coord_bench(const std::vector<std::string>& layouts,
                                       const std::vector<std::string>& partners, const PlannerConfig& planner,
                                       int episodes, std::uint64_t seed, const EpisodeConfig& config) {
  const DecompositionProfile profile = DecompositionProfile::by_name(planner.profile);
  const bool stay = planner.backend == "stay";
  std::shared_ptr<ChatBackend> backend;
  if (!stay) backend = make_backend(planner.backend, planner.chat);

  std::vector<CoordCell> cells;
  for (const auto& layout_name : layouts) {
    const Layout layout = load_layout(layout_name);
    for (const auto& partner_spec : partners) {
      CoordCell cell;
      cell.layout = layout_name;
      cell.partner = partner_spec;
      cell.sessions = stay ? 0 : static_cast<int>(profile.stages.size());
      cell.backend = planner.backend;
      cell.n = episodes;
      std::map<std::string, int> stage_hits;
      for (int ep = 0; ep < episodes; ++ep) {
        EpisodeConfig cfg = config;
        cfg.seed = seed + static_cast<std::uint64_t>(ep);
        std::optional<ProxyPreference> pref;
        auto partner = make_partner(partner_spec, layout, cfg, pref);

        std::unique_ptr<Policy> ai = std::make_unique<StayPolicy>();
        if (!stay) {
          const PreferenceSpec spec =
              pref ? complement_spec(*pref, layout) : complement_spec(ProxyPreference{}, layout);
          const std::string instruction = gen_instruction(spec, layout, cfg.seed);
          const GroundTruth truth = ground_truth(spec, layout, cfg.cook_time);
          PlanningContext ctx = PlanningContext::of(layout, instruction);
          ctx.cook_wait = cfg.cook_time;
          try {
            PipelineResult plan = run_pipeline(ctx, *backend, profile);
            const GradeReport report = grade(plan.transcripts, truth, profile);
            for (const auto& s : report.stages) stage_hits[fmt::format("s{}", s.stage)] += s.correct ? 1 : 0;
            stage_hits["final"] += report.final_solution ? 1 : 0;
            ai = std::make_unique<ConventionAgent>(PlayerId::AI, plan.convention, cfg);
          } catch (const StageFailed&) {
            for (const auto& s : profile.stages) stage_hits[fmt::format("s{}", s.index)] += 0;
            stage_hits["final"] += 0;
          }
        }
        const EpisodeResult r = run_episode(layout, *ai, *partner, cfg);
        cell.scores.push_back(r.score);
      }
      for (const auto& [k, hits] : stage_hits) {
        cell.per_stage[k] = episodes > 0 ? static_cast<double>(hits) / episodes : 0.0;
      }
      cell.mean = mean_of(cell.scores);
      cell.std = std_of(cell.scores);
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

// --- Last-letter -------------------------------------------------------------------

std::string_view to_string(ReasoningTask t) { return t == ReasoningTask::LastLetter ? "lastletter" : "scan"; }

ReasoningTask reasoning_task_from(std::string_view s) {
  if (s == "lastletter") return ReasoningTask::LastLetter;
  if (s == "scan") return ReasoningTask::Scan;
  throw std::invalid_argument("unknown reasoning task: " + std::string(s));
}

namespace {

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',' || c == ' ' || c == '\n' || c == '\t' || c == '\r') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

const std::vector<std::string>& lastletter_words() {
  static const std::vector<std::string> words = [] {
    for (const auto& [name, text] : assets::word_table()) {
      if (name == "lastletter_words") return split_words(text);
    }
    return std::vector<std::string>{};
  }();
  return words;
}

std::string last_letter_concat(std::string_view words) {
  std::string out;
  for (const auto& w : split_words(words)) out += w.back();
  return out;
}

std::vector<ReasoningItem> gen_lastletter(int n, int length, std::uint64_t seed) {
  const auto& words = lastletter_words();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  std::vector<ReasoningItem> items;
  for (int i = 0; i < n; ++i) {
    std::vector<std::string> list;
    for (int k = 0; k < length; ++k) list.push_back(words[pick(rng)]);
    ReasoningItem item{ReasoningTask::LastLetter, join(list, ", "), {}};
    for (const auto& w : list) item.expected += w.back();
    items.push_back(std::move(item));
  }
  return items;
}

// --- SCAN --------------------------------------------------------------------------

namespace {

std::string upper(std::string_view w) {
  std::string out(w);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

bool is_action_verb(std::string_view w) { return w == "walk" || w == "run" || w == "jump" || w == "look"; }

std::vector<std::string> interpret_clause(const std::vector<std::string>& toks, std::string_view clause) {
  auto fail = [&](const std::string& why) -> GrammarError {
    return GrammarError(fmt::format("not a command: \"{}\" ({})", clause, why));
  };
  std::size_t i = 0;
  if (toks.empty()) throw fail("empty clause");
  const std::string verb = toks[i++];
  const bool turn = verb == "turn";
  if (!turn && !is_action_verb(verb)) throw fail("unknown verb " + verb);

  std::vector<std::string> base;
  const std::string act = turn ? std::string() : upper(verb);
  auto dir_token = [](std::string_view d) { return d == "left" ? "TURN_LEFT" : "TURN_RIGHT"; };
  if (i < toks.size() && (toks[i] == "left" || toks[i] == "right")) {
    base.push_back(dir_token(toks[i++]));
    if (!turn) base.push_back(act);
  } else if (i < toks.size() && (toks[i] == "opposite" || toks[i] == "around")) {
    const bool around = toks[i++] == "around";
    if (i >= toks.size() || (toks[i] != "left" && toks[i] != "right")) throw fail("missing direction");
    const std::string d = dir_token(toks[i++]);
    if (around) {
      for (int k = 0; k < 4; ++k) {
        base.push_back(d);
        if (!turn) base.push_back(act);
      }
    } else {
      base.push_back(d);
      base.push_back(d);
      if (!turn) base.push_back(act);
    }
  } else {
    if (turn) throw fail("turn needs a direction");
    base.push_back(act);
  }
  int times = 1;
  if (i < toks.size() && (toks[i] == "twice" || toks[i] == "thrice")) times = toks[i++] == "twice" ? 2 : 3;
  if (i != toks.size()) throw fail("unexpected " + toks[i]);
  std::vector<std::string> out;
  for (int k = 0; k < times; ++k) out.insert(out.end(), base.begin(), base.end());
  return out;
}

std::vector<std::string> tokens(std::string_view s) { return split_words(s); }

}  // namespace

std::vector<std::string> scan_split(std::string_view command) {
  const auto toks = tokens(command);
  std::vector<std::string> left, right;
  std::string conj;
  for (const auto& t : toks) {
    if (t == "and" || t == "after") {
      if (!conj.empty()) throw GrammarError(fmt::format("more than one connective in \"{}\"", command));
      conj = t;
      continue;
    }
    (conj.empty() ? left : right).push_back(t);
  }
  if (conj.empty()) {
    if (left.empty()) throw GrammarError("empty command");
    return {join(left, " ")};
  }
  if (left.empty() || right.empty()) throw GrammarError(fmt::format("dangling {} in \"{}\"", conj, command));
  if (conj == "and") return {join(left, " "), join(right, " ")};
  return {join(right, " "), join(left, " ")};
}

std::string scan_interpret(std::string_view command) {
  std::vector<std::string> out;
  for (const auto& clause : scan_split(command)) {
    auto part = interpret_clause(tokens(clause), clause);
    out.insert(out.end(), part.begin(), part.end());
  }
  return join(out, " ");
}

std::string gen_scan_command(std::uint64_t seed, int clauses) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::initializer_list<const char*> xs) {
    std::uniform_int_distribution<std::size_t> d(0, xs.size() - 1);
    return std::string(*(xs.begin() + d(rng)));
  };
  auto clause = [&] {
    std::string verb = pick({"walk", "run", "jump", "look", "turn"});
    std::string mod = verb == "turn" ? pick({"left", "right", "opposite left", "opposite right",
                                             "around left", "around right"})
                                     : pick({"", "left", "right", "opposite left", "opposite right",
                                             "around left", "around right"});
    std::string rep = pick({"", "twice", "thrice"});
    std::string c = verb;
    if (!mod.empty()) c += " " + mod;
    if (!rep.empty()) c += " " + rep;
    return c;
  };
  std::string cmd = clause();
  if (clauses >= 2) cmd += " " + pick({"and", "after"}) + " " + clause();
  return cmd;
}

std::vector<ReasoningItem> gen_scan(int n, int clauses, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<ReasoningItem> items;
  for (int i = 0; i < n; ++i) {
    std::string cmd = gen_scan_command(rng(), clauses);
    std::string expected = scan_interpret(cmd);
    items.push_back({ReasoningTask::Scan, std::move(cmd), std::move(expected)});
  }
  return items;
}

// --- Reasoning prompts -------------------------------------------------------------

namespace {

constexpr std::string_view kLastLetterIntro =
    "Take the last letter of each word in the list and append the letters, in order, to the previous "
    "result.\n"
    "Example:\n"
    "Previous result: \"ab\"\n"
    "Words: \"apple, river\"\n"
    "Answer: The last letters are \"e\" and \"r\". The answer is \"aber\".\n\n";

constexpr std::string_view kScanIntro =
    "Commands are made of the verbs walk, run, jump, look and turn. \"left\" or \"right\" turns first, "
    "\"opposite\" turns twice, \"around\" repeats turn and action four times, \"twice\" and \"thrice\" "
    "repeat a phrase. \"X and Y\" does X then Y. \"X after Y\" does Y then X.\n"
    "Example:\n"
    "Command: \"jump left twice after walk\"\n"
    "Sub-commands: \"walk ; jump left twice\"\n"
    "Action groups: \"WALK ; TURN_LEFT JUMP TURN_LEFT JUMP\"\n"
    "Answer: The answer is \"WALK TURN_LEFT JUMP TURN_LEFT JUMP\".\n\n";

constexpr std::string_view kAnswerRequest = "\nPlease give the final answer as: The answer is \"...\".\n";

std::string quoted_field(std::string_view block, std::string_view key) {
  const std::string marker = std::string(key) + ": \"";
  const auto b = block.rfind(marker);
  if (b == std::string_view::npos) throw std::invalid_argument(fmt::format("prompt lacks {}", key));
  const auto start = b + marker.size();
  const auto e = block.find('"', start);
  if (e == std::string_view::npos) throw std::invalid_argument(fmt::format("unterminated {}", key));
  return std::string(block.substr(start, e - start));
}

std::vector<std::string> split_groups(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto e = text.find(';', pos);
    if (e == std::string_view::npos) e = text.size();
    auto part = trim(text.substr(pos, e - pos));
    if (!part.empty()) out.push_back(std::move(part));
    pos = e + 1;
  }
  return out;
}

std::string lastletter_prompt(std::string_view prefix, std::string_view words) {
  return fmt::format("{}Now, continue the concatenation.\nPrevious result: \"{}\"\nWords: \"{}\"{}",
                     kLastLetterIntro, prefix, words, kAnswerRequest);
}

std::string scan_prompt(std::string_view request, std::string_view key, std::string_view value) {
  return fmt::format("{}Now, {}\n{}: \"{}\"{}", kScanIntro, request, key, value, kAnswerRequest);
}

constexpr std::string_view kTranslate = "translate this command.";
constexpr std::string_view kSplit = "split this command into sub-commands in execution order.";
constexpr std::string_view kTranslateJoin = "translate these sub-commands and join the actions.";
constexpr std::string_view kTranslateEach = "translate each sub-command.";
constexpr std::string_view kJoin = "join these action groups.";

std::string answer_line(std::string_view value) { return fmt::format("The answer is \"{}\".", value); }

}  // namespace

std::string extract_answer(std::string_view reply) {
  static constexpr std::string_view marker = "The answer is \"";
  const auto b = reply.rfind(marker);
  if (b != std::string_view::npos) {
    const auto start = b + marker.size();
    const auto e = reply.find('"', start);
    if (e != std::string_view::npos) return std::string(reply.substr(start, e - start));
  }
  const std::string t = trim(reply);
  const auto nl = t.rfind('\n');
  return nl == std::string::npos ? t : trim(std::string_view(t).substr(nl + 1));
}

std::string reasoning_answer(std::string_view prompt, bool drop_prefix) {
  const auto now = prompt.rfind("Now, ");
  if (now == std::string_view::npos) throw std::invalid_argument("prompt has no query");
  const std::string_view block = prompt.substr(now);
  auto asks = [&](std::string_view req) { return block.substr(5, req.size()) == req; };

  if (asks("continue the concatenation.")) {
    std::string prefix = drop_prefix ? std::string() : quoted_field(block, "Previous result");
    const std::string words = quoted_field(block, "Words");
    const auto letters = last_letter_concat(words);
    std::vector<std::string> quoted;
    for (char c : letters) quoted.push_back(fmt::format("\"{}\"", c));
    return fmt::format("The last letters are {}. {}", join(quoted, ", "), answer_line(prefix + letters));
  }
  if (asks(kTranslate)) return answer_line(scan_interpret(quoted_field(block, "Command")));
  if (asks(kSplit)) return answer_line(join(scan_split(quoted_field(block, "Command")), " ; "));
  auto handed = [&](std::string_view key) {
    auto groups = split_groups(quoted_field(block, key));
    if (drop_prefix && !groups.empty()) groups.erase(groups.begin());
    return groups;
  };
  if (asks(kTranslateJoin) || asks(kTranslateEach)) {
    std::vector<std::string> parts;
    for (const auto& sub : handed("Sub-commands")) parts.push_back(scan_interpret(sub));
    return answer_line(join(parts, asks(kTranslateEach) ? " ; " : " "));
  }
  if (asks(kJoin)) return answer_line(join(handed("Action groups"), " "));
  throw std::invalid_argument("unrecognised reasoning prompt");
}

std::string ReasoningOracleBackend::send(const std::vector<ChatMessage>& messages) {
  if (messages.empty()) throw BackendError(BackendError::Code::EmptyResponse, "no messages");
  try {
    return reasoning_answer(messages.back().content, drop_prefix_);
  } catch (const std::invalid_argument& e) {
    return std::string("I cannot answer this: ") + e.what();
  }
}

std::shared_ptr<ChatBackend> make_reasoning_backend(std::string_view spec, const ChatBackendConfig& config) {
  if (spec == "oracle") return std::make_shared<ReasoningOracleBackend>(false);
  if (spec == "lesioned") return std::make_shared<ReasoningOracleBackend>(true);
  return make_backend(spec, config);
}

namespace {

/// Contiguous chunks, sizes differing by at most one, larger ones first.
std::vector<std::vector<std::string>> chunk(const std::vector<std::string>& xs, int k) {
  std::vector<std::vector<std::string>> out;
  const int n = static_cast<int>(xs.size());
  k = std::max(1, std::min(k, std::max(1, n)));
  int pos = 0;
  for (int i = 0; i < k; ++i) {
    const int size = n / k + (i < n % k ? 1 : 0);
    out.emplace_back(xs.begin() + pos, xs.begin() + pos + size);
    pos += size;
  }
  return out;
}

}  // namespace

ReasoningOutcome solve_reasoning(const ReasoningItem& item, int sessions, ChatBackend& backend) {
  ReasoningOutcome outcome;
  auto ask = [&](const std::string& prompt) {
    const int index = static_cast<int>(outcome.transcripts.size()) + 1;
    SessionTranscript t;
    t.session_index = index;
    t.id = fmt::format("s{}.1", index);
    t.prompt = prompt;
    t.response = backend.send({ChatMessage{"user", prompt}});
    const std::string got = extract_answer(t.response);
    t.parsed_ok = t.response.find("The answer is \"") != std::string::npos;
    bool ok = false;
    try {
      ok = got == extract_answer(reasoning_answer(prompt));
    } catch (const std::exception&) {
      ok = false;
    }
    outcome.session_correct.push_back(ok);
    outcome.transcripts.push_back(std::move(t));
    return got;
  };
  try {
    if (item.task == ReasoningTask::LastLetter) {
      std::string running;
      for (const auto& part : chunk(split_words(item.input), sessions)) running = ask(lastletter_prompt(running, join(part, ", ")));
      outcome.output = running;
    } else if (sessions <= 1) {
      outcome.output = ask(scan_prompt(kTranslate, "Command", item.input));
    } else {
      const std::string subs = ask(scan_prompt(kSplit, "Command", item.input));
      if (sessions == 2) {
        outcome.output = ask(scan_prompt(kTranslateJoin, "Sub-commands", subs));
      } else {
        const std::string groups = ask(scan_prompt(kTranslateEach, "Sub-commands", subs));
        outcome.output = ask(scan_prompt(kJoin, "Action groups", groups));
      }
    }
  } catch (const BackendError& e) {
    outcome.error = e.what();
  }
  outcome.correct = !outcome.error && outcome.output == item.expected;
  return outcome;
}

ReasoningReport run_reasoning_bench(ReasoningTask task, int sessions, ChatBackend& backend, int n, int length,
                                    std::uint64_t seed) {
  ReasoningReport report;
  report.task = std::string(to_string(task));
  report.length = length;
  report.sessions = sessions;
  report.backend = backend.name();
  report.n = n;
  const auto items = task == ReasoningTask::LastLetter ? gen_lastletter(n, length, seed) : gen_scan(n, length, seed);
  std::vector<double> finals;
  std::map<std::string, int> hits;
  for (const auto& item : items) {
    const auto out = solve_reasoning(item, sessions, backend);
    finals.push_back(out.correct ? 1.0 : 0.0);
    for (std::size_t i = 0; i < out.session_correct.size(); ++i) {
      hits[fmt::format("s{}", i + 1)] += out.session_correct[i] ? 1 : 0;
    }
  }
  for (const auto& [k, h] : hits) report.per_stage[k] = n > 0 ? static_cast<double>(h) / n : 0.0;
  report.per_stage["final"] = mean_of(finals);
  report.mean = mean_of(finals);
  report.std = std_of(finals);
  return report;
}

// --- Reports -----------------------------------------------------------------------

std::string to_json(const ReasoningReport& row) {
  return json{{"task", row.task},         {"length", row.length}, {"sessions", row.sessions},
              {"backend", row.backend},   {"n", row.n},           {"mean", row.mean},
              {"std", row.std},           {"per_stage", row.per_stage}}
      .dump();
}

std::string to_json(const CoordCell& cell) {
  return json{{"layout", cell.layout},   {"partner", cell.partner}, {"sessions", cell.sessions},
              {"backend", cell.backend}, {"n", cell.n},             {"mean", cell.mean},
              {"std", cell.std},         {"scores", cell.scores},   {"per_stage", cell.per_stage}}
      .dump();
}

std::string to_jsonl(const std::vector<CoordCell>& cells) {
  std::string out;
  for (const auto& c : cells) out += to_json(c) + "\n";
  return out;
}

std::string to_jsonl(const std::vector<ReasoningReport>& rows) {
  std::string out;
  for (const auto& r : rows) out += to_json(r) + "\n";
  return out;
}

}  // namespace cookplan
