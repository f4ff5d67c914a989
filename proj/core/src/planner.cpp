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

#include "cookplan/planner.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "cookplan/layouts.hpp"

namespace cookplan {

using nlohmann::json;

std::string_view BackendError::name(Code c) {
  switch (c) {
    case Code::Timeout: return "Timeout";
    case Code::TransportError: return "TransportError";
    case Code::EmptyResponse: return "EmptyResponse";
  }
  return "BackendError";
}

ChatBackendConfig ChatBackendConfig::from_env() {
  ChatBackendConfig c;
  if (const char* v = std::getenv("HAPLAN_LLM_BASE_URL"); v && *v) c.base_url = v;
  if (const char* v = std::getenv("HAPLAN_LLM_MODEL"); v && *v) c.model = v;
  if (const char* v = std::getenv("HAPLAN_LLM_API_KEY"); v && *v) c.api_key = v;
  return c;
}

// --- Oracle and mock -----------------------------------------------------------

std::string OracleBackend::send(const std::vector<ChatMessage>& messages) {
  if (messages.empty()) throw BackendError(BackendError::Code::EmptyResponse, "no messages");
  return oracle_answer(messages.back().content);
}

MockBackend::MockBackend(std::vector<std::string> replies) : replies_(std::move(replies)) {}

std::vector<std::string> MockBackend::parse_script(std::string_view text) {
  std::vector<std::string> out;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && (text[first] == '[' || text[first] == '{')) {
    auto take = [&](const json& j) {
      if (j.is_string()) {
        out.push_back(j.get<std::string>());
      } else {
        out.push_back(j.at("response").get<std::string>());
      }
    };
    if (text[first] == '[') {
      for (const auto& j : json::parse(text)) take(j);
    } else {
      std::istringstream in{std::string(text)};
      for (std::string line; std::getline(in, line);) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        take(json::parse(line));
      }
    }
    return out;
  }
  std::istringstream in{std::string(text)};
  std::string current;
  bool any = false;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.size() >= 5 && line.find_first_not_of('-') == std::string::npos) {
      out.push_back(current);
      current.clear();
      any = false;
      continue;
    }
    if (any) current += '\n';
    current += line;
    any = true;
  }
  if (any && current.find_first_not_of(" \t\n") != std::string::npos) out.push_back(current);
  return out;
}

std::unique_ptr<MockBackend> MockBackend::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mock script " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return std::make_unique<MockBackend>(parse_script(ss.str()));
}

std::string MockBackend::send(const std::vector<ChatMessage>&) {
  std::lock_guard lock(mu_);
  if (next_ >= replies_.size()) {
    throw BackendError(BackendError::Code::EmptyResponse, "mock script exhausted");
  }
  return replies_[next_++];
}

std::size_t MockBackend::remaining() const {
  std::lock_guard lock(mu_);
  return replies_.size() - next_;
}

// --- Fault injection -----------------------------------------------------------

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

Ingredient objective_in(std::string_view text) {
  return lower(text).find("tomato") != std::string::npos ? Ingredient::Tomato : Ingredient::Onion;
}

std::vector<GridPos> scenario_list(const std::string& block, const std::string& pattern) {
  const std::regex re("location of (?:the )?" + pattern + R"(\s*:\s*([^\n]*))", std::regex::icase);
  std::smatch m;
  std::vector<GridPos> out;
  if (!std::regex_search(block, m, re)) return out;
  static const std::regex coord(R"(\(\s*(\d+)\s*,\s*(\d+)\s*\))");
  const std::string list = m.str(1);
  for (auto it = std::sregex_iterator(list.begin(), list.end(), coord); it != std::sregex_iterator(); ++it) {
    out.push_back({std::stoi((*it)[1].str()), std::stoi((*it)[2].str())});
  }
  return out;
}

std::optional<GridPos> other_than(const std::vector<GridPos>& options, GridPos chosen) {
  for (GridPos p : options) {
    if (p != chosen) return p;
  }
  return std::nullopt;
}

std::optional<RefinedWorkItem> corrupt_refined(const std::string& block, const RefinedWorkItem& r,
                                               Ingredient objective) {
  if (const auto* f = std::get_if<FetchPlan>(&r)) {
    auto sources = scenario_list(block, objective == Ingredient::Onion ? "onions?" : "tomato(?:es)?");
    if (auto alt = other_than(sources, f->source)) return FetchPlan{*alt, f->pot};
    return std::nullopt;
  }
  auto d = std::get<DeliverPlan>(r);
  if (auto alt = other_than(scenario_list(block, "dining plates?"), d.dish_source)) {
    d.dish_source = *alt;
    return d;
  }
  if (auto alt = other_than(scenario_list(block, "delivery ports?"), d.port)) {
    d.port = *alt;
    return d;
  }
  return std::nullopt;
}

// Splits a combined refine+time answer at the first time line.
std::pair<std::string, std::string> split_refine_time(std::string_view answer) {
  const std::size_t at = answer.find("\nMoving ");
  if (at == std::string_view::npos) return {std::string(answer), std::string()};
  return {std::string(answer.substr(0, at)), std::string(answer.substr(at + 1))};
}

}  // namespace

std::optional<std::string> corrupt_answer(std::string_view prompt, std::string_view answer,
                                          PromptKind target) {
  const PromptKind kind = classify_prompt(prompt);
  const std::string block = query_block(prompt);
  const Ingredient objective = objective_in(block);
  try {
    switch (target) {
      case PromptKind::KeyInfo: {
        if (kind != PromptKind::KeyInfo) return std::nullopt;
        KeyInfo k = parse_key_info(answer);
        k.ai_deliver = k.ai_deliver.kind == PotSelector::Kind::All ? PotSelector::not_mentioned()
                       : k.ai_deliver.kind == PotSelector::Kind::Named ? PotSelector::not_mentioned()
                                                                        : PotSelector::all();
        return render_key_info(k);
      }
      case PromptKind::Rough: {
        if (kind != PromptKind::Rough) return std::nullopt;
        RoughPlan plan = parse_rough_plan(answer);
        if (!plan.human.empty()) {
          plan.human.pop_back();
        } else if (!plan.ai.empty()) {
          plan.ai.pop_back();
        } else {
          return std::nullopt;
        }
        return render_rough_plan(plan, objective_in(answer));
      }
      case PromptKind::Refine: {
        if (kind != PromptKind::Refine && kind != PromptKind::RefineTime) return std::nullopt;
        auto [refine_part, time_part] = split_refine_time(answer);
        auto alt = corrupt_refined(block, parse_refined(refine_part), objective);
        if (!alt) return std::nullopt;
        std::string out = "So, the refined work content is: " + render_refined(*alt, objective);
        if (kind == PromptKind::RefineTime) out += "\n" + time_part;
        return out;
      }
      case PromptKind::Time: {
        if (kind != PromptKind::Time && kind != PromptKind::RefineTime) return std::nullopt;
        std::string prefix;
        std::string_view time_text = answer;
        if (kind == PromptKind::RefineTime) {
          auto parts = split_refine_time(answer);
          prefix = parts.first + "\n";
          return prefix + fmt::format("So, the approximate time is: {} steps.", parse_time(parts.second) + 1);
        }
        return fmt::format("So, the approximate time is: {} steps.", parse_time(time_text) + 1);
      }
      case PromptKind::Schedule: {
        if (kind != PromptKind::Schedule) return std::nullopt;
        auto items = parse_schedule(answer);
        for (std::size_t k = 0; k + 1 < items.size(); ++k) {
          auto swapped = items;
          std::swap(swapped[k], swapped[k + 1]);
          if (swapped != items && plan_feasible(swapped)) return render_schedule(swapped, objective);
        }
        return std::nullopt;
      }
      default:
        return std::nullopt;
    }
  } catch (const ParseError&) {
    return std::nullopt;
  }
}

FaultyBackend::FaultyBackend(std::shared_ptr<ChatBackend> inner, PromptKind target)
    : inner_(std::move(inner)), target_(target) {}

std::string FaultyBackend::send(const std::vector<ChatMessage>& messages) {
  std::string answer = inner_->send(messages);
  if (messages.empty()) return answer;
  if (auto bad = corrupt_answer(messages.back().content, answer, target_)) {
    ++mutations_;
    return *bad;
  }
  return answer;
}

std::shared_ptr<ChatBackend> make_backend(std::string_view spec, const ChatBackendConfig& config) {
  if (spec == "oracle") return std::make_shared<OracleBackend>();
  if (spec == "llm") return std::make_shared<HttpBackend>(config);
  if (spec.rfind("mock:", 0) == 0) return MockBackend::from_file(std::string(spec.substr(5)));
  throw std::invalid_argument("unknown backend '" + std::string(spec) + "' (oracle, mock:<file>, llm)");
}

// --- Profiles and context -------------------------------------------------------

DecompositionProfile DecompositionProfile::haplan5() {
  return {"haplan-5",
          {{1, PromptKind::KeyInfo},
           {2, PromptKind::Rough},
           {3, PromptKind::Refine},
           {4, PromptKind::Time},
           {5, PromptKind::Schedule}}};
}

DecompositionProfile DecompositionProfile::haplan4() {
  return {"haplan-4",
          {{1, PromptKind::KeyInfo},
           {2, PromptKind::Rough},
           {3, PromptKind::RefineTime},
           {4, PromptKind::Schedule}}};
}

DecompositionProfile DecompositionProfile::by_name(std::string_view name) {
  if (name == "haplan-5") return haplan5();
  if (name == "haplan-4") return haplan4();
  throw std::invalid_argument("unknown profile '" + std::string(name) + "' (haplan-4, haplan-5)");
}

int DecompositionProfile::stage_of(PromptKind kind) const {
  for (const auto& s : stages) {
    if (s.kind == kind) return s.index;
  }
  return 0;
}

PlanningContext PlanningContext::of(const Layout& layout, std::string instruction) {
  PlanningContext ctx;
  ctx.facts = LayoutFacts::of(layout);
  ctx.instruction = std::move(instruction);
  return ctx;
}

std::string PlanningContext::full_instruction() const {
  std::string out = instruction;
  for (const auto& f : feedback_history) {
    if (f.empty()) continue;
    if (!out.empty()) out += ' ';
    out += f;
  }
  return out;
}

// --- Transcript serialization ------------------------------------------------------

namespace {

PromptKind prompt_kind_from(std::string_view s) {
  for (PromptKind k : {PromptKind::KeyInfo, PromptKind::Rough, PromptKind::Refine, PromptKind::Time,
                       PromptKind::RefineTime, PromptKind::Schedule}) {
    if (to_string(k) == s) return k;
  }
  return PromptKind::Unknown;
}

json item_json(const RoughWorkItem& it) {
  json j{{"agent", std::string(to_string(it.agent))},
         {"kind", it.kind == WorkKind::Fetch ? "fetch" : "deliver"},
         {"pot", {it.pot.row, it.pot.col}}};
  if (it.est_steps) j["est_steps"] = *it.est_steps;
  return j;
}

PlayerId player_from(const std::string& s) {
  if (s == "ai" || s == "AI") return PlayerId::AI;
  if (s == "human" || s == "Human") return PlayerId::Human;
  throw std::invalid_argument("unknown agent '" + s + "'");
}

RoughWorkItem item_from(const json& j) {
  RoughWorkItem it;
  it.agent = player_from(j.at("agent").get<std::string>());
  it.kind = j.at("kind").get<std::string>() == "fetch" ? WorkKind::Fetch : WorkKind::Deliver;
  it.pot = {j.at("pot").at(0).get<int>(), j.at("pot").at(1).get<int>()};
  if (j.contains("est_steps")) it.est_steps = j.at("est_steps").get<int>();
  return it;
}

}  // namespace

std::string transcript_to_json(const SessionTranscript& t) {
  json j{{"session_index", t.session_index},
         {"stage", std::string(to_string(t.kind))},
         {"id", t.id},
         {"prompt", t.prompt},
         {"response", t.response},
         {"parsed_ok", t.parsed_ok}};
  if (t.agent) j["agent"] = std::string(to_string(*t.agent));
  if (t.item) j["item"] = item_json(*t.item);
  return j.dump();
}

SessionTranscript transcript_from_json(std::string_view text) {
  const json j = json::parse(text);
  SessionTranscript t;
  t.session_index = j.at("session_index").get<int>();
  t.kind = prompt_kind_from(j.value("stage", std::string()));
  t.id = j.value("id", std::string());
  t.prompt = j.value("prompt", std::string());
  t.response = j.value("response", std::string());
  t.parsed_ok = j.value("parsed_ok", false);
  if (j.contains("agent")) t.agent = player_from(j.at("agent").get<std::string>());
  if (j.contains("item")) t.item = item_from(j.at("item"));
  if (t.kind == PromptKind::Unknown) t.kind = classify_prompt(t.prompt);
  return t;
}

std::string transcripts_to_jsonl(const std::vector<SessionTranscript>& ts) {
  std::string out;
  for (const auto& t : ts) out += transcript_to_json(t) + "\n";
  return out;
}

std::vector<SessionTranscript> transcripts_from_jsonl(std::string_view text) {
  std::vector<SessionTranscript> out;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(transcript_from_json(line));
  }
  return out;
}

// --- Prompts ------------------------------------------------------------------------

namespace {

bool same_unit(const RoughWorkItem& a, const RoughWorkItem& b) {
  return a.agent == b.agent && a.kind == b.kind && a.pot == b.pot;
}

std::string fill(std::string_view asset, std::string_view query, int cook_wait = 20) {
  std::string p(prompt_asset(asset));
  auto replace = [&](std::string_view slot, std::string_view value) {
    for (std::size_t at = p.find(slot); at != std::string::npos; at = p.find(slot, at + value.size())) {
      p.replace(at, slot.size(), value);
    }
  };
  replace("{{cook_wait}}", std::to_string(cook_wait));
  replace("{{query}}", query);
  return p;
}

std::string coords(const std::vector<GridPos>& ps) {
  if (ps.empty()) return "None";
  std::string out;
  for (const auto& p : ps) {
    if (!out.empty()) out += ", ";
    out += to_string(p);
  }
  return out;
}

std::string refine_query(const PlanningContext& ctx, const RoughWorkItem& item, Ingredient objective) {
  return fmt::format(
      "the human instructions are: {}\nThe rough work content is: {}\nScenario information is:\n"
      "Location of Tomatoes: {}\nLocation of Onions: {}\nLocation of the dining plate: {}\n"
      "Location of the delivery port: {}",
      ctx.full_instruction(), render_rough_item(item, objective), coords(ctx.facts.tomatoes),
      coords(ctx.facts.onions), coords(ctx.facts.dishes), coords(ctx.facts.ports));
}

// Template text before its final query block.
std::string_view body_of(std::string_view tmpl) {
  const std::size_t at = tmpl.rfind("\nNow, ");
  return at == std::string_view::npos ? tmpl : tmpl.substr(0, at);
}

}  // namespace

const RefinedWorkItem* PriorOutputs::refined_for(const RoughWorkItem& item) const {
  for (auto it = refined.rbegin(); it != refined.rend(); ++it) {
    if (same_unit(it->first, item)) return &it->second;
  }
  return nullptr;
}

const int* PriorOutputs::time_for(const RoughWorkItem& item) const {
  for (auto it = times.rbegin(); it != times.rend(); ++it) {
    if (same_unit(it->first, item)) return &it->second;
  }
  return nullptr;
}

std::string key_info_prompt(const PlanningContext& ctx) {
  return fill("session1_key_info", ctx.full_instruction());
}

std::string rough_prompt(const PlanningContext& ctx, const KeyInfo& info) {
  return fill("session2_rough", coords(ctx.facts.pots) + "\nKey information in human instructions:\n" +
                                    render_key_info_query(info));
}

std::string refine_prompt(const PlanningContext& ctx, const RoughWorkItem& item, Ingredient objective) {
  return fill("session3_refine", refine_query(ctx, item, objective));
}

std::string time_prompt(const RoughWorkItem& item, const RefinedWorkItem& refined, Ingredient objective) {
  return fill("session4_time", fmt::format("the rough work content is: {}\nThe refined work content is: {}",
                                           render_rough_item(item, objective),
                                           render_refined(refined, objective)));
}

std::string refine_time_prompt(const PlanningContext& ctx, const RoughWorkItem& item,
                               Ingredient objective) {
  const std::string_view t3 = prompt_asset("session3_refine");
  const std::string_view t4 = prompt_asset("session4_time");
  std::string p(body_of(t3));
  p += "\n\n";
  p += body_of(t4);
  p += "\n\nNow, " + refine_query(ctx, item, objective) +
       "\nPlease provide your answer by giving examples.\n";
  return p;
}

std::string schedule_prompt(const std::vector<RoughWorkItem>& items, Ingredient objective, int cook_wait) {
  return fill("session5_schedule", render_timed_items(items, objective), cook_wait);
}

std::string build_prompt(const DecompositionProfile& profile, int stage, const PlanningContext& ctx,
                         const PriorOutputs& prior, const std::optional<RoughWorkItem>& item,
                         std::optional<PlayerId> agent) {
  if (stage < 1 || stage > static_cast<int>(profile.stages.size())) {
    throw std::invalid_argument(fmt::format("profile {} has no stage {}", profile.name, stage));
  }
  const PromptKind kind = profile.stages[static_cast<std::size_t>(stage - 1)].kind;
  if (kind == PromptKind::KeyInfo) return key_info_prompt(ctx);
  if (!prior.key_info) throw MissingPriorOutput(stage);
  const Ingredient objective = prior.key_info->objective;
  switch (kind) {
    case PromptKind::Rough:
      return rough_prompt(ctx, *prior.key_info);
    case PromptKind::Refine:
    case PromptKind::RefineTime:
      if (!prior.rough || !item) throw MissingPriorOutput(stage);
      return kind == PromptKind::Refine ? refine_prompt(ctx, *item, objective)
                                        : refine_time_prompt(ctx, *item, objective);
    case PromptKind::Time: {
      if (!item) throw MissingPriorOutput(stage);
      const RefinedWorkItem* r = prior.refined_for(*item);
      if (!r) throw MissingPriorOutput(stage);
      return time_prompt(*item, *r, objective);
    }
    case PromptKind::Schedule: {
      if (!prior.rough || !agent) throw MissingPriorOutput(stage);
      std::vector<RoughWorkItem> items;
      for (auto it : *agent == PlayerId::AI ? prior.rough->ai : prior.rough->human) {
        const int* t = prior.time_for(it);
        if (!t) throw MissingPriorOutput(stage);
        it.est_steps = *t;
        items.push_back(it);
      }
      if (items.empty()) throw MissingPriorOutput(stage);
      return schedule_prompt(items, objective, ctx.cook_wait);
    }
    default:
      break;
  }
  throw std::invalid_argument("unsupported stage kind");
}

// --- Pipeline ----------------------------------------------------------------------

namespace {

// Parsed value of one answer, checked against what the prompt asked for.
struct StageOutput {
  std::optional<KeyInfo> key_info;
  std::optional<RoughPlan> rough;
  std::optional<RefinedWorkItem> refined;
  std::optional<int> time;
  std::vector<RoughWorkItem> order;
};

std::vector<RoughWorkItem> with_agent(std::vector<RoughWorkItem> items, PlayerId who) {
  for (auto& it : items) it.agent = who;
  return items;
}

bool same_units(std::vector<RoughWorkItem> a, std::vector<RoughWorkItem> b) {
  auto key = [](const RoughWorkItem& i) { return std::make_tuple(i.kind, i.pot); };
  auto less = [&](const RoughWorkItem& x, const RoughWorkItem& y) { return key(x) < key(y); };
  std::sort(a.begin(), a.end(), less);
  std::sort(b.begin(), b.end(), less);
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [&](const auto& x, const auto& y) {
           return key(x) == key(y);
         });
}

// Throws ParseError when the answer does not parse or does not fit the request.
StageOutput parse_stage(PromptKind kind, std::string_view response, const SessionTranscript& t,
                        const std::vector<RoughWorkItem>* expected_units) {
  StageOutput out;
  switch (kind) {
    case PromptKind::KeyInfo:
      out.key_info = parse_key_info(response);
      break;
    case PromptKind::Rough:
      out.rough = parse_rough_plan(response);
      out.rough->ai = with_agent(out.rough->ai, PlayerId::AI);
      out.rough->human = with_agent(out.rough->human, PlayerId::Human);
      break;
    case PromptKind::Refine:
    case PromptKind::RefineTime:
      out.refined = parse_refined(response);
      if (t.item && pot_of(*out.refined) != t.item->pot) throw ParseError(0, "refined item for the requested pot");
      if (t.item && (std::holds_alternative<FetchPlan>(*out.refined) != (t.item->kind == WorkKind::Fetch))) {
        throw ParseError(0, "refined item of the requested kind");
      }
      if (kind == PromptKind::RefineTime) out.time = parse_time(response);
      break;
    case PromptKind::Time:
      out.time = parse_time(response);
      break;
    case PromptKind::Schedule: {
      out.order = with_agent(parse_schedule(response), t.agent.value_or(PlayerId::AI));
      if (expected_units && !same_units(out.order, *expected_units)) {
        throw ParseError(0, "a reordering of the listed work items");
      }
      if (!plan_feasible(out.order)) throw ParseError(0, "a feasible work order");
      break;
    }
    default:
      throw ParseError(0, "a known stage");
  }
  return out;
}

class Runner {
 public:
  Runner(const PlanningContext& ctx, ChatBackend& backend, const DecompositionProfile& profile,
         const PipelineOptions& opts)
      : ctx_(ctx), backend_(backend), profile_(profile), opts_(opts) {}

  PipelineResult run() {
    for (const auto& stage : profile_.stages) {
      switch (stage.kind) {
        case PromptKind::KeyInfo: {
          auto out = invoke(stage, {}, {}, nullptr);
          prior_.key_info = out.key_info;
          break;
        }
        case PromptKind::Rough: {
          auto out = invoke(stage, {}, {}, nullptr);
          prior_.rough = out.rough;
          break;
        }
        case PromptKind::Refine:
        case PromptKind::RefineTime:
        case PromptKind::Time:
          for (const auto* side : {&prior_.rough->ai, &prior_.rough->human}) {
            for (const auto& item : *side) {
              auto out = invoke(stage, item, {}, nullptr);
              if (out.refined) prior_.refined.emplace_back(item, *out.refined);
              if (out.time) prior_.times.emplace_back(item, *out.time);
            }
          }
          break;
        case PromptKind::Schedule:
          for (PlayerId who : {PlayerId::AI, PlayerId::Human}) {
            const auto& units = who == PlayerId::AI ? prior_.rough->ai : prior_.rough->human;
            if (units.empty()) continue;
            invoke(stage, {}, who, &units);
          }
          break;
        default:
          break;
      }
    }
    PipelineResult result;
    try {
      result.convention = assemble_convention(transcripts_, profile_);
    } catch (const InfeasiblePlan& e) {
      throw StageFailed(profile_.stages.back().index, "InfeasiblePlan", e.what());
    }
    result.transcripts = std::move(transcripts_);
    return result;
  }

 private:
  StageOutput invoke(const StageSpec& stage, const std::optional<RoughWorkItem>& item,
                     std::optional<PlayerId> agent, const std::vector<RoughWorkItem>* units) {
    std::string prompt;
    try {
      prompt = build_prompt(profile_, stage.index, ctx_, prior_, item, agent);
    } catch (const MissingPriorOutput& e) {
      throw StageFailed(stage.index, "MissingPriorOutput", e.what());
    }
    std::string last_error;
    for (int attempt = 0; attempt <= opts_.max_retries; ++attempt) {
      SessionTranscript t;
      t.session_index = stage.index;
      t.kind = stage.kind;
      t.id = fmt::format("s{}.{}", stage.index, ++counters_[stage.index]);
      t.prompt = attempt == 0 ? prompt : prompt + std::string(kClarification) + "\n";
      t.item = item;
      t.agent = agent;
      try {
        t.response = backend_.send({{"user", t.prompt}});
      } catch (const BackendError& e) {
        throw StageFailed(stage.index, std::string(BackendError::name(e.code())), e.what());
      } catch (const OracleError& e) {
        throw StageFailed(stage.index, std::string(OracleError::name(e.code())), e.what());
      }
      try {
        StageOutput out = parse_stage(stage.kind, t.response, t, units);
        if (out.rough) {
          // Pots outside the layout cannot be planned.
          for (const auto* side : {&out.rough->ai, &out.rough->human}) {
            for (const auto& it : *side) {
              if (std::find(ctx_.facts.pots.begin(), ctx_.facts.pots.end(), it.pot) == ctx_.facts.pots.end()) {
                throw ParseError(0, "pots of this layout, not " + to_string(it.pot));
              }
            }
          }
        }
        t.parsed_ok = true;
        transcripts_.push_back(std::move(t));
        return out;
      } catch (const ParseError& e) {
        last_error = e.what();
        transcripts_.push_back(std::move(t));
      }
    }
    throw StageFailed(stage.index, "ParseError", last_error);
  }

  const PlanningContext& ctx_;
  ChatBackend& backend_;
  const DecompositionProfile& profile_;
  PipelineOptions opts_;
  PriorOutputs prior_;
  std::vector<SessionTranscript> transcripts_;
  std::map<int, int> counters_;
};

}  // namespace

PipelineResult run_pipeline(const PlanningContext& ctx, ChatBackend& backend,
                            const DecompositionProfile& profile, const PipelineOptions& opts) {
  return Runner(ctx, backend, profile, opts).run();
}

PipelineResult replan(PlanningContext& ctx, std::string_view feedback, ChatBackend& backend,
                      const DecompositionProfile& profile, const PipelineOptions& opts) {
  if (feedback.find_first_not_of(" \t\r\n") != std::string_view::npos) {
    ctx.feedback_history.emplace_back(feedback);
  }
  return run_pipeline(ctx, backend, profile, opts);
}

Convention assemble_convention(const std::vector<SessionTranscript>& transcripts,
                               const DecompositionProfile& profile) {
  std::optional<KeyInfo> key_info;
  std::optional<RoughPlan> rough;
  PriorOutputs prior;
  std::map<PlayerId, std::vector<RoughWorkItem>> orders;
  std::vector<std::string> ids;
  for (const auto& t : transcripts) {
    if (!t.parsed_ok) continue;
    StageOutput out = parse_stage(t.kind, t.response, t, nullptr);
    ids.push_back(t.id);
    if (out.key_info) key_info = out.key_info;
    if (out.rough) rough = out.rough;
    if (out.refined && t.item) prior.refined.emplace_back(*t.item, *out.refined);
    if (out.time && t.item) prior.times.emplace_back(*t.item, *out.time);
    if (t.kind == PromptKind::Schedule) orders[t.agent.value_or(PlayerId::AI)] = out.order;
  }
  const int schedule_stage = profile.stage_of(PromptKind::Schedule);
  if (!key_info) throw MissingPriorOutput(1);
  if (!rough) throw MissingPriorOutput(profile.stage_of(PromptKind::Rough));
  std::vector<ConventionEntry> plans[2];
  for (PlayerId who : {PlayerId::AI, PlayerId::Human}) {
    const auto& units = who == PlayerId::AI ? rough->ai : rough->human;
    if (units.empty()) continue;
    auto found = orders.find(who);
    if (found == orders.end()) throw MissingPriorOutput(schedule_stage);
    for (RoughWorkItem it : found->second) {
      const RefinedWorkItem* r = prior.refined_for(it);
      const int* time = prior.time_for(it);
      if (!r) throw MissingPriorOutput(std::max(profile.stage_of(PromptKind::Refine),
                                                profile.stage_of(PromptKind::RefineTime)));
      if (!time) throw MissingPriorOutput(std::max(profile.stage_of(PromptKind::Time),
                                                   profile.stage_of(PromptKind::RefineTime)));
      it.est_steps.reset();
      plans[index_of(who)].push_back({it, *r, *time});
    }
  }
  return Convention::make(key_info->objective, std::move(plans[0]), std::move(plans[1]), std::move(ids));
}

// --- Grading ------------------------------------------------------------------------

bool GradeReport::all_true() const {
  return final_solution && std::all_of(stages.begin(), stages.end(), [](const StageGrade& g) { return g.correct; });
}

std::vector<int> GradeReport::flagged() const {
  std::vector<int> out;
  for (const auto& g : stages) {
    if (!g.correct) out.push_back(g.stage);
  }
  return out;
}

namespace {

bool same_answer(PromptKind kind, const std::string& prompt, const std::string& response,
                 const SessionTranscript& t) {
  std::string reference;
  try {
    reference = oracle_answer(prompt);
  } catch (const OracleError&) {
    return false;
  }
  try {
    const StageOutput want = parse_stage(kind, reference, t, nullptr);
    const StageOutput got = parse_stage(kind, response, t, nullptr);
    switch (kind) {
      case PromptKind::Rough: return want.rough == got.rough;
      case PromptKind::Refine: return want.refined == got.refined;
      case PromptKind::Time: return want.time == got.time;
      case PromptKind::RefineTime: return want.refined == got.refined && want.time == got.time;
      case PromptKind::Schedule: return want.order == got.order;
      default: return false;
    }
  } catch (const ParseError&) {
    return false;
  }
}

}  // namespace

GradeReport grade(const std::vector<SessionTranscript>& transcripts, const GroundTruth& truth,
                  const DecompositionProfile& profile) {
  GradeReport report;
  for (const auto& stage : profile.stages) {
    bool any = false;
    bool all = true;
    for (const auto& t : transcripts) {
      if (t.session_index != stage.index) continue;
      any = true;
      if (stage.kind == PromptKind::KeyInfo) {
        try {
          all = all && normalize(parse_key_info(t.response), truth.facts.pots) ==
                           normalize(truth.key_info, truth.facts.pots);
        } catch (const std::exception&) {
          all = false;
        }
      } else {
        all = all && same_answer(stage.kind, t.prompt, t.response, t);
      }
    }
    report.stages.push_back({stage.index, any && all});
  }
  try {
    report.final_solution = !transcripts.empty() &&
                            same_plan(assemble_convention(transcripts, profile), truth.convention);
  } catch (const std::exception&) {
    report.final_solution = false;
  }
  return report;
}

}  // namespace cookplan
