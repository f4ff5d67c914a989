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

#include "cookplan/service.hpp"

#include <fmt/format.h>

#include "cookplan/json.hpp"
#include "cookplan/layouts.hpp"

namespace cookplan {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::Planning: return "planning";
    case Phase::Reviewing: return "reviewing";
    case Phase::Playing: return "playing";
    case Phase::Finished: return "finished";
  }
  return "planning";
}

json ServiceError::body() const {
  json e{{"code", code_}, {"message", what()}};
  if (stage_) e["stage"] = *stage_;
  return {{"error", e}};
}

namespace {

ServiceError bad_request(const std::string& message) { return ServiceError("BadRequest", 400, message); }

ServiceError phase_error(Phase have, std::string_view op) {
  return ServiceError("PhaseError", 409, fmt::format("{} is not allowed in phase {}", op, to_string(have)));
}

template <typename T>
T field(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw bad_request(fmt::format("field '{}' has the wrong type", key));
  }
}

}  // namespace

GameConfig GameConfig::from_json(const json& j) {
  if (!j.is_object()) throw bad_request("config must be an object");
  GameConfig c;
  c.backend = field<std::string>(j, "backend", "");
  c.profile = field<std::string>(j, "profile", c.profile);
  c.episode.horizon = field<int>(j, "horizon", c.episode.horizon);
  c.episode.seed = field<std::uint64_t>(j, "seed", c.episode.seed);
  c.episode.cook_time = field<int>(j, "cook_time", c.episode.cook_time);
  c.episode.discount = field<double>(j, "discount", c.episode.discount);
  c.free_play = field<bool>(j, "free_play", false);
  if (c.episode.horizon <= 0) throw bad_request("horizon must be positive");
  if (c.episode.cook_time < 0) throw bad_request("cook_time must not be negative");
  return c;
}

json GameConfig::to_json() const {
  return {{"backend", backend},           {"profile", profile},
          {"horizon", episode.horizon},   {"seed", episode.seed},
          {"cook_time", episode.cook_time}, {"discount", episode.discount},
          {"free_play", free_play}};
}

struct GameService::Session {
  std::mutex mu;
  std::string id;
  Layout layout;
  GameConfig config;
  DecompositionProfile profile;
  std::shared_ptr<ChatBackend> backend;
  Phase phase = Phase::Planning;
  GameState state;
  std::optional<PlanningContext> ctx;
  std::optional<PlanReply> pending;
  std::unique_ptr<Policy> ai;
  Action queued = Action::Stay;
  std::vector<Action> human_actions;
  EpisodeResult episode;
  double weight = 1.0;
  Clock::time_point last_tick{};

  Session(std::string id_, Layout layout_) : id(std::move(id_)), layout(std::move(layout_)) {}
};

GameService::GameService(ServiceOptions options) : options_(std::move(options)) {}
GameService::~GameService() = default;

std::string GameService::create_game(std::string_view layout_name, const GameConfig& config) {
  Layout layout = [&] {
    try {
      return load_layout(layout_name);
    } catch (const UnknownLayout& e) {
      throw ServiceError("UnknownLayout", 404, e.what());
    }
  }();
  DecompositionProfile profile;
  try {
    profile = DecompositionProfile::by_name(config.profile);
  } catch (const std::invalid_argument& e) {
    throw bad_request(e.what());
  }
  const std::string spec = config.backend.empty() ? options_.default_backend : config.backend;
  std::shared_ptr<ChatBackend> backend;
  try {
    backend = make_backend(spec, options_.chat);
  } catch (const std::exception& e) {
    throw bad_request(e.what());
  }

  std::unique_lock lock(mu_);
  auto s = std::make_shared<Session>(fmt::format("g{}", next_id_++), std::move(layout));
  s->config = config;
  s->config.backend = spec;
  s->profile = std::move(profile);
  s->backend = std::move(backend);
  s->state = initial_state(s->layout);
  s->episode.seed = config.episode.seed;
  sessions_.emplace(s->id, s);
  return s->id;
}

std::shared_ptr<GameService::Session> GameService::find(const std::string& id) const {
  std::shared_lock lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ServiceError("GameNotFound", 404, "no game with id '" + id + "'");
  return it->second;
}

json GameService::view(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  json j{{"id", s->id},
         {"layout", layout_json(s->layout)},
         {"phase", to_string(s->phase)},
         {"state", state_json(s->state)},
         {"remaining_ticks", s->config.episode.horizon - s->state.tick},
         {"config", s->config.to_json()},
         {"feedback_history", s->ctx ? s->ctx->feedback_history : std::vector<std::string>{}},
         {"instruction", s->ctx ? json(s->ctx->instruction) : json()},
         {"convention", s->pending ? convention_json(s->pending->convention) : json()}};
  if (s->phase == Phase::Finished) j["result"] = episode_json(s->episode, s->layout);
  return j;
}

Phase GameService::phase(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  return s->phase;
}

PlanReply GameService::plan(Session& s) {
  try {
    return run_pipeline(*s.ctx, *s.backend, s.profile);
  } catch (const StageFailed& e) {
    throw ServiceError("StageFailed", 422, e.what(), e.stage());
  }
}

PlanReply GameService::submit_instruction(const std::string& id, std::string_view text) {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  if (s->phase != Phase::Planning && s->phase != Phase::Reviewing) throw phase_error(s->phase, "instruction");
  s->ctx = PlanningContext::of(s->layout, std::string(text));
  s->ctx->cook_wait = s->config.episode.cook_time;
  s->pending.reset();
  PlanReply reply = plan(*s);
  s->pending = reply;
  s->phase = Phase::Reviewing;
  return reply;
}

PlanReply GameService::submit_feedback(const std::string& id, std::string_view text) {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  if (s->phase != Phase::Reviewing || !s->ctx) throw phase_error(s->phase, "feedback");
  PlanningContext next = *s->ctx;
  PlanReply reply = [&]() -> PlanReply {
    try {
      return replan(next, text, *s->backend, s->profile);
    } catch (const StageFailed& e) {
      throw ServiceError("StageFailed", 422, e.what(), e.stage());
    }
  }();
  s->ctx = std::move(next);
  s->pending = reply;
  return reply;
}

void GameService::accept(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  const bool ready = s->phase == Phase::Reviewing && s->pending;
  const bool free = s->config.free_play && (s->phase == Phase::Planning || s->phase == Phase::Reviewing);
  if (!ready && !free) throw phase_error(s->phase, "accept");
  if (s->pending) {
    s->ai = std::make_unique<ConventionAgent>(PlayerId::AI, s->pending->convention, s->config.episode);
  } else {
    s->ai = std::make_unique<StayPolicy>();
  }
  s->phase = Phase::Playing;
  s->last_tick = Clock::now();
}

void GameService::queue_action(const std::string& id, Action action) {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  if (s->phase == Phase::Finished) throw phase_error(s->phase, "action");
  s->queued = action;
}

bool GameService::advance(Session& s) {
  if (s.phase != Phase::Playing) return false;
  const JointAction actions{s.ai->act(s.state, s.layout), s.queued};
  s.human_actions.push_back(s.queued);
  s.queued = Action::Stay;
  StepResult r = cookplan::step(s.state, s.layout, actions, s.config.episode);
  s.episode.discounted_return += s.weight * r.reward;
  s.weight *= s.config.episode.discount;
  s.episode.event_log.insert(s.episode.event_log.end(), r.events.begin(), r.events.end());
  s.state = std::move(r.state);
  s.episode.ticks = s.state.tick;
  s.episode.score = s.state.score;
  if (s.state.tick >= s.config.episode.horizon) s.phase = Phase::Finished;
  return true;
}

bool GameService::step(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  return advance(*s);
}

bool GameService::step_if_due(const std::string& id, Clock::time_point now) {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  if (s->phase != Phase::Playing || now - s->last_tick < options_.tick_interval) return false;
  s->last_tick = now;
  return advance(*s);
}

void GameService::resume_clock(const std::string& id, Clock::time_point now) {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  s->last_tick = now;
}

Snapshot GameService::snapshot_locked(const Session& s) const {
  json body{{"type", s.phase == Phase::Finished ? "finished" : "snapshot"},
            {"id", s.id},
            {"phase", to_string(s.phase)},
            {"tick", s.state.tick},
            {"score", s.state.score},
            {"remaining_ticks", s.config.episode.horizon - s.state.tick},
            {"state", state_json(s.state)}};
  if (s.phase == Phase::Finished) body["result"] = episode_json(s.episode, s.layout);
  return {s.state.tick, s.phase, std::move(body)};
}

Snapshot GameService::snapshot(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  return snapshot_locked(*s);
}

GameState GameService::state(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  return s->state;
}

Layout GameService::layout(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  return s->layout;
}

std::vector<Action> GameService::human_actions(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  return s->human_actions;
}

std::optional<EpisodeResult> GameService::result(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->mu);
  if (s->phase != Phase::Finished) return std::nullopt;
  return s->episode;
}

}  // namespace cookplan
