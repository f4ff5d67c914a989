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

// Game sessions behind the HTTP/WebSocket front end. Each session is guarded
// by its own mutex, so a slow planner call blocks only that session.

#ifndef COOKPLAN_SERVICE_HPP_
#define COOKPLAN_SERVICE_HPP_

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cookplan/agents.hpp"
#include "cookplan/eval.hpp"
#include "cookplan/planner.hpp"

namespace cookplan {

enum class Phase : std::uint8_t { Planning, Reviewing, Playing, Finished };
std::string_view to_string(Phase p);

/// Error with a stable code and HTTP status. `stage` is set for planner
/// stage failures.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(std::string code, int status, const std::string& message, std::optional<int> stage = {})
      : std::runtime_error(message), code_(std::move(code)), status_(status), stage_(stage) {}

  const std::string& code() const noexcept { return code_; }
  int status() const noexcept { return status_; }
  std::optional<int> stage() const noexcept { return stage_; }

  /// {"error": {"code", "stage"?, "message"}}
  nlohmann::json body() const;

 private:
  std::string code_;
  int status_;
  std::optional<int> stage_;
};

struct GameConfig {
  std::string backend;  // empty: the service default
  std::string profile = "haplan-5";
  EpisodeConfig episode;
  /// Allows accept without a convention; the AI then stays put.
  bool free_play = false;

  /// Reads snake_case fields (backend, profile, horizon, seed, cook_time,
  /// discount, free_play). Throws ServiceError on bad values.
  static GameConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

using PlanReply = PipelineResult;

struct ServiceOptions {
  std::string default_backend = "oracle";
  ChatBackendConfig chat = ChatBackendConfig::from_env();
  std::chrono::milliseconds tick_interval{1000 / 6};
};

/// Message sent to stream clients.
struct Snapshot {
  int tick = 0;
  Phase phase = Phase::Planning;
  nlohmann::json body;
};

class GameService {
 public:
  explicit GameService(ServiceOptions options = {});
  ~GameService();
  GameService(const GameService&) = delete;
  GameService& operator=(const GameService&) = delete;

  /// Throws ServiceError (UnknownLayout, BadRequest).
  std::string create_game(std::string_view layout, const GameConfig& config = {});

  /// Full session view. Throws ServiceError (GameNotFound).
  nlohmann::json view(const std::string& id) const;
  Phase phase(const std::string& id) const;

  /// Plans from scratch; replaces any pending convention.
  PlanReply submit_instruction(const std::string& id, std::string_view text);
  /// Replans with the feedback appended to the history.
  PlanReply submit_feedback(const std::string& id, std::string_view text);
  void accept(const std::string& id);

  /// Human action for the next tick; the latest one wins.
  void queue_action(const std::string& id, Action action);

  /// Advances one tick now. False when the game is not playing.
  bool step(const std::string& id);
  /// Advances one tick when a tick interval has passed since the last one.
  bool step_if_due(const std::string& id, std::chrono::steady_clock::time_point now);
  /// Restarts the tick clock, so a paused game does not catch up.
  void resume_clock(const std::string& id, std::chrono::steady_clock::time_point now);

  /// State, score, remaining ticks and phase; the episode result once finished.
  Snapshot snapshot(const std::string& id) const;

  /// Copy of the authoritative state and its layout.
  GameState state(const std::string& id) const;
  Layout layout(const std::string& id) const;

  /// Human actions consumed so far, one per tick.
  std::vector<Action> human_actions(const std::string& id) const;
  std::optional<EpisodeResult> result(const std::string& id) const;

  const ServiceOptions& options() const { return options_; }

 private:
  struct Session;
  std::shared_ptr<Session> find(const std::string& id) const;
  PlanReply plan(Session& s);
  bool advance(Session& s);
  Snapshot snapshot_locked(const Session& s) const;

  ServiceOptions options_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_id_ = 1;
};

}  // namespace cookplan

#endif  // COOKPLAN_SERVICE_HPP_
