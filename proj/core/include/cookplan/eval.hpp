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

// Episode runner, event statistics, the coordination benchmark and the
// multi-session reasoning benchmarks (last-letter concatenation and SCAN).

#ifndef COOKPLAN_EVAL_HPP_
#define COOKPLAN_EVAL_HPP_

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cookplan/agents.hpp"
#include "cookplan/kitchen.hpp"
#include "cookplan/planner.hpp"
#include "cookplan/proxy.hpp"

namespace cookplan {

// --- Episodes ----------------------------------------------------------------------

struct EpisodeResult {
  int score = 0;
  double discounted_return = 0.0;
  std::vector<Event> event_log;
  std::uint64_t seed = 0;
  int ticks = 0;

  int deliveries() const;
};

/// Called after every tick with the new state.
using TickObserver = std::function<void(const GameState&, const StepResult&)>;

EpisodeResult run_episode(const Layout& layout, Policy& ai, Policy& partner, const EpisodeConfig& config,
                          const TickObserver& observer = {});

enum class TaskKind : std::uint8_t { Placement, Delivery };
std::string_view to_string(TaskKind k);

struct EventProportions {
  /// Keyed by (task, 1-based pot number); fractions over the agent's events.
  std::map<PlayerId, std::map<std::pair<TaskKind, int>, double>> fractions;
  std::map<PlayerId, int> totals;

  bool zero_events(PlayerId id) const;
};

/// Placement = ingredient put into a pot, Delivery = soup scooped from a pot.
EventProportions event_proportions(const EpisodeResult& result, const Layout& layout);

/// True when every pot-affecting event by `agent` matches the preference.
bool preference_pure(const EpisodeResult& result, const Layout& layout, PlayerId agent,
                     const ProxyPreference& pref);

// --- Coordination benchmark ----------------------------------------------------------

/// The instruction a partner with `pref` gives: the AI takes the work the
/// partner does not.
PreferenceSpec complement_spec(const ProxyPreference& pref, const Layout& layout);

struct PlannerConfig {
  std::string backend = "oracle";  // oracle | mock:<file> | llm | stay
  std::string profile = "haplan-5";
  ChatBackendConfig chat = ChatBackendConfig::from_env();
};

struct CoordCell {
  std::string layout;
  std::string partner;
  int sessions = 0;
  std::string backend;
  int n = 0;
  double mean = 0;
  double std = 0;
  std::vector<double> scores;
  /// Fraction of episodes whose planner stage matched the reference.
  std::map<std::string, double> per_stage;
};

std::vector<CoordCell> run_coord_bench(const std::vector<std::string>& layouts,
                                       const std::vector<std::string>& partners, const PlannerConfig& planner,
                                       int episodes, std::uint64_t seed, const EpisodeConfig& config = {});

// --- Reasoning tasks -----------------------------------------------------------------

enum class ReasoningTask : std::uint8_t { LastLetter, Scan };
std::string_view to_string(ReasoningTask t);
ReasoningTask reasoning_task_from(std::string_view s);

struct ReasoningItem {
  ReasoningTask task = ReasoningTask::LastLetter;
  std::string input;
  std::string expected;

  friend bool operator==(const ReasoningItem&, const ReasoningItem&) = default;
};

const std::vector<std::string>& lastletter_words();
/// Concatenated last letters of a comma or space separated word list.
std::string last_letter_concat(std::string_view words);
std::vector<ReasoningItem> gen_lastletter(int n, int length, std::uint64_t seed);

class GrammarError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Canonical action string for a SCAN command. Throws GrammarError.
std::string scan_interpret(std::string_view command);
/// Clauses of a command in execution order ("x after y" yields y, x).
std::vector<std::string> scan_split(std::string_view command);
/// A random command with `clauses` atomic clauses (1 or 2).
std::string gen_scan_command(std::uint64_t seed, int clauses);
std::vector<ReasoningItem> gen_scan(int n, int clauses, std::uint64_t seed);

/// Answers the reasoning benchmark prompts exactly. With `drop_prefix`, it
/// forgets the running result handed from earlier sessions.
class ReasoningOracleBackend : public ChatBackend {
 public:
  explicit ReasoningOracleBackend(bool drop_prefix = false) : drop_prefix_(drop_prefix) {}
  std::string send(const std::vector<ChatMessage>& messages) override;
  std::string name() const override { return drop_prefix_ ? "lesioned" : "oracle"; }

 private:
  bool drop_prefix_;
};

/// "oracle", "lesioned", "mock:<file>" or "llm".
std::shared_ptr<ChatBackend> make_reasoning_backend(std::string_view spec,
                                                    const ChatBackendConfig& config = ChatBackendConfig::from_env());

/// Reference answer for one reasoning prompt. Throws std::invalid_argument.
std::string reasoning_answer(std::string_view prompt, bool drop_prefix = false);

/// Final quoted answer in a reply, or its last line.
std::string extract_answer(std::string_view reply);

struct ReasoningOutcome {
  std::string output;
  bool correct = false;
  std::vector<bool> session_correct;
  std::vector<SessionTranscript> transcripts;
  std::optional<std::string> error;
};

/// Runs one item through `sessions` fresh sessions.
ReasoningOutcome solve_reasoning(const ReasoningItem& item, int sessions, ChatBackend& backend);

struct ReasoningReport {
  std::string task;
  int length = 0;
  int sessions = 0;
  std::string backend;
  int n = 0;
  double mean = 0;  // accuracy
  double std = 0;
  std::map<std::string, double> per_stage;
};

ReasoningReport run_reasoning_bench(ReasoningTask task, int sessions, ChatBackend& backend, int n, int length,
                                    std::uint64_t seed);

/// One JSON object per report row.
std::string to_jsonl(const std::vector<CoordCell>& cells);
std::string to_jsonl(const std::vector<ReasoningReport>& rows);
std::string to_json(const ReasoningReport& row);
std::string to_json(const CoordCell& cell);

}  // namespace cookplan

#endif  // COOKPLAN_EVAL_HPP_
