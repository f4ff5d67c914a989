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

// Multi-session convention planning. Every stage is sent to the backend as a
// fresh single-message conversation; earlier answers reach later stages only
// through the rendered prompt.

#ifndef COOKPLAN_PLANNER_HPP_
#define COOKPLAN_PLANNER_HPP_

#include <atomic>
#include <chrono>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cookplan/convention.hpp"
#include "cookplan/oracle.hpp"

namespace cookplan {

// --- Backends ----------------------------------------------------------------

struct ChatMessage {
  std::string role;
  std::string content;
};

class BackendError : public std::runtime_error {
 public:
  enum class Code { Timeout, TransportError, EmptyResponse };
  BackendError(Code code, const std::string& message)
      : std::runtime_error(std::string(name(code)) + ": " + message), code_(code) {}
  Code code() const noexcept { return code_; }
  static std::string_view name(Code c);

 private:
  Code code_;
};

struct ChatBackendConfig {
  std::string base_url = "https://api.openai.com/v1";
  std::string model = "gpt-4";
  std::string api_key;
  double temperature = 0.0;
  std::chrono::milliseconds timeout{60000};
  int max_retries = 2;

  /// Defaults overridden by HAPLAN_LLM_BASE_URL / _MODEL / _API_KEY.
  static ChatBackendConfig from_env();
};

/// Implementations must be safe to call from several pipeline runs at once.
class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual std::string send(const std::vector<ChatMessage>& messages) = 0;
  virtual std::string name() const = 0;
};

/// Answers every planning prompt with the reference reasoner.
class OracleBackend : public ChatBackend {
 public:
  std::string send(const std::vector<ChatMessage>& messages) override;
  std::string name() const override { return "oracle"; }
};

/// Replays scripted replies in order.
class MockBackend : public ChatBackend {
 public:
  explicit MockBackend(std::vector<std::string> replies);

  /// JSON array or JSON lines of objects with a "response" field, or plain
  /// text with replies separated by lines of "-----".
  static std::unique_ptr<MockBackend> from_file(const std::string& path);
  static std::vector<std::string> parse_script(std::string_view text);

  std::string send(const std::vector<ChatMessage>& messages) override;
  std::string name() const override { return "mock"; }
  std::size_t remaining() const;

 private:
  mutable std::mutex mu_;
  std::vector<std::string> replies_;
  std::size_t next_ = 0;
};

/// OpenAI-compatible chat completions client.
class HttpBackend : public ChatBackend {
 public:
  explicit HttpBackend(ChatBackendConfig config);
  std::string send(const std::vector<ChatMessage>& messages) override;
  std::string name() const override { return "llm"; }
  const ChatBackendConfig& config() const { return config_; }

 private:
  ChatBackendConfig config_;
};

/// Forwards to `inner` and corrupts answers to prompts of one kind.
class FaultyBackend : public ChatBackend {
 public:
  FaultyBackend(std::shared_ptr<ChatBackend> inner, PromptKind target);
  std::string send(const std::vector<ChatMessage>& messages) override;
  std::string name() const override { return "faulty:" + std::string(to_string(target_)); }
  int mutations() const { return mutations_.load(); }

 private:
  std::shared_ptr<ChatBackend> inner_;
  PromptKind target_;
  std::atomic<int> mutations_{0};
};

/// Corrupts one answer so that its parsed value changes; nullopt when the
/// answer has no distinct alternative.
std::optional<std::string> corrupt_answer(std::string_view prompt, std::string_view answer,
                                          PromptKind target);

/// "oracle", "mock:<file>" or "llm".
std::shared_ptr<ChatBackend> make_backend(std::string_view spec,
                                          const ChatBackendConfig& config = ChatBackendConfig::from_env());

// --- Profiles and context ----------------------------------------------------

struct StageSpec {
  int index = 1;  // 1-based position in the profile
  PromptKind kind = PromptKind::KeyInfo;
};

struct DecompositionProfile {
  std::string name;
  std::vector<StageSpec> stages;

  static DecompositionProfile haplan5();
  static DecompositionProfile haplan4();
  /// Throws std::invalid_argument for other names.
  static DecompositionProfile by_name(std::string_view name);

  /// Stage index that answers prompts of `kind`; 0 when none does.
  int stage_of(PromptKind kind) const;
};

struct PlanningContext {
  LayoutFacts facts;
  std::string instruction;
  std::vector<std::string> feedback_history;
  int cook_wait = 20;

  static PlanningContext of(const Layout& layout, std::string instruction);
  /// Instruction followed by every feedback text, space separated.
  std::string full_instruction() const;
};

struct SessionTranscript {
  int session_index = 0;
  PromptKind kind = PromptKind::Unknown;
  std::string id;  // "s<stage>.<k>"
  std::string prompt;
  std::string response;
  bool parsed_ok = false;
  std::optional<PlayerId> agent;      // Schedule
  std::optional<RoughWorkItem> item;  // Refine / Time / RefineTime

  friend bool operator==(const SessionTranscript&, const SessionTranscript&) = default;
};

std::string transcript_to_json(const SessionTranscript& t);
SessionTranscript transcript_from_json(std::string_view json);
/// One JSON object per line.
std::string transcripts_to_jsonl(const std::vector<SessionTranscript>& ts);
std::vector<SessionTranscript> transcripts_from_jsonl(std::string_view text);

// --- Prompts -----------------------------------------------------------------

class MissingPriorOutput : public std::runtime_error {
 public:
  explicit MissingPriorOutput(int stage)
      : std::runtime_error("missing prior output for stage " + std::to_string(stage)), stage_(stage) {}
  int stage() const noexcept { return stage_; }

 private:
  int stage_;
};

/// Parsed outputs of the stages run so far.
struct PriorOutputs {
  std::optional<KeyInfo> key_info;
  std::optional<RoughPlan> rough;
  std::vector<std::pair<RoughWorkItem, RefinedWorkItem>> refined;
  std::vector<std::pair<RoughWorkItem, int>> times;

  const RefinedWorkItem* refined_for(const RoughWorkItem& item) const;
  const int* time_for(const RoughWorkItem& item) const;
};

std::string key_info_prompt(const PlanningContext& ctx);
std::string rough_prompt(const PlanningContext& ctx, const KeyInfo& info);
std::string refine_prompt(const PlanningContext& ctx, const RoughWorkItem& item, Ingredient objective);
std::string time_prompt(const RoughWorkItem& item, const RefinedWorkItem& refined, Ingredient objective);
std::string refine_time_prompt(const PlanningContext& ctx, const RoughWorkItem& item,
                               Ingredient objective);
/// Items must carry est_steps.
std::string schedule_prompt(const std::vector<RoughWorkItem>& items, Ingredient objective, int cook_wait);

/// Prompt for one stage invocation. `item` selects the work item for the
/// per-item stages and `agent` the list for the schedule stage.
/// Throws MissingPriorOutput.
std::string build_prompt(const DecompositionProfile& profile, int stage, const PlanningContext& ctx,
                         const PriorOutputs& prior, const std::optional<RoughWorkItem>& item = {},
                         std::optional<PlayerId> agent = {});

inline constexpr std::string_view kClarification = "Answer strictly in the example format.";

// --- Pipeline ----------------------------------------------------------------

class StageFailed : public std::runtime_error {
 public:
  StageFailed(int stage, std::string cause, const std::string& message)
      : std::runtime_error(fmt_message(stage, cause, message)), stage_(stage), cause_(std::move(cause)) {}
  int stage() const noexcept { return stage_; }
  /// "ParseError", "NoCandidate", "Timeout", ...
  const std::string& cause() const noexcept { return cause_; }

 private:
  static std::string fmt_message(int stage, const std::string& cause, const std::string& message) {
    return "stage " + std::to_string(stage) + " failed (" + cause + "): " + message;
  }
  int stage_;
  std::string cause_;
};

struct PipelineOptions {
  int max_retries = 2;  // extra attempts per stage invocation after a ParseError
};

struct PipelineResult {
  Convention convention;
  std::vector<SessionTranscript> transcripts;
};

PipelineResult run_pipeline(const PlanningContext& ctx, ChatBackend& backend,
                            const DecompositionProfile& profile, const PipelineOptions& opts = {});

/// Appends `feedback` to the history (empty text is ignored) and reruns every stage.
PipelineResult replan(PlanningContext& ctx, std::string_view feedback, ChatBackend& backend,
                      const DecompositionProfile& profile, const PipelineOptions& opts = {});

/// Builds the convention from the last parsed transcript of each invocation.
/// Throws MissingPriorOutput or ParseError.
Convention assemble_convention(const std::vector<SessionTranscript>& transcripts,
                               const DecompositionProfile& profile);

// --- Grading -----------------------------------------------------------------

struct StageGrade {
  int stage = 0;
  bool correct = false;
};

struct GradeReport {
  std::vector<StageGrade> stages;
  bool final_solution = false;

  bool all_true() const;
  /// Indices of incorrect stages.
  std::vector<int> flagged() const;
};

/// Stage 1 is compared with the truth's key information. Later stages are
/// graded on the prompt they actually received: the response must parse to
/// the reference answer for that prompt. The final solution is the assembled
/// convention against the truth's convention.
GradeReport grade(const std::vector<SessionTranscript>& transcripts, const GroundTruth& truth,
                  const DecompositionProfile& profile);

}  // namespace cookplan

#endif  // COOKPLAN_PLANNER_HPP_
