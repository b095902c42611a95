#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <utility>
#include <vector>

namespace ige::gateway {

/// Which decision a completion request serves. Recorded with every transcript
/// exchange so replays can detect when a request is consumed out of order.
enum class Stage {
  state_select,
  action_select,
  filter_accept,
  filter_reject,
  baseline_action,
  reflection,
};

const char* to_string(Stage stage);

enum class PromptingMode { zero_shot, few_shot, chain_of_thought };

struct ChatMessage {
  std::string role;  // "system" | "user" | "assistant"
  std::string content;
};

/// Wire-level sampling parameters, chat-completions style.
struct ModelParams {
  std::string model = "gpt-4o";
  double temperature = 0.7;
  int max_new_tokens = 1000;
  std::string response_format = "json_object";  // "json_object" | "text"
};

/// Per-environment defaults: sampling temperature 0.7 with JSON-object output
/// for the arithmetic and gridworld tasks, 0.3 with free text for the maze.
ModelParams default_model_params(const std::string& env_name);

struct CompletionRequest {
  ModelParams params;
  std::vector<ChatMessage> messages;
};

/// One request/response pair as stored in a transcript.
struct CompletionExchange {
  int index = 0;
  Stage stage = Stage::state_select;
  std::string digest;
  CompletionRequest request;
  std::string response;
  std::int64_t latency_ms = 0;
  std::string parse_outcome = "ok";  // "ok" | "fallback"
};

/// Stable fingerprint of a request: FNV-1a over the stage tag and every
/// message. Replay compares digests to catch prompt drift.
std::string request_digest(Stage stage, const CompletionRequest& request);

/// Bounded rolling window of previous exchanges, replayed into each new prompt
/// so the model sees its recent decisions.
class PromptHistory {
public:
  explicit PromptHistory(std::size_t cap = 8) : cap_(cap) {}

  void add(std::string user, std::string assistant) {
    turns_.emplace_back(std::move(user), std::move(assistant));
    while (turns_.size() > cap_) turns_.pop_front();
  }

  const std::deque<std::pair<std::string, std::string>>& turns() const { return turns_; }
  void clear() { turns_.clear(); }

private:
  std::size_t cap_;
  std::deque<std::pair<std::string, std::string>> turns_;
};

}  // namespace ige::gateway
