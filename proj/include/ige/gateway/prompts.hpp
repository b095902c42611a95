#pragma once

#include <string>
#include <variant>
#include <vector>

#include "ige/gateway/messages.hpp"

namespace ige::gateway {

/// Run-scoped prompt configuration: the environment briefing shown as the
/// system message, the prompting mode, and the rolling exchange history.
struct PromptContext {
  std::string environment_description;
  PromptingMode mode = PromptingMode::zero_shot;
  const PromptHistory* history = nullptr;  // optional
};

struct StateSelectPayload {
  std::vector<std::string> archive_observations;
};

struct ActionSelectPayload {
  std::string current_observation;
  std::vector<std::string> tried_actions;  // shown when history conditioning is on
  bool include_history_section = true;
  bool free_form = false;
  std::vector<std::string> options;  // enumerated actions, empty for free-form
};

struct FilterAcceptPayload {
  std::vector<std::string> archive_observations;
  std::string candidate_observation;
};

struct FilterRejectPayload {
  std::vector<std::string> archive_observations;
};

using StagePayload =
    std::variant<StateSelectPayload, ActionSelectPayload, FilterAcceptPayload, FilterRejectPayload>;

/// Assemble the full message list for one decision: system briefing, replayed
/// history turns, the stage message, and the reply-format instruction. The
/// same inputs always produce byte-identical messages.
std::vector<ChatMessage> build_prompt(const PromptContext& context, const StagePayload& payload);

/// The stage message alone (second-to-last user message of build_prompt).
std::string stage_message(const StagePayload& payload);

/// The reply-format instruction for a stage under the given mode.
std::string format_instruction(const StagePayload& payload, PromptingMode mode);

/// System message: environment briefing plus the exploration briefing.
std::string system_message(const std::string& environment_description);

}  // namespace ige::gateway
