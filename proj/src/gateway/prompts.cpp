#include "ige/gateway/prompts.hpp"

#include <sstream>

namespace ige::gateway {

namespace {

const char* kExplorationBriefing =
    "You will be prompted to perform systematic exploration in the style of Go-Explore.\n"
    "An archive will be maintained of interesting states found.\n"
    "You will be prompted to:\n"
    "- Select a state from the archive that is the most promising, i.e., likely to lead to a "
    "solution or more novel states.\n"
    "- Explore from states intelligently, by picking new actions.\n"
    "- For each new state, determine if the state is interestingly new and should be added to "
    "the archive.";

const char* kChoicePlain =
    "Reply concisely and exactly with the following JSON format:\n"
    "{\"choice\": X}\n"
    "where X is the index of the desired choice.";

const char* kChoiceCot =
    "First, briefly reason about your plan.\n"
    "Reply concisely and exactly with the following JSON format:\n"
    "{\"thought\": X, \"choice\": Y}\n"
    "where X is your reasoning and Y is the index of the desired choice. Make sure Y is a "
    "parsable integer.";

const char* kAcceptPlain =
    "Reply concisely and exactly with the following JSON format:\n"
    "{\"choice\": X}\n"
    "where X is 1 to add the new state to the archive, or 0 to discard it.";

const char* kAcceptCot =
    "First, briefly reason about whether the new state is worth keeping.\n"
    "Reply concisely and exactly with the following JSON format:\n"
    "{\"thought\": X, \"choice\": Y}\n"
    "where X is your reasoning and Y is 1 to add the new state to the archive, or 0 to discard "
    "it. Make sure Y is a parsable integer.";

const char* kRejectPlain =
    "Reply concisely and exactly with the following JSON format:\n"
    "{\"remove\": [X, ...]}\n"
    "where the list holds the indices of the archive states to remove. Reply with an empty "
    "list to keep every state.";

const char* kRejectCot =
    "First, briefly reason about which states are still worth keeping.\n"
    "Reply concisely and exactly with the following JSON format:\n"
    "{\"thought\": X, \"remove\": [Y, ...]}\n"
    "where X is your reasoning and the list holds the indices of the archive states to remove. "
    "Reply with an empty list to keep every state.";

const char* kCommandPlain =
    "Reply with the command in the format '> command'. Ensure only one command is included.";

const char* kCommandCot =
    "Please briefly reason about your plan and then output the command in the format "
    "'> command'. Ensure only one command is included.";

std::string numbered(const std::vector<std::string>& items) {
  std::ostringstream out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out << '\n';
    out << i << ": " << items[i];
  }
  return out.str();
}

struct StageMessageBuilder {
  std::string operator()(const StateSelectPayload& p) const {
    std::ostringstream out;
    out << "Current state archive:\n" << numbered(p.archive_observations) << "\n\n"
        << "Select the most promising state.";
    return out.str();
  }

  std::string operator()(const ActionSelectPayload& p) const {
    std::ostringstream out;
    out << "Current state:\n" << p.current_observation;
    if (p.include_history_section) {
      out << "\n\nPreviously tried actions:\n";
      if (p.tried_actions.empty()) {
        out << "None.";
      } else {
        for (std::size_t i = 0; i < p.tried_actions.size(); ++i) {
          if (i) out << '\n';
          out << p.tried_actions[i];
        }
      }
    }
    if (!p.free_form) {
      out << "\n\nValid actions:\n" << numbered(p.options);
    }
    out << "\n\nOutput the next action.";
    return out.str();
  }

  std::string operator()(const FilterAcceptPayload& p) const {
    std::ostringstream out;
    out << "Current state archive:\n" << numbered(p.archive_observations) << "\n\n"
        << "New state:\n" << p.candidate_observation << "\n\n"
        << "Is this state interestingly new (a novel state that is relevant to the task or "
           "could lead to further stepping stones), such that it should be added to the "
           "archive?";
    return out.str();
  }

  std::string operator()(const FilterRejectPayload& p) const {
    std::ostringstream out;
    out << "Current state archive:\n" << numbered(p.archive_observations) << "\n\n"
        << "Remove outdated states that are no longer relevant to the task, have had all "
           "interesting explorations attempted, or have similar states in the archive that "
           "show more progress.";
    return out.str();
  }
};

struct InstructionBuilder {
  PromptingMode mode;

  std::string operator()(const StateSelectPayload&) const {
    return mode == PromptingMode::chain_of_thought ? kChoiceCot : kChoicePlain;
  }
  std::string operator()(const ActionSelectPayload& p) const {
    if (p.free_form) {
      return mode == PromptingMode::chain_of_thought ? kCommandCot : kCommandPlain;
    }
    return mode == PromptingMode::chain_of_thought ? kChoiceCot : kChoicePlain;
  }
  std::string operator()(const FilterAcceptPayload&) const {
    return mode == PromptingMode::chain_of_thought ? kAcceptCot : kAcceptPlain;
  }
  std::string operator()(const FilterRejectPayload&) const {
    return mode == PromptingMode::chain_of_thought ? kRejectCot : kRejectPlain;
  }
};

}  // namespace

std::string system_message(const std::string& environment_description) {
  return environment_description + "\n" + kExplorationBriefing;
}

std::string stage_message(const StagePayload& payload) {
  return std::visit(StageMessageBuilder{}, payload);
}

std::string format_instruction(const StagePayload& payload, PromptingMode mode) {
  return std::visit(InstructionBuilder{mode}, payload);
}

std::vector<ChatMessage> build_prompt(const PromptContext& context, const StagePayload& payload) {
  std::vector<ChatMessage> messages;
  messages.push_back({"system", system_message(context.environment_description)});
  if (context.history != nullptr) {
    for (const auto& [user, assistant] : context.history->turns()) {
      messages.push_back({"user", user});
      messages.push_back({"assistant", assistant});
    }
  }
  messages.push_back({"user", stage_message(payload)});
  messages.push_back({"user", format_instruction(payload, context.mode)});
  return messages;
}

}  // namespace ige::gateway
