#pragma once

#include <string>
#include <vector>

namespace ige {

/// One logged decision. Serialized as a single JSON line with a fixed field
/// order, so equal logs compare byte-for-byte.
struct Event {
  int step = 0;          // global operation count when the event was emitted
  std::string stage;     // state_select | action_select | filter_accept | filter_reject | success | search | warning
  std::string choice;    // chosen entry id, action text, or detail
  std::string verdict;   // filter stages: "accept" or "reject"; otherwise empty
  bool fallback = false; // true when a parse failure forced the failsafe path
};

using EventLog = std::vector<Event>;

std::string to_jsonl(const EventLog& log);
EventLog event_log_from_jsonl(const std::string& text);

int count_fallbacks(const EventLog& log);

}  // namespace ige
