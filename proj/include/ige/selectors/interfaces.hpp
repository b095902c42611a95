#pragma once

#include <memory>

#include "ige/archive.hpp"
#include "ige/environment.hpp"
#include "ige/events.hpp"
#include "ige/rng.hpp"

namespace ige {

/// Which parts of the exploration loop are driven intelligently. Turning a
/// flag off swaps in the uninformed counterpart (random selection, archive
/// everything, or history-free action choice).
struct AblationToggles {
  bool intelligent_state = true;
  bool intelligent_action = true;
  bool intelligent_filter = true;
  bool use_action_history = true;
};

/// Mutable run state threaded through every backend call.
struct RunContext {
  Environment& env;
  Archive& archive;
  EventLog& events;
  DetRng& rng;
  const AblationToggles& toggles;
  int steps_used = 0;
};

/// Picks the next expansion root from the archive. Implementations must
/// increment the chosen entry's visit count (via Archive::note_selected) and
/// log a state_select event.
class StateSelector {
public:
  virtual ~StateSelector() = default;
  virtual int select(RunContext& ctx) = 0;  // returns the chosen entry id
};

/// Picks the next action to try from the current expansion root. Enumerable
/// spaces always yield one of the listed actions; free-form spaces may yield
/// any command (with the environment's safe fallback on parse failure). Logs
/// an action_select event.
class ActionSelector {
public:
  virtual ~ActionSelector() = default;
  virtual Action select(const ArchiveEntry& root, const ActionSpace& space, RunContext& ctx) = 0;
};

/// Decides which discovered states deserve archiving. Acceptance-style
/// filters judge each candidate as it appears; rejection-style filters accept
/// everything and prune after each rollout.
class ArchiveFilter {
public:
  virtual ~ArchiveFilter() = default;
  virtual bool accept(const ArchiveEntry& candidate, RunContext& ctx) = 0;
  virtual void post_rollout(RunContext& ctx) { (void)ctx; }
  virtual bool rejection_mode() const { return false; }
};

struct SelectorBackends {
  std::shared_ptr<StateSelector> state;
  std::shared_ptr<ActionSelector> action;
  std::shared_ptr<ArchiveFilter> filter;
};

}  // namespace ige
