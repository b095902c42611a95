#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ige/envs/game24.hpp"
#include "ige/selectors/interfaces.hpp"

namespace ige::selectors {

// Deterministic backends used as test fixtures and ablation stand-ins. They
// exercise the exploration loop without a language model.

/// Rejects any candidate whose observation is already archived.
class ScriptedDedupFilter final : public ArchiveFilter {
public:
  bool accept(const ArchiveEntry& candidate, RunContext& ctx) override;
};

/// Breadth-first flavored state choice: the earliest-discovered entry that
/// still has an untried valid action (probed by restoring each entry). Falls
/// back to the newest entry when everything is exhausted.
class FrontierStateSelector final : public StateSelector {
public:
  int select(RunContext& ctx) override;
};

/// First valid action not yet tried from this root, in enumeration order.
/// When history conditioning is off it degrades to the first valid action.
class FirstUntriedActionSelector final : public ActionSelector {
public:
  Action select(const ArchiveEntry& root, const ActionSpace& space, RunContext& ctx) override;
};

/// Arbitrary scripted policy for tests.
class CallbackActionSelector final : public ActionSelector {
public:
  using Fn = std::function<Action(const ArchiveEntry&, const ActionSpace&, RunContext&)>;
  explicit CallbackActionSelector(Fn fn) : fn_(std::move(fn)) {}
  Action select(const ArchiveEntry& root, const ActionSpace& space, RunContext& ctx) override;

private:
  Fn fn_;
};

/// Solution-following backends for the 24 game: the state selector walks the
/// archive to the deepest state on a precomputed solving line and the action
/// selector plays the next solving reduction from it (first untried action
/// when off the line). Throws std::invalid_argument for unsolvable tasks.
SelectorBackends make_game24_solution_backends(const std::vector<int>& task);

/// Breadth-first scripted backends: frontier state choice, first-untried
/// actions, exact-observation dedup.
SelectorBackends make_frontier_backends();

}  // namespace ige::selectors
