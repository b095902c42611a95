#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ige/archive.hpp"
#include "ige/environment.hpp"
#include "ige/events.hpp"
#include "ige/selectors/interfaces.hpp"

namespace ige {

/// Exploration budget. `n_state_expansions` times, a state is chosen from the
/// archive and expanded with up to `n_exploratory_actions` consecutive
/// actions, so applied operations never exceed their product. Restores are
/// free; only applied actions count. `env_horizon` caps trajectory length.
struct RunBudget {
  int n_state_expansions = 1;
  int n_exploratory_actions = 1;
  int env_horizon = 1;

  int max_operations() const { return n_state_expansions * n_exploratory_actions; }
};

struct RunResult {
  bool success = false;
  std::vector<Action> best_trajectory;
  int env_steps_used = 0;
  Archive final_archive;
  EventLog event_log;
};

/// Restore an archived state and check the stored observation still matches.
void restore_to(Environment& env, const ArchiveEntry& entry);

/// The trajectory of the shortest success entry; otherwise the entry ranked
/// best by the environment's progress score (shortest trajectory breaking
/// ties, and used alone when no score is defined). Restores entries to read
/// scores, so the environment is left in an unspecified state.
std::vector<Action> best_trajectory(const Archive& archive, Environment& env);

/// One archive-driven exploration run. Repeatedly selects an archived state,
/// rolls out exploratory actions from it (each newly reached state becomes the
/// root for the rest of the rollout), filters discoveries into the archive,
/// and stops the moment any action lands in a success state.
RunResult run_ige(Environment& env, const SelectorBackends& backends, const RunBudget& budget,
                  const AblationToggles& toggles, std::uint64_t rng_seed);

/// Deterministic serialization (snapshots omitted): identical runs compare
/// byte-for-byte.
std::string serialize_run(const RunResult& result);

}  // namespace ige
