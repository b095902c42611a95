#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ige/environment.hpp"
#include "ige/gateway/gateway.hpp"
#include "ige/rng.hpp"
#include "ige/run.hpp"

namespace ige::baselines {

/// One attempt at the task, reset to reset. `observations` holds the initial
/// observation plus one entry per applied action, so it is always one longer
/// than `actions` (equal when the episode recorded no actions).
struct EpisodeRecord {
  std::vector<std::string> observations;
  std::vector<Action> actions;
  std::vector<int> step_costs;  // parallel to actions; every action costs 1
  bool success = false;
  int exchanges_used = 0;       // completions requested during this episode
  int peak_prompt_chars = 0;    // largest prompt (total message characters)
  std::string reflection;       // written after a failed episode, reflexion only
};

struct BaselineResult {
  std::vector<EpisodeRecord> episodes;
  bool success = false;
  int operations_used = 0;
  std::optional<int> solve_operation;  // 1-based operation index of the winning action
  int fallbacks = 0;
  EventLog events;
};

/// Single-loop agent: each action is one completion conditioned on the full
/// current-episode history. Plain reply format. Failed episodes restart the
/// same task until `budget_ops` applied actions are consumed or one episode
/// succeeds; resets are free.
BaselineResult run_naive(Environment& env, gateway::Gateway& gw, int budget_ops, DetRng& rng);

/// Like run_naive but every action request uses the chain-of-thought format
/// (a thought plus the choice).
BaselineResult run_react(Environment& env, gateway::Gateway& gw, int budget_ops, DetRng& rng);

/// Like run_react, plus: after each failed episode one reflection completion
/// is requested, and the next episode's first prompt carries the previous
/// episode's transcript and that reflection. Reflections cost no operations.
BaselineResult run_reflexion(Environment& env, gateway::Gateway& gw, int budget_ops,
                             DetRng& rng);

enum class SearchStrategy { dfs, bfs };

const char* to_string(SearchStrategy strategy);

/// Systematic search over the environment's action graph with visited-state
/// dedup by observation. Each applied action costs one operation; restores
/// are free. DFS expands children in enumeration order; BFS is first-in
/// first-out. Stops at the first success, at `budget_ops`, or when the
/// reachable graph is exhausted (logged as a "search exhausted" event).
RunResult graph_search(Environment& env, SearchStrategy strategy, int budget_ops);

}  // namespace ige::baselines
