#include "ige/run.hpp"

#include <stdexcept>

#include "json.hpp"

namespace ige {

using ordered_json = nlohmann::ordered_json;

void restore_to(Environment& env, const ArchiveEntry& entry) {
  env.restore(entry.snapshot);
  if (env.observation() != entry.observation) {
    throw std::runtime_error("restore_to: restored state does not reproduce entry " +
                             std::to_string(entry.entry_id));
  }
}

std::vector<Action> best_trajectory(const Archive& archive, Environment& env) {
  const ArchiveEntry* best_success = nullptr;
  for (const auto& e : archive.entries()) {
    if (!e.success_terminal) continue;
    if (best_success == nullptr || e.trajectory.size() < best_success->trajectory.size()) {
      best_success = &e;
    }
  }
  if (best_success != nullptr) return best_success->trajectory;

  const ArchiveEntry* best = nullptr;
  double best_score = 0.0;
  bool any_score = false;
  for (const auto& e : archive.entries()) {
    env.restore(e.snapshot);
    auto score = env.score();
    if (score.has_value()) {
      if (!any_score || *score > best_score ||
          (*score == best_score && e.trajectory.size() < best->trajectory.size())) {
        best = &e;
        best_score = *score;
      }
      any_score = true;
    } else if (!any_score) {
      if (best == nullptr || e.trajectory.size() < best->trajectory.size()) best = &e;
    }
  }
  return best != nullptr ? best->trajectory : std::vector<Action>{};
}

RunResult run_ige(Environment& env, const SelectorBackends& backends, const RunBudget& budget,
                  const AblationToggles& toggles, std::uint64_t rng_seed) {
  if (budget.n_state_expansions < 1) {
    throw std::invalid_argument("run_ige: need at least one state expansion");
  }
  if (budget.n_exploratory_actions < 0 || budget.env_horizon < 1) {
    throw std::invalid_argument("run_ige: malformed budget");
  }
  if (budget.env_horizon > env.horizon()) {
    throw std::invalid_argument("run_ige: budget horizon exceeds the environment horizon");
  }
  if (!backends.state || !backends.action || !backends.filter) {
    throw std::invalid_argument("run_ige: missing backend");
  }

  env.reset();
  Archive archive = init_archive(env);
  EventLog events;
  DetRng rng(rng_seed);
  RunContext ctx{env, archive, events, rng, toggles};

  bool success = env.is_success();
  if (success) {
    archive.at_index(0).success_terminal = true;
    events.push_back({0, "success", "0", "", false});
  }

  if (budget.n_exploratory_actions > 0) {
    for (int expansion = 0; expansion < budget.n_state_expansions && !success; ++expansion) {
      int root_id = backends.state->select(ctx);
      bool root_archived = true;
      ArchiveEntry transient;
      auto root = [&]() -> ArchiveEntry& {
        return root_archived ? archive.at(root_id) : transient;
      };
      restore_to(env, root());

      for (int j = 0; j < budget.n_exploratory_actions; ++j) {
        // Truncated rollouts are logged so budget audits can tell a dead end
        // from silent operation loss.
        if (env.is_terminal()) {
          events.push_back({ctx.steps_used, "warning", "terminal_state", "", false});
          break;
        }
        if (static_cast<int>(root().trajectory.size()) >= budget.env_horizon) {
          events.push_back({ctx.steps_used, "warning", "horizon_reached", "", false});
          break;
        }
        ActionSpace space = env.valid_actions();
        if (space.actions.empty()) {
          events.push_back({ctx.steps_used, "warning", "no_valid_actions", "", false});
          break;
        }

        Action action = backends.action->select(root(), space, ctx);
        env.step(action);
        ctx.steps_used += 1;
        root().tried_actions.insert(action);

        ArchiveEntry candidate;
        candidate.observation = env.observation();
        candidate.snapshot = env.snapshot();
        candidate.trajectory = root().trajectory;
        candidate.trajectory.push_back(action);
        candidate.discovery_step = ctx.steps_used;
        candidate.success_terminal = env.is_success();

        if (candidate.success_terminal) {
          // Solved states bypass the filter; the run is over.
          int id = archive.append(std::move(candidate));
          events.push_back({ctx.steps_used, "success", std::to_string(id), "", false});
          success = true;
          break;
        }

        if (backends.filter->accept(candidate, ctx)) {
          int id = archive.append(std::move(candidate));
          root_id = id;
          root_archived = true;
        } else {
          transient = std::move(candidate);
          root_archived = false;
        }
      }

      if (!success && backends.filter->rejection_mode()) {
        backends.filter->post_rollout(ctx);
      }
    }
  }

  RunResult result;
  result.success = success;
  result.env_steps_used = ctx.steps_used;
  result.best_trajectory = best_trajectory(archive, env);
  result.final_archive = std::move(archive);
  result.event_log = std::move(events);
  return result;
}

std::string serialize_run(const RunResult& result) {
  ordered_json j;
  j["success"] = result.success;
  j["env_steps_used"] = result.env_steps_used;
  j["best_trajectory"] = result.best_trajectory;
  ordered_json entries = ordered_json::array();
  for (const auto& e : result.final_archive.entries()) {
    ordered_json entry;
    entry["entry_id"] = e.entry_id;
    entry["observation"] = e.observation;
    entry["trajectory"] = e.trajectory;
    entry["tried_actions"] = e.tried_actions;
    entry["visit_count"] = e.visit_count;
    entry["discovery_step"] = e.discovery_step;
    entry["success_terminal"] = e.success_terminal;
    entries.push_back(entry);
  }
  j["archive"] = entries;
  ordered_json events = ordered_json::array();
  for (const auto& e : result.event_log) {
    ordered_json ev;
    ev["step"] = e.step;
    ev["stage"] = e.stage;
    ev["choice"] = e.choice;
    ev["verdict"] = e.verdict;
    ev["fallback"] = e.fallback;
    events.push_back(ev);
  }
  j["events"] = events;
  return j.dump();
}

}  // namespace ige
