#include "ige/baselines/baselines.hpp"

#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ige/archive.hpp"
#include "ige/gateway/parse.hpp"
#include "ige/gateway/prompts.hpp"

namespace ige::baselines {

namespace {

using gateway::ChatMessage;
using gateway::PromptingMode;
using gateway::Stage;

std::string transcript_text(const EpisodeRecord& episode) {
  std::ostringstream os;
  for (std::size_t i = 0; i < episode.actions.size(); ++i) {
    os << "Observation:\n" << episode.observations[i] << "\n";
    os << "Action: " << episode.actions[i] << "\n";
  }
  if (!episode.observations.empty()) {
    os << "Observation:\n" << episode.observations.back() << "\n";
  }
  os << "Result: the task was not completed.";
  return os.str();
}

int prompt_chars(const std::vector<ChatMessage>& messages) {
  std::size_t total = 0;
  for (const auto& m : messages) total += m.role.size() + m.content.size();
  return static_cast<int>(total);
}

/// Shared loop behind the three episodic baselines.
BaselineResult run_episodic(Environment& env, gateway::Gateway& gw, int budget_ops,
                            DetRng& rng, bool chain_of_thought, bool reflexion) {
  if (budget_ops < 0) throw std::invalid_argument("negative baseline budget");
  BaselineResult result;
  const std::string system = env.description(true);
  const PromptingMode mode =
      chain_of_thought ? PromptingMode::chain_of_thought : PromptingMode::zero_shot;

  int ops = 0;
  std::string carried_context;  // previous transcript plus reflection, reflexion only
  while (ops < budget_ops) {
    env.reset();
    if (!result.episodes.empty()) {
      result.events.push_back({ops, "reset", std::to_string(result.episodes.size()), "", false});
    }
    EpisodeRecord episode;
    episode.observations.push_back(env.observation());
    std::vector<std::pair<std::string, std::string>> turns;

    while (!env.is_terminal() && ops < budget_ops) {
      ActionSpace space = env.valid_actions();
      if (!space.free_form && space.actions.empty()) break;

      std::ostringstream user;
      if (turns.empty() && !carried_context.empty()) user << carried_context << "\n\n";
      user << "Observation:\n" << episode.observations.back();
      if (!space.free_form) {
        user << "\n\nValid actions:\n";
        for (std::size_t i = 0; i < space.actions.size(); ++i) {
          user << i << ": " << space.actions[i] << "\n";
        }
      } else {
        user << "\n";
      }
      gateway::ActionSelectPayload payload;
      payload.free_form = space.free_form;
      payload.options = space.actions;
      user << "\n" << gateway::format_instruction(payload, mode);

      std::vector<ChatMessage> messages;
      messages.push_back({"system", system});
      for (const auto& [u, a] : turns) {
        messages.push_back({"user", u});
        messages.push_back({"assistant", a});
      }
      messages.push_back({"user", user.str()});
      episode.peak_prompt_chars = std::max(episode.peak_prompt_chars, prompt_chars(messages));

      std::string response = gw.complete(Stage::baseline_action, messages);
      ++episode.exchanges_used;

      Action action;
      bool fallback = false;
      if (space.free_form) {
        auto cmd = gateway::parse_command(response);
        if (cmd) {
          action = *cmd;
        } else {
          action = env.fallback_action();
          fallback = true;
        }
      } else {
        auto choice = gateway::parse_choice(response, static_cast<int>(space.actions.size()),
                                            chain_of_thought);
        if (choice) {
          action = space.actions[*choice];
        } else {
          action = space.actions[rng.uniform_int(space.actions.size())];
          fallback = true;
        }
      }
      if (fallback) {
        gw.mark_fallback();
        ++result.fallbacks;
      }

      env.step(action);
      ++ops;
      episode.actions.push_back(action);
      episode.step_costs.push_back(1);
      episode.observations.push_back(env.observation());
      result.events.push_back({ops, "baseline_action", action, "", fallback});
      turns.emplace_back(user.str(), response);

      if (env.is_success()) {
        episode.success = true;
        result.solve_operation = ops;
        result.events.push_back({ops, "success", action, "", false});
        break;
      }
    }

    bool made_progress = !episode.actions.empty();
    result.episodes.push_back(std::move(episode));
    if (result.episodes.back().success) {
      result.success = true;
      break;
    }
    if (!made_progress) break;  // terminal or dead end straight away, retrying is pointless

    if (reflexion && ops < budget_ops) {
      const EpisodeRecord& failed = result.episodes.back();
      std::string transcript = transcript_text(failed);
      std::vector<ChatMessage> messages{
          {"system", system},
          {"user",
           "Here is your previous attempt at the task:\n\n" + transcript +
               "\n\nIn a few sentences, reflect on what went wrong and state a plan to do "
               "better on the next attempt."},
      };
      std::string reflection = gw.complete(Stage::reflection, messages);
      result.episodes.back().reflection = reflection;
      ++result.episodes.back().exchanges_used;
      result.events.push_back({ops, "reflection", "", "", false});
      carried_context =
          "Your previous attempt:\n" + transcript + "\n\nYour reflection:\n" + reflection;
    }
  }

  result.operations_used = ops;
  return result;
}

}  // namespace

BaselineResult run_naive(Environment& env, gateway::Gateway& gw, int budget_ops, DetRng& rng) {
  return run_episodic(env, gw, budget_ops, rng, /*chain_of_thought=*/false,
                      /*reflexion=*/false);
}

BaselineResult run_react(Environment& env, gateway::Gateway& gw, int budget_ops, DetRng& rng) {
  return run_episodic(env, gw, budget_ops, rng, /*chain_of_thought=*/true,
                      /*reflexion=*/false);
}

BaselineResult run_reflexion(Environment& env, gateway::Gateway& gw, int budget_ops,
                             DetRng& rng) {
  return run_episodic(env, gw, budget_ops, rng, /*chain_of_thought=*/true,
                      /*reflexion=*/true);
}

const char* to_string(SearchStrategy strategy) {
  return strategy == SearchStrategy::dfs ? "dfs" : "bfs";
}

RunResult graph_search(Environment& env, SearchStrategy strategy, int budget_ops) {
  if (budget_ops < 1) throw std::invalid_argument("graph search needs a positive budget");
  RunResult result;
  env.reset();
  Archive archive = init_archive(env);
  std::set<std::string> visited{env.observation()};
  std::deque<int> frontier{0};
  int ops = 0;
  bool done = env.is_success();
  if (done) {
    archive.at(0).success_terminal = true;
    result.success = true;
    result.event_log.push_back({0, "success", env.observation(), "", false});
  }

  while (!done && !frontier.empty()) {
    int id;
    if (strategy == SearchStrategy::bfs) {
      id = frontier.front();
      frontier.pop_front();
    } else {
      id = frontier.back();
      frontier.pop_back();
    }
    const Snapshot snap = archive.at(id).snapshot;
    const std::vector<Action> trajectory = archive.at(id).trajectory;
    env.restore(snap);
    if (env.is_terminal()) continue;
    const std::vector<Action> actions = env.valid_actions().actions;

    std::vector<int> children;
    for (const Action& action : actions) {
      if (ops >= budget_ops) {
        done = true;
        break;
      }
      env.restore(snap);
      env.step(action);
      ++ops;
      archive.at(id).tried_actions.insert(action);
      result.event_log.push_back({ops, "search", action, "", false});
      std::string obs = env.observation();

      ArchiveEntry entry;
      entry.observation = obs;
      entry.snapshot = env.snapshot();
      entry.trajectory = trajectory;
      entry.trajectory.push_back(action);
      entry.discovery_step = ops;

      if (env.is_success()) {
        entry.success_terminal = true;
        archive.append(std::move(entry));
        result.event_log.push_back({ops, "success", obs, "", false});
        result.success = true;
        done = true;
        break;
      }
      if (visited.count(obs)) continue;
      visited.insert(obs);
      children.push_back(archive.append(std::move(entry)));
    }
    if (strategy == SearchStrategy::bfs) {
      for (int c : children) frontier.push_back(c);
    } else {
      for (auto it = children.rbegin(); it != children.rend(); ++it) frontier.push_back(*it);
    }
  }

  if (!result.success && frontier.empty() && ops < budget_ops) {
    result.event_log.push_back({ops, "search", "exhausted", "", false});
  }
  result.env_steps_used = ops;
  result.best_trajectory = best_trajectory(archive, env);
  result.final_archive = std::move(archive);
  return result;
}

}  // namespace ige::baselines
