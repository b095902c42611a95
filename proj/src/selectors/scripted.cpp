#include "ige/selectors/scripted.hpp"

#include <algorithm>
#include <memory>
#include <stdexcept>

namespace ige::selectors {

namespace {

using envs::Game24Action;
using envs::Game24Env;

void log_state(RunContext& ctx, int entry_id) {
  ctx.events.push_back({ctx.steps_used, "state_select", std::to_string(entry_id), "", false});
}

void log_action(RunContext& ctx, const Action& action) {
  ctx.events.push_back({ctx.steps_used, "action_select", action, "", false});
}

Action first_untried(const ArchiveEntry& root, const ActionSpace& space, bool use_history) {
  if (use_history) {
    for (const Action& a : space.actions) {
      if (!root.tried_actions.count(a)) return a;
    }
  }
  return space.actions.front();
}

}  // namespace

bool ScriptedDedupFilter::accept(const ArchiveEntry& candidate, RunContext& ctx) {
  bool fresh = std::none_of(
      ctx.archive.entries().begin(), ctx.archive.entries().end(),
      [&candidate](const ArchiveEntry& e) { return e.observation == candidate.observation; });
  ctx.events.push_back({ctx.steps_used, "filter_accept", candidate.observation,
                        fresh ? "accept" : "reject", false});
  return fresh;
}

int FrontierStateSelector::select(RunContext& ctx) {
  int chosen = -1;
  for (const auto& entry : ctx.archive.entries()) {
    ctx.env.restore(entry.snapshot);
    if (ctx.env.is_terminal()) continue;
    auto space = ctx.env.valid_actions();
    bool has_untried = std::any_of(space.actions.begin(), space.actions.end(),
                                   [&entry](const Action& a) { return !entry.tried_actions.count(a); });
    if (has_untried) {
      chosen = entry.entry_id;
      break;
    }
  }
  if (chosen < 0) chosen = ctx.archive.most_recent().entry_id;
  ctx.archive.note_selected(chosen);
  log_state(ctx, chosen);
  return chosen;
}

Action FirstUntriedActionSelector::select(const ArchiveEntry& root, const ActionSpace& space,
                                          RunContext& ctx) {
  if (space.actions.empty()) throw std::logic_error("action selection on an empty action space");
  Action action = first_untried(root, space, ctx.toggles.use_action_history);
  log_action(ctx, action);
  return action;
}

Action CallbackActionSelector::select(const ArchiveEntry& root, const ActionSpace& space,
                                      RunContext& ctx) {
  Action action = fn_(root, space, ctx);
  log_action(ctx, action);
  return action;
}

namespace {

/// Observations of every state along a fixed solving line, initial included.
struct SolutionLine {
  std::vector<std::string> observations;
  std::vector<Game24Action> actions;
};

SolutionLine solve_line(const std::vector<int>& task) {
  std::vector<int> state = task;
  std::sort(state.begin(), state.end());
  auto solution = Game24Env::solve_exhaustive(state);
  if (!solution) {
    throw std::invalid_argument("game24 solution backends: task " +
                                Game24Env::format_numbers(state) + " is unsolvable");
  }
  SolutionLine line;
  line.actions = *solution;
  line.observations.push_back(Game24Env::format_numbers(state));
  for (const auto& action : *solution) {
    state = Game24Env::reduce(state, action);
    line.observations.push_back(Game24Env::format_numbers(state));
  }
  return line;
}

class SolutionStateSelector final : public StateSelector {
public:
  explicit SolutionStateSelector(std::shared_ptr<SolutionLine> line) : line_(std::move(line)) {}

  int select(RunContext& ctx) override {
    // Deepest archived state along the solving line; initial entry otherwise.
    int best_id = ctx.archive.at_index(0).entry_id;
    std::size_t best_depth = 0;
    bool found = false;
    for (const auto& entry : ctx.archive.entries()) {
      for (std::size_t depth = 0; depth < line_->observations.size(); ++depth) {
        if (entry.observation == line_->observations[depth]) {
          if (!found || depth > best_depth) {
            best_id = entry.entry_id;
            best_depth = depth;
            found = true;
          }
          break;
        }
      }
    }
    ctx.archive.note_selected(best_id);
    log_state(ctx, best_id);
    return best_id;
  }

private:
  std::shared_ptr<SolutionLine> line_;
};

class SolutionActionSelector final : public ActionSelector {
public:
  explicit SolutionActionSelector(std::shared_ptr<SolutionLine> line) : line_(std::move(line)) {}

  Action select(const ArchiveEntry& root, const ActionSpace& space, RunContext& ctx) override {
    if (space.actions.empty()) throw std::logic_error("action selection on an empty action space");
    for (std::size_t depth = 0; depth + 1 < line_->observations.size(); ++depth) {
      if (root.observation != line_->observations[depth]) continue;
      const Game24Action& want = line_->actions[depth];
      for (const Action& rendered : space.actions) {
        auto parsed = Game24Action::parse(rendered);
        if (parsed && parsed->same_reduction(want)) {
          log_action(ctx, rendered);
          return rendered;
        }
      }
    }
    Action action = first_untried(root, space, ctx.toggles.use_action_history);
    log_action(ctx, action);
    return action;
  }

private:
  std::shared_ptr<SolutionLine> line_;
};

}  // namespace

SelectorBackends make_game24_solution_backends(const std::vector<int>& task) {
  auto line = std::make_shared<SolutionLine>(solve_line(task));
  SelectorBackends b;
  b.state = std::make_shared<SolutionStateSelector>(line);
  b.action = std::make_shared<SolutionActionSelector>(line);
  b.filter = std::make_shared<ScriptedDedupFilter>();
  return b;
}

SelectorBackends make_frontier_backends() {
  SelectorBackends b;
  b.state = std::make_shared<FrontierStateSelector>();
  b.action = std::make_shared<FirstUntriedActionSelector>();
  b.filter = std::make_shared<ScriptedDedupFilter>();
  return b;
}

}  // namespace ige::selectors
