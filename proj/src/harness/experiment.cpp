#include "ige/harness/experiment.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "ige/baselines/baselines.hpp"
#include "ige/envs/game24.hpp"
#include "ige/envs/gridworld.hpp"
#include "ige/envs/textmaze.hpp"
#include "ige/harness/stats.hpp"
#include "ige/run.hpp"
#include "ige/selectors/backends.hpp"
#include "ige/selectors/scripted.hpp"

namespace ige::harness {

namespace {

using selectors::AcceptAllFilter;
using selectors::ClassicStateSelector;
using selectors::RandomActionSelector;
using selectors::RandomStateSelector;
using selectors::ScriptedDedupFilter;

using Plan = std::vector<Action>;

bool on_plan(const ArchiveEntry& entry, const Plan& plan) {
  if (entry.trajectory.size() > plan.size()) return false;
  return std::equal(entry.trajectory.begin(), entry.trajectory.end(), plan.begin());
}

/// Deepest archive entry lying on a precomputed solving line.
class PlanStateSelector final : public StateSelector {
public:
  explicit PlanStateSelector(std::shared_ptr<const Plan> plan) : plan_(std::move(plan)) {}

  int select(RunContext& ctx) override {
    int best = ctx.archive.most_recent().entry_id;
    std::size_t best_depth = 0;
    bool found = false;
    for (const auto& entry : ctx.archive.entries()) {
      if (!on_plan(entry, *plan_)) continue;
      if (!found || entry.trajectory.size() > best_depth) {
        best = entry.entry_id;
        best_depth = entry.trajectory.size();
        found = true;
      }
    }
    ctx.archive.note_selected(best);
    ctx.events.push_back({ctx.steps_used, "state_select", std::to_string(best), "", false});
    return best;
  }

private:
  std::shared_ptr<const Plan> plan_;
};

/// Next solving step from an on-line root; first valid action otherwise.
class PlanActionSelector final : public ActionSelector {
public:
  explicit PlanActionSelector(std::shared_ptr<const Plan> plan) : plan_(std::move(plan)) {}

  Action select(const ArchiveEntry& root, const ActionSpace& space, RunContext& ctx) override {
    Action action;
    if (on_plan(root, *plan_) && root.trajectory.size() < plan_->size()) {
      action = (*plan_)[root.trajectory.size()];
    } else if (!space.actions.empty()) {
      action = space.actions.front();
    } else {
      action = ctx.env.fallback_action();
    }
    ctx.events.push_back({ctx.steps_used, "action_select", action, "", false});
    return action;
  }

private:
  std::shared_ptr<const Plan> plan_;
};

SelectorBackends plan_backends(Plan plan) {
  auto shared = std::make_shared<const Plan>(std::move(plan));
  SelectorBackends backends;
  backends.state = std::make_shared<PlanStateSelector>(shared);
  backends.action = std::make_shared<PlanActionSelector>(shared);
  backends.filter = std::make_shared<ScriptedDedupFilter>();
  return backends;
}

SelectorBackends oracle_backends(Environment& env) {
  if (auto* g24 = dynamic_cast<envs::Game24Env*>(&env))
    return selectors::make_game24_solution_backends(g24->numbers());
  if (auto* grid = dynamic_cast<envs::GridworldEnv*>(&env)) {
    auto plan = envs::scripted_grid_solution(*grid);
    if (!plan) throw std::runtime_error("oracle backend: gridworld instance has no solution");
    return plan_backends(std::move(*plan));
  }
  if (auto* maze = dynamic_cast<envs::TextMazeEnv*>(&env)) {
    auto path = envs::shortest_path(maze->graph(), maze->graph().start_room,
                                    maze->graph().coin_room);
    Plan plan = path.moves;
    plan.push_back("take coin");
    return plan_backends(std::move(plan));
  }
  throw std::runtime_error("oracle backend: no solver for environment " + env.name());
}

gateway::ModelParams resolve_model_params(const ExperimentConfig& config,
                                          const Environment& env) {
  auto params = gateway::default_model_params(env.name());
  if (!config.gateway.model.empty()) params.model = config.gateway.model;
  if (config.gateway.temperature >= 0.0) params.temperature = config.gateway.temperature;
  params.max_new_tokens = config.gateway.max_new_tokens;
  return params;
}

gateway::Gateway open_gateway(const ExperimentConfig& config, const MethodSpec& method,
                              std::uint64_t seed, const Environment& env) {
  const auto params = resolve_model_params(config, env);
  const auto path = transcript_path(config, method, seed);
  switch (config.gateway.mode) {
    case gateway::Mode::live:
      return gateway::Gateway::make_live(params);
    case gateway::Mode::record: {
      std::filesystem::create_directories(config.gateway.transcript_dir);
      return gateway::Gateway::make_record(params, path);
    }
    case gateway::Mode::replay:
      return gateway::Gateway::make_replay(path);
  }
  throw std::logic_error("open_gateway: unreachable");
}

}  // namespace

std::unique_ptr<Environment> make_environment(const ExperimentConfig& config,
                                              std::uint64_t seed) {
  if (config.environment == "game24") {
    std::vector<int> numbers;
    if (config.env_options.contains("numbers")) {
      numbers = config.env_options["numbers"].get<std::vector<int>>();
    } else {
      const auto task = envs::Game24Env::generate_solvable_tasks(1, seed).front();
      numbers.assign(task.begin(), task.end());
    }
    return std::make_unique<envs::Game24Env>(numbers);
  }
  if (config.environment == "gridworld") {
    const auto family =
        envs::family_from_name(config.env_options.at("family").get<std::string>());
    return std::make_unique<envs::GridworldEnv>(seed, family);
  }
  if (config.environment == "textmaze") {
    envs::MazeConfig maze;
    const auto& opts = config.env_options;
    if (opts.contains("n_rooms")) maze.n_rooms = opts["n_rooms"].get<int>();
    if (opts.contains("optimal_len")) maze.optimal_len = opts["optimal_len"].get<int>();
    if (opts.contains("horizon")) maze.horizon = opts["horizon"].get<int>();
    if (opts.contains("distractor_branching"))
      maze.distractor_branching = opts["distractor_branching"].get<double>();
    return std::make_unique<envs::TextMazeEnv>(seed, maze);
  }
  throw std::invalid_argument("make_environment: unknown environment " + config.environment);
}

SelectorBackends build_backends(const MethodSpec& method,
                                const std::shared_ptr<selectors::FmSession>& session,
                                Environment& env) {
  if (method.kind != "ige")
    throw std::logic_error("build_backends: method " + method.name + " is not an exploration run");

  if (method.backend == "classic") {
    // Count-based Go-Explore: curiosity state weighting, random actions, no
    // filtering. The ablation mask does not apply.
    SelectorBackends backends;
    backends.state = std::make_shared<ClassicStateSelector>();
    backends.action = std::make_shared<RandomActionSelector>();
    backends.filter = std::make_shared<AcceptAllFilter>();
    return backends;
  }

  SelectorBackends backends;
  if (method.backend == "fm") {
    if (!session) throw std::logic_error("build_backends: fm backend without a session");
    backends = selectors::make_fm_backends(session, method.rejection_filter);
  } else if (method.backend == "frontier") {
    backends = selectors::make_frontier_backends();
  } else if (method.backend == "oracle") {
    backends = oracle_backends(env);
  } else if (method.backend == "random") {
    backends = selectors::make_random_backends();
  } else {
    throw std::invalid_argument("build_backends: unknown backend " + method.backend);
  }

  // Disabled intelligent slots drop to their unguided stand-ins, whatever the
  // backend family.
  if (!method.toggles.intelligent_state) backends.state = std::make_shared<RandomStateSelector>();
  if (!method.toggles.intelligent_action)
    backends.action = std::make_shared<RandomActionSelector>();
  if (!method.toggles.intelligent_filter) backends.filter = std::make_shared<AcceptAllFilter>();
  return backends;
}

CellResult run_cell(const ExperimentConfig& config, const MethodSpec& method,
                    std::uint64_t seed) {
  CellResult cell;
  cell.method = method.name;
  cell.seed = seed;
  try {
    auto env = make_environment(config, seed);
    const RunBudget budget{config.n_state, config.n_action, env->horizon()};

    std::optional<gateway::Gateway> gw;
    if (method.needs_gateway()) gw.emplace(open_gateway(config, method, seed, *env));

    if (method.kind == "ige") {
      std::shared_ptr<selectors::FmSession> session;
      if (method.backend == "fm") {
        session = std::make_shared<selectors::FmSession>(
            &*gw, env->description(true), prompting_from_string(config.gateway.prompting),
            config.gateway.history_cap);
      }
      auto backends = build_backends(method, session, *env);
      auto result = run_ige(*env, backends, budget, method.toggles, seed);
      cell.success = result.success;
      cell.operations = result.env_steps_used;
      cell.solve_operation = solve_operation(result.event_log);
      cell.fallbacks = count_fallbacks(result.event_log);
      cell.archive_size = result.final_archive.size();
      cell.events = std::move(result.event_log);
    } else if (method.kind == "dfs" || method.kind == "bfs") {
      const auto strategy = method.kind == "dfs" ? baselines::SearchStrategy::dfs
                                                 : baselines::SearchStrategy::bfs;
      auto result = baselines::graph_search(*env, strategy, budget.max_operations());
      cell.success = result.success;
      cell.operations = result.env_steps_used;
      cell.solve_operation = solve_operation(result.event_log);
      cell.archive_size = result.final_archive.size();
      cell.events = std::move(result.event_log);
    } else {
      DetRng rng(seed);
      baselines::BaselineResult result;
      if (method.kind == "naive") {
        result = baselines::run_naive(*env, *gw, budget.max_operations(), rng);
      } else if (method.kind == "react") {
        result = baselines::run_react(*env, *gw, budget.max_operations(), rng);
      } else if (method.kind == "reflexion") {
        result = baselines::run_reflexion(*env, *gw, budget.max_operations(), rng);
      } else {
        throw std::invalid_argument("run_cell: unknown method kind " + method.kind);
      }
      cell.success = result.success;
      cell.operations = result.operations_used;
      cell.solve_operation = result.solve_operation;
      cell.fallbacks = result.fallbacks;
      cell.events = std::move(result.events);
    }

    if (gw) {
      cell.exchanges = gw->exchange_count();
      gw->finish();
    }
  } catch (const std::exception& err) {
    cell.error = err.what();
  }
  return cell;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate_config(config);
  if (config.gateway.requests_per_minute > 0.0)
    gateway::RateLimiter::instance().set_requests_per_minute(config.gateway.requests_per_minute);

  const std::size_t n_seeds = config.seeds.size();
  const std::size_t jobs = config.methods.size() * n_seeds;
  ExperimentResult result;
  result.cells.resize(jobs);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs) return;
      const auto& method = config.methods[i / n_seeds];
      const auto seed = config.seeds[i % n_seeds];
      result.cells[i] = run_cell(config, method, seed);
    }
  };

  const auto n_workers = std::min<std::size_t>(static_cast<std::size_t>(config.workers), jobs);
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (std::size_t i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  if (!config.out_dir.empty()) {
    const auto events_dir = std::filesystem::path(config.out_dir) / "events";
    std::filesystem::create_directories(events_dir);
    for (const auto& cell : result.cells) {
      std::ofstream out(events_dir /
                        (cell.method + "_seed" + std::to_string(cell.seed) + ".jsonl"));
      out << to_jsonl(cell.events);
    }
    std::ofstream rows(std::filesystem::path(config.out_dir) / "cells.jsonl");
    rows << cells_to_jsonl(result.cells);
  }
  return result;
}

std::string cells_to_jsonl(const std::vector<CellResult>& cells) {
  std::string out;
  for (const auto& cell : cells) {
    nlohmann::ordered_json row;
    row["method"] = cell.method;
    row["seed"] = cell.seed;
    row["success"] = cell.success;
    row["operations"] = cell.operations;
    if (cell.solve_operation) {
      row["solve_operation"] = *cell.solve_operation;
    } else {
      row["solve_operation"] = nullptr;
    }
    row["fallbacks"] = cell.fallbacks;
    row["archive_size"] = cell.archive_size;
    row["exchanges"] = cell.exchanges;
    row["error"] = cell.error;
    out += row.dump();
    out += '\n';
  }
  return out;
}

std::vector<CellResult> cells_from_jsonl(const std::string& text) {
  std::vector<CellResult> cells;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    const auto line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty()) continue;
    const auto row = nlohmann::ordered_json::parse(line);
    CellResult cell;
    cell.method = row.at("method").get<std::string>();
    cell.seed = row.at("seed").get<std::uint64_t>();
    cell.success = row.at("success").get<bool>();
    cell.operations = row.at("operations").get<int>();
    if (!row.at("solve_operation").is_null())
      cell.solve_operation = row["solve_operation"].get<int>();
    cell.fallbacks = row.at("fallbacks").get<int>();
    cell.archive_size = row.at("archive_size").get<std::size_t>();
    cell.exchanges = row.at("exchanges").get<int>();
    cell.error = row.at("error").get<std::string>();
    cells.push_back(std::move(cell));
  }
  return cells;
}

}  // namespace ige::harness
