#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "ige/gateway/gateway.hpp"
#include "ige/gateway/messages.hpp"
#include "ige/run.hpp"
#include "ige/selectors/interfaces.hpp"

namespace ige::harness {

/// One named method row: either an exploration run (kind "ige") or a baseline.
/// IGE rows carry an ablation mask plus a backend family for the intelligent
/// slots; baselines ignore both.
struct MethodSpec {
  std::string name;            // row label, reused in artifact filenames
  std::string kind = "ige";    // ige | naive | react | reflexion | dfs | bfs
  std::string backend = "fm";  // ige only: fm | frontier | oracle | random | classic
  AblationToggles toggles;
  bool rejection_filter = false;  // fm filter proposes removals instead of gating

  bool needs_gateway() const;
};

/// Canonical method table. Recognized names: ige, ige_no_intelligent_action,
/// ige_no_intelligent_state, ige_no_intelligent_filter, ige_no_all_three,
/// ige_no_action_history, ige_rejection_filter, classic_go_explore, naive,
/// react, reflexion, dfs, bfs. Throws std::invalid_argument otherwise.
MethodSpec method_from_name(const std::string& name);

struct GatewaySettings {
  gateway::Mode mode = gateway::Mode::replay;
  std::string transcript_dir;       // one transcript file per gateway-backed cell
  std::string model;                // empty keeps the per-environment default
  double temperature = -1.0;        // negative keeps the per-environment default
  int max_new_tokens = 1000;
  std::string prompting = "zero_shot";  // zero_shot | few_shot | chain_of_thought
  double requests_per_minute = 0.0;     // 0 disables throttling
  std::size_t history_cap = 8;
};

struct ExperimentConfig {
  std::string environment;    // game24 | gridworld | textmaze
  nlohmann::ordered_json env_options = nlohmann::ordered_json::object();
  std::vector<MethodSpec> methods;
  int n_state = 1;
  int n_action = 1;
  std::vector<std::uint64_t> seeds;
  GatewaySettings gateway;
  std::uint64_t stats_seed = 0;
  int workers = 1;
  std::string out_dir;
};

gateway::PromptingMode prompting_from_string(const std::string& name);
gateway::Mode gateway_mode_from_string(const std::string& name);

/// Parses a config document. Methods may be given as bare names or as objects
/// ({"name": ..., "backend": ...}) overriding table defaults.
ExperimentConfig config_from_json(const nlohmann::ordered_json& doc);
ExperimentConfig load_config(const std::string& path);

/// Transcript file backing one (method, seed) cell.
std::string transcript_path(const ExperimentConfig& config, const MethodSpec& method,
                            std::uint64_t seed);

/// Structural checks: known environment, at least one method and seed,
/// positive budget, and, in replay mode, a present transcript for every cell
/// that needs the gateway. Throws std::invalid_argument on the first problem.
void validate_config(const ExperimentConfig& config);

}  // namespace ige::harness
