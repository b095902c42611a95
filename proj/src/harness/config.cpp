#include "ige/harness/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>

namespace ige::harness {

namespace {

void require_keys(const nlohmann::ordered_json& obj, const std::set<std::string>& known,
                  const char* where) {
  for (const auto& item : obj.items()) {
    if (!known.count(item.key()))
      throw std::invalid_argument(std::string("config: unknown key '") + item.key() + "' in " +
                                  where);
  }
}

}  // namespace

gateway::Mode gateway_mode_from_string(const std::string& name) {
  if (name == "live") return gateway::Mode::live;
  if (name == "record") return gateway::Mode::record;
  if (name == "replay") return gateway::Mode::replay;
  throw std::invalid_argument("config: unknown gateway mode '" + name + "'");
}

bool MethodSpec::needs_gateway() const {
  if (kind == "naive" || kind == "react" || kind == "reflexion") return true;
  return kind == "ige" && backend == "fm";
}

MethodSpec method_from_name(const std::string& name) {
  MethodSpec spec;
  spec.name = name;
  if (name == "ige") return spec;
  if (name == "ige_no_intelligent_action") {
    spec.toggles.intelligent_action = false;
    return spec;
  }
  if (name == "ige_no_intelligent_state") {
    spec.toggles.intelligent_state = false;
    return spec;
  }
  if (name == "ige_no_intelligent_filter") {
    spec.toggles.intelligent_filter = false;
    return spec;
  }
  if (name == "ige_no_all_three") {
    spec.toggles.intelligent_state = false;
    spec.toggles.intelligent_action = false;
    spec.toggles.intelligent_filter = false;
    return spec;
  }
  if (name == "ige_no_action_history") {
    spec.toggles.use_action_history = false;
    return spec;
  }
  if (name == "ige_rejection_filter") {
    spec.rejection_filter = true;
    return spec;
  }
  if (name == "classic_go_explore") {
    spec.backend = "classic";
    return spec;
  }
  if (name == "naive" || name == "react" || name == "reflexion" || name == "dfs" ||
      name == "bfs") {
    spec.kind = name;
    spec.backend.clear();
    return spec;
  }
  throw std::invalid_argument("config: unknown method '" + name + "'");
}

gateway::PromptingMode prompting_from_string(const std::string& name) {
  if (name == "zero_shot") return gateway::PromptingMode::zero_shot;
  if (name == "few_shot") return gateway::PromptingMode::few_shot;
  if (name == "chain_of_thought") return gateway::PromptingMode::chain_of_thought;
  throw std::invalid_argument("config: unknown prompting mode '" + name + "'");
}

ExperimentConfig config_from_json(const nlohmann::ordered_json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("config: document must be an object");
  require_keys(doc,
               {"environment", "env_options", "methods", "budget", "seeds", "gateway",
                "stats_seed", "workers", "out_dir"},
               "the top level");

  ExperimentConfig config;
  config.environment = doc.at("environment").get<std::string>();
  if (doc.contains("env_options")) {
    if (!doc["env_options"].is_object())
      throw std::invalid_argument("config: env_options must be an object");
    config.env_options = doc["env_options"];
  }

  if (!doc.contains("methods") || !doc["methods"].is_array() || doc["methods"].empty())
    throw std::invalid_argument("config: methods must be a non-empty array");
  for (const auto& entry : doc["methods"]) {
    if (entry.is_string()) {
      config.methods.push_back(method_from_name(entry.get<std::string>()));
      continue;
    }
    if (!entry.is_object() || !entry.contains("name"))
      throw std::invalid_argument("config: each method is a name or an object with one");
    require_keys(entry, {"name", "backend", "rejection_filter"}, "a method entry");
    MethodSpec spec = method_from_name(entry["name"].get<std::string>());
    if (entry.contains("backend")) {
      if (spec.kind != "ige")
        throw std::invalid_argument("config: backend applies only to exploration methods");
      spec.backend = entry["backend"].get<std::string>();
    }
    if (entry.contains("rejection_filter"))
      spec.rejection_filter = entry["rejection_filter"].get<bool>();
    config.methods.push_back(spec);
  }

  if (doc.contains("budget")) {
    const auto& budget = doc["budget"];
    require_keys(budget, {"n_state", "n_action"}, "budget");
    if (budget.contains("n_state")) config.n_state = budget["n_state"].get<int>();
    if (budget.contains("n_action")) config.n_action = budget["n_action"].get<int>();
  }

  if (!doc.contains("seeds") || !doc["seeds"].is_array() || doc["seeds"].empty())
    throw std::invalid_argument("config: seeds must be a non-empty array");
  for (const auto& seed : doc["seeds"]) config.seeds.push_back(seed.get<std::uint64_t>());

  if (doc.contains("gateway")) {
    const auto& gw = doc["gateway"];
    require_keys(gw,
                 {"mode", "transcript_dir", "model", "temperature", "max_new_tokens",
                  "prompting", "requests_per_minute", "history_cap"},
                 "gateway");
    if (gw.contains("mode")) config.gateway.mode = gateway_mode_from_string(gw["mode"].get<std::string>());
    if (gw.contains("transcript_dir"))
      config.gateway.transcript_dir = gw["transcript_dir"].get<std::string>();
    if (gw.contains("model")) config.gateway.model = gw["model"].get<std::string>();
    if (gw.contains("temperature")) config.gateway.temperature = gw["temperature"].get<double>();
    if (gw.contains("max_new_tokens"))
      config.gateway.max_new_tokens = gw["max_new_tokens"].get<int>();
    if (gw.contains("prompting")) {
      config.gateway.prompting = gw["prompting"].get<std::string>();
      prompting_from_string(config.gateway.prompting);  // reject unknown names early
    }
    if (gw.contains("requests_per_minute"))
      config.gateway.requests_per_minute = gw["requests_per_minute"].get<double>();
    if (gw.contains("history_cap"))
      config.gateway.history_cap = gw["history_cap"].get<std::size_t>();
  }

  if (doc.contains("stats_seed")) config.stats_seed = doc["stats_seed"].get<std::uint64_t>();
  if (doc.contains("workers")) config.workers = doc["workers"].get<int>();
  if (doc.contains("out_dir")) config.out_dir = doc["out_dir"].get<std::string>();
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& err) {
    throw std::invalid_argument("config: " + path + " is not valid JSON: " + err.what());
  }
  return config_from_json(doc);
}

std::string transcript_path(const ExperimentConfig& config, const MethodSpec& method,
                            std::uint64_t seed) {
  return (std::filesystem::path(config.gateway.transcript_dir) /
          (method.name + "_seed" + std::to_string(seed) + ".jsonl"))
      .string();
}

void validate_config(const ExperimentConfig& config) {
  static const std::set<std::string> known_envs{"game24", "gridworld", "textmaze"};
  static const std::set<std::string> known_backends{"fm", "frontier", "oracle", "random",
                                                    "classic"};
  if (!known_envs.count(config.environment))
    throw std::invalid_argument("config: unknown environment '" + config.environment + "'");
  if (config.methods.empty()) throw std::invalid_argument("config: no methods listed");
  if (config.seeds.empty()) throw std::invalid_argument("config: no seeds listed");
  if (config.n_state < 1 || config.n_action < 1)
    throw std::invalid_argument("config: budget components must be at least 1");
  if (config.workers < 1) throw std::invalid_argument("config: workers must be at least 1");

  std::set<std::string> names;
  bool any_gateway = false;
  for (const auto& method : config.methods) {
    if (!names.insert(method.name).second)
      throw std::invalid_argument("config: duplicate method '" + method.name + "'");
    if (method.kind == "ige" && !known_backends.count(method.backend))
      throw std::invalid_argument("config: unknown backend '" + method.backend + "' on '" +
                                  method.name + "'");
    any_gateway = any_gateway || method.needs_gateway();
  }

  if (config.environment == "gridworld" && !config.env_options.contains("family"))
    throw std::invalid_argument("config: gridworld runs need env_options.family");

  if (!any_gateway) return;
  if (config.gateway.transcript_dir.empty())
    throw std::invalid_argument("config: gateway-backed methods need a transcript_dir");
  if (config.gateway.mode != gateway::Mode::replay) return;
  for (const auto& method : config.methods) {
    if (!method.needs_gateway()) continue;
    for (const auto seed : config.seeds) {
      const auto path = transcript_path(config, method, seed);
      if (!std::filesystem::exists(path))
        throw std::invalid_argument("config: missing transcript " + path);
    }
  }
}

}  // namespace ige::harness
