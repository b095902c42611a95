#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ige/environment.hpp"
#include "ige/events.hpp"
#include "ige/harness/config.hpp"
#include "ige/selectors/interfaces.hpp"

namespace ige::selectors {
struct FmSession;
}

namespace ige::harness {

/// Outcome of one (method, seed) cell. A non-empty `error` marks a cell that
/// threw; it still occupies its slot so downstream stats see a failure rather
/// than a hole.
struct CellResult {
  std::string method;
  std::uint64_t seed = 0;
  bool success = false;
  int operations = 0;
  std::optional<int> solve_operation;
  int fallbacks = 0;
  std::size_t archive_size = 0;
  int exchanges = 0;
  std::string error;
  EventLog events;
};

struct ExperimentResult {
  std::vector<CellResult> cells;  // method-major, seed-minor, config order
};

/// Task instance for one seed of the configured environment.
std::unique_ptr<Environment> make_environment(const ExperimentConfig& config,
                                              std::uint64_t seed);

/// Selector stack for one exploration cell. `session` is required for the fm
/// backend and ignored otherwise; scripted backends may consult `env`.
SelectorBackends build_backends(const MethodSpec& method,
                                const std::shared_ptr<selectors::FmSession>& session,
                                Environment& env);

/// Runs a single cell. Exceptions are captured into CellResult::error.
CellResult run_cell(const ExperimentConfig& config, const MethodSpec& method,
                    std::uint64_t seed);

/// Runs every (method, seed) cell over a small worker pool and, when out_dir
/// is set, drops one event-log file per cell under <out_dir>/events/ plus a
/// cells.jsonl row file the report verb can re-aggregate.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// One JSON object per line, events omitted (those live in their own files).
std::string cells_to_jsonl(const std::vector<CellResult>& cells);
std::vector<CellResult> cells_from_jsonl(const std::string& text);

}  // namespace ige::harness
