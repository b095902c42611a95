// Experiment driver: runs seeded method-by-seed matrices over the bundled
// environments, aggregates logs into the standard statistics, records live
// transcripts, and verifies replay fixtures.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ige/harness/config.hpp"
#include "ige/harness/experiment.hpp"
#include "ige/harness/report.hpp"

namespace {

using namespace ige::harness;

struct Overrides {
  std::string config_path;
  std::string seeds;
  std::string methods;
  std::string env;
  std::string mode;
  std::string out_dir;
  int workers = 0;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

ExperimentConfig load_with_overrides(const Overrides& opts) {
  auto config = load_config(opts.config_path);
  if (!opts.env.empty()) config.environment = opts.env;
  if (!opts.seeds.empty()) {
    config.seeds.clear();
    for (const auto& token : split_list(opts.seeds)) config.seeds.push_back(std::stoull(token));
  }
  if (!opts.methods.empty()) {
    config.methods.clear();
    for (const auto& name : split_list(opts.methods))
      config.methods.push_back(method_from_name(name));
  }
  if (!opts.mode.empty()) config.gateway.mode = gateway_mode_from_string(opts.mode);
  if (!opts.out_dir.empty()) config.out_dir = opts.out_dir;
  if (opts.workers > 0) config.workers = opts.workers;
  return config;
}

void add_common_options(CLI::App& cmd, Overrides& opts) {
  cmd.add_option("--config", opts.config_path, "Experiment config file (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd.add_option("--seeds", opts.seeds, "Override seeds, comma separated");
  cmd.add_option("--method", opts.methods, "Override method list, comma separated");
  cmd.add_option("--env", opts.env, "Override environment id");
  cmd.add_option("--mode", opts.mode, "Override gateway mode (live|record|replay)");
  cmd.add_option("--out-dir", opts.out_dir, "Override artifact directory");
  cmd.add_option("--workers", opts.workers, "Override worker pool width");
}

void print_summary(const Report& report) {
  std::printf("%-28s %5s %10s %18s %10s\n", "method", "n", "success", "95% CI", "mean ops");
  for (const auto& row : report.methods) {
    char ci[32];
    std::snprintf(ci, sizeof ci, "[%.1f, %.1f]", row.ci_low, row.ci_high);
    std::printf("%-28s %5d %9.1f%% %18s %10.1f\n", row.method.c_str(), row.n, row.success_rate,
                ci, row.mean_operations);
  }
  for (const auto& pair : report.pairwise) {
    std::printf("chi2 %s vs %s: %.3f (p=%.4g%s)\n", pair.method_a.c_str(),
                pair.method_b.c_str(), pair.test.statistic, pair.test.p_value,
                pair.test.degenerate ? ", degenerate" : "");
  }
}

int report_cell_errors(const ExperimentResult& result) {
  int errors = 0;
  for (const auto& cell : result.cells) {
    if (cell.error.empty()) continue;
    ++errors;
    std::fprintf(stderr, "cell %s seed %llu failed: %s\n", cell.method.c_str(),
                 static_cast<unsigned long long>(cell.seed), cell.error.c_str());
  }
  return errors;
}

int run_matrix(const Overrides& opts, bool force_record) {
  auto config = load_with_overrides(opts);
  if (force_record) config.gateway.mode = ige::gateway::Mode::record;
  validate_config(config);
  const auto result = run_experiment(config);
  const auto report = build_report(config, result);
  if (!config.out_dir.empty()) write_report(config, result, report, config.out_dir);
  print_summary(report);
  report_cell_errors(result);
  if (!config.out_dir.empty()) std::printf("artifacts written to %s\n", config.out_dir.c_str());
  return 0;
}

int rebuild_report(const Overrides& opts) {
  auto config = load_with_overrides(opts);
  if (config.out_dir.empty())
    throw std::invalid_argument("report: an out_dir (config or --out-dir) is required");
  const auto rows_path = std::filesystem::path(config.out_dir) / "cells.jsonl";
  std::ifstream in(rows_path);
  if (!in) throw std::invalid_argument("report: cannot open " + rows_path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  ExperimentResult result;
  result.cells = cells_from_jsonl(buffer.str());
  const auto report = build_report(config, result);
  write_report(config, result, report, config.out_dir);
  print_summary(report);
  return 0;
}

struct Check {
  std::string name;
  bool ok;
  std::string detail;
};

int verify_matrix(const Overrides& opts) {
  auto config = load_with_overrides(opts);
  config.out_dir.clear();  // verification writes nothing
  std::vector<Check> checks;

  try {
    validate_config(config);
    checks.push_back({"config valid", true, ""});
  } catch (const std::exception& err) {
    checks.push_back({"config valid", false, err.what()});
  }

  if (checks.back().ok) {
    const auto first = run_experiment(config);
    const auto second = run_experiment(config);

    std::string detail;
    for (const auto& cell : first.cells) {
      if (cell.error.empty()) continue;
      detail = cell.method + " seed " + std::to_string(cell.seed) + ": " + cell.error;
      break;
    }
    checks.push_back({"all cells ran", detail.empty(), detail});

    bool deterministic = first.cells.size() == second.cells.size();
    detail.clear();
    for (std::size_t i = 0; deterministic && i < first.cells.size(); ++i) {
      const auto& a = first.cells[i];
      const auto& b = second.cells[i];
      deterministic = a.success == b.success && a.operations == b.operations &&
                      a.solve_operation == b.solve_operation &&
                      ige::to_jsonl(a.events) == ige::to_jsonl(b.events);
      if (!deterministic) detail = a.method + " seed " + std::to_string(a.seed);
    }
    checks.push_back({"repeat run identical", deterministic, detail});

    const int max_ops = config.n_state * config.n_action;
    bool budget_ok = true;
    bool solve_ok = true;
    detail.clear();
    std::string solve_detail;
    for (const auto& cell : first.cells) {
      if (cell.operations > max_ops) {
        budget_ok = false;
        detail = cell.method + " seed " + std::to_string(cell.seed) + " used " +
                 std::to_string(cell.operations);
      }
      const bool has_solve = cell.solve_operation.has_value();
      if (cell.error.empty() &&
          (has_solve != cell.success ||
           (has_solve && (*cell.solve_operation < 0 || *cell.solve_operation > cell.operations)))) {
        solve_ok = false;
        solve_detail = cell.method + " seed " + std::to_string(cell.seed);
      }
    }
    checks.push_back({"operation budgets respected", budget_ok, detail});
    checks.push_back({"solve operations consistent", solve_ok, solve_detail});

    const auto report = build_report(config, first);
    bool stats_ok = true;
    detail.clear();
    for (const auto& row : report.methods) {
      if (row.ci_low < 0.0 || row.ci_high > 100.0 || row.ci_low > row.ci_high) {
        stats_ok = false;
        detail = row.method + " CI";
      }
    }
    for (const auto& [name, curve] : report.curves) {
      for (std::size_t k = 1; k < curve.size(); ++k) {
        if (curve[k].success_rate < curve[k - 1].success_rate ||
            curve[k].operations != curve[k - 1].operations + 1) {
          stats_ok = false;
          detail = name + " curve";
        }
      }
    }
    checks.push_back({"stats well formed", stats_ok, detail});
  }

  bool all_ok = true;
  for (const auto& check : checks) {
    all_ok = all_ok && check.ok;
    if (check.ok) {
      std::printf("ok: %s\n", check.name.c_str());
    } else {
      std::printf("FAIL: %s%s%s\n", check.name.c_str(), check.detail.empty() ? "" : " - ",
                  check.detail.c_str());
    }
  }
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exploration experiment harness"};
  app.require_subcommand(1);

  Overrides run_opts, report_opts, record_opts, verify_opts;
  auto* run_cmd = app.add_subcommand("run", "Execute a config's method-by-seed matrix");
  add_common_options(*run_cmd, run_opts);
  auto* report_cmd = app.add_subcommand("report", "Re-aggregate a finished run's logs");
  add_common_options(*report_cmd, report_opts);
  auto* record_cmd = app.add_subcommand("record", "Run live against the API, saving transcripts");
  add_common_options(*record_cmd, record_opts);
  auto* verify_cmd = app.add_subcommand("verify", "Replay fixtures and check run invariants");
  add_common_options(*verify_cmd, verify_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return run_matrix(run_opts, false);
    if (report_cmd->parsed()) return rebuild_report(report_opts);
    if (record_cmd->parsed()) return run_matrix(record_opts, true);
    if (verify_cmd->parsed()) return verify_matrix(verify_opts);
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 2;
  }
  return 0;
}
