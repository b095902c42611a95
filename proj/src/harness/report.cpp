#include "ige/harness/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

#include "ige/fnv.hpp"

namespace ige::harness {

namespace {

constexpr int kResamples = 10000;
constexpr double kLevel = 95.0;

std::string fmt(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", value);
  return buf;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (const char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_report: cannot open " + path.string());
  return out;
}

}  // namespace

Report build_report(const ExperimentConfig& config, const ExperimentResult& result) {
  const std::size_t n_seeds = config.seeds.size();
  if (result.cells.size() != config.methods.size() * n_seeds)
    throw std::invalid_argument("build_report: cell count does not match the config grid");

  Report report;
  const int max_ops = config.n_state * config.n_action;

  for (std::size_t m = 0; m < config.methods.size(); ++m) {
    const auto& method = config.methods[m];
    MethodSummary row;
    row.method = method.name;
    row.n = static_cast<int>(n_seeds);

    std::vector<bool> flags;
    std::vector<std::optional<int>> solve_ops;
    long long ops_total = 0;
    std::size_t archive_total = 0;
    for (std::size_t s = 0; s < n_seeds; ++s) {
      const auto& cell = result.cells[m * n_seeds + s];
      if (cell.method != method.name)
        throw std::invalid_argument("build_report: cells are not in config order");
      flags.push_back(cell.success);
      solve_ops.push_back(cell.solve_operation);
      if (cell.success) ++row.successes;
      if (!cell.error.empty()) ++row.errors;
      ops_total += cell.operations;
      archive_total += cell.archive_size;
      row.total_fallbacks += cell.fallbacks;
    }
    row.success_rate = 100.0 * row.successes / row.n;
    const auto ci =
        bootstrap_ci(flags, kResamples, kLevel, config.stats_seed ^ fnv1a(method.name));
    row.ci_low = ci.first;
    row.ci_high = ci.second;
    row.mean_operations = static_cast<double>(ops_total) / row.n;
    row.mean_archive_size = static_cast<double>(archive_total) / row.n;
    report.methods.push_back(row);
    report.curves.emplace_back(method.name, build_curve(solve_ops, max_ops));
  }

  for (std::size_t i = 0; i < report.methods.size(); ++i) {
    for (std::size_t j = i + 1; j < report.methods.size(); ++j) {
      const auto& a = report.methods[i];
      const auto& b = report.methods[j];
      report.pairwise.push_back(
          {a.method, b.method, chi2_2x2(a.successes, a.n, b.successes, b.n)});
    }
  }
  return report;
}

void write_report(const ExperimentConfig& config, const ExperimentResult& result,
                  const Report& report, const std::string& out_dir) {
  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);

  {
    auto out = open_out(dir / "cells.csv");
    out << "method,seed,success,operations,solve_operation,fallbacks,archive_size,exchanges,"
           "error\n";
    for (const auto& cell : result.cells) {
      out << csv_field(cell.method) << ',' << cell.seed << ',' << (cell.success ? 1 : 0) << ','
          << cell.operations << ','
          << (cell.solve_operation ? std::to_string(*cell.solve_operation) : std::string())
          << ',' << cell.fallbacks << ',' << cell.archive_size << ',' << cell.exchanges << ','
          << csv_field(cell.error) << '\n';
    }
  }

  {
    auto out = open_out(dir / "summary.csv");
    out << "method,n,successes,errors,success_rate,ci_low,ci_high,mean_operations,"
           "total_fallbacks,mean_archive_size\n";
    for (const auto& row : report.methods) {
      out << csv_field(row.method) << ',' << row.n << ',' << row.successes << ',' << row.errors
          << ',' << fmt(row.success_rate) << ',' << fmt(row.ci_low) << ',' << fmt(row.ci_high)
          << ',' << fmt(row.mean_operations) << ',' << row.total_fallbacks << ','
          << fmt(row.mean_archive_size) << '\n';
    }
  }

  {
    auto out = open_out(dir / "pairwise.csv");
    out << "method_a,method_b,chi2,p_value,degenerate\n";
    for (const auto& pair : report.pairwise) {
      char pbuf[32];
      std::snprintf(pbuf, sizeof pbuf, "%.6e", pair.test.p_value);
      out << csv_field(pair.method_a) << ',' << csv_field(pair.method_b) << ','
          << fmt(pair.test.statistic) << ',' << pbuf << ',' << (pair.test.degenerate ? 1 : 0)
          << '\n';
    }
  }

  for (const auto& [name, curve] : report.curves) {
    auto out = open_out(dir / ("curve_" + name + ".csv"));
    out << "operations,success_rate\n";
    for (const auto& point : curve)
      out << point.operations << ',' << fmt(point.success_rate) << '\n';
  }

  nlohmann::ordered_json doc;
  doc["environment"] = config.environment;
  doc["budget"] = {{"n_state", config.n_state}, {"n_action", config.n_action}};
  doc["seeds"] = config.seeds;
  doc["stats"] = {{"bootstrap", {{"kind", "percentile"},
                                 {"resamples", kResamples},
                                 {"level", kLevel},
                                 {"seed", config.stats_seed}}},
                  {"pairwise_test", "pearson chi-squared, 1 dof, no continuity correction"}};
  auto methods = nlohmann::ordered_json::array();
  for (const auto& row : report.methods) {
    methods.push_back({{"method", row.method},
                       {"n", row.n},
                       {"successes", row.successes},
                       {"errors", row.errors},
                       {"success_rate", row.success_rate},
                       {"ci_low", row.ci_low},
                       {"ci_high", row.ci_high},
                       {"mean_operations", row.mean_operations},
                       {"total_fallbacks", row.total_fallbacks},
                       {"mean_archive_size", row.mean_archive_size}});
  }
  doc["methods"] = methods;
  auto pairs = nlohmann::ordered_json::array();
  for (const auto& pair : report.pairwise) {
    pairs.push_back({{"method_a", pair.method_a},
                     {"method_b", pair.method_b},
                     {"chi2", pair.test.statistic},
                     {"p_value", pair.test.p_value},
                     {"degenerate", pair.test.degenerate}});
  }
  doc["pairwise"] = pairs;
  auto out = open_out(dir / "summary.json");
  out << doc.dump(2) << '\n';
}

}  // namespace ige::harness
