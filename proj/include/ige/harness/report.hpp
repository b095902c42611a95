#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ige/harness/config.hpp"
#include "ige/harness/experiment.hpp"
#include "ige/harness/stats.hpp"

namespace ige::harness {

struct MethodSummary {
  std::string method;
  int n = 0;
  int successes = 0;
  int errors = 0;             // cells that threw; scored as failures
  double success_rate = 0.0;  // percent
  double ci_low = 0.0;        // percentile bootstrap bounds, percent
  double ci_high = 0.0;
  double mean_operations = 0.0;
  int total_fallbacks = 0;
  double mean_archive_size = 0.0;
};

struct PairwiseTest {
  std::string method_a;
  std::string method_b;
  Chi2Result test;
};

struct Report {
  std::vector<MethodSummary> methods;                             // config order
  std::vector<PairwiseTest> pairwise;                             // all pairs, config order
  std::vector<std::pair<std::string, std::vector<CurvePoint>>> curves;
};

/// Aggregates cell results per method: rates with bootstrap intervals, all
/// pairwise chi-squared tests, and success-versus-operations curves over the
/// full operation budget.
Report build_report(const ExperimentConfig& config, const ExperimentResult& result);

/// Writes cells.csv, summary.csv, pairwise.csv, one curve_<method>.csv per
/// method, and summary.json under `out_dir`. Output is byte-deterministic for
/// identical inputs.
void write_report(const ExperimentConfig& config, const ExperimentResult& result,
                  const Report& report, const std::string& out_dir);

}  // namespace ige::harness
