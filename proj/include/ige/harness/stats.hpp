#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ige/events.hpp"

namespace ige::harness {

/// Percentile bootstrap interval for the mean of binary outcomes, returned in
/// percent. Deterministic in `seed`. Throws std::invalid_argument on empty
/// input, a non-positive resample count, or a level outside (0, 100).
std::pair<double, double> bootstrap_ci(const std::vector<bool>& flags, int resamples = 10000,
                                       double level = 95.0, std::uint64_t seed = 0);

struct Chi2Result {
  double statistic = 0.0;
  double p_value = 1.0;
  bool degenerate = false;  // an all-zero success or failure column; p fixed at 1
};

/// Pearson chi-squared test (1 degree of freedom, no continuity correction)
/// for two success counts. Throws std::invalid_argument on empty groups or
/// counts outside [0, n].
Chi2Result chi2_2x2(int successes_a, int n_a, int successes_b, int n_b);

struct CurvePoint {
  int operations = 0;
  double success_rate = 0.0;  // fraction in [0, 1]
};

/// Cumulative success curve: for every k in [0, max_operations], the fraction
/// of tasks whose solving operation is <= k. Monotone by construction.
std::vector<CurvePoint> build_curve(const std::vector<std::optional<int>>& solve_ops,
                                    int max_operations);

/// Operation index of the first success event in a log, if any.
std::optional<int> solve_operation(const EventLog& log);

}  // namespace ige::harness
