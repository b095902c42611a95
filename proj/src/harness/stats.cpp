#include "ige/harness/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "ige/rng.hpp"

namespace ige::harness {

namespace {

// Linear interpolation between order statistics (the common "type 7" rule).
double quantile_sorted(const std::vector<double>& sorted, double q) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = q * static_cast<double>(n - 1);
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= n) return sorted[n - 1];
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

std::pair<double, double> bootstrap_ci(const std::vector<bool>& flags, int resamples,
                                       double level, std::uint64_t seed) {
  if (flags.empty()) throw std::invalid_argument("bootstrap_ci: empty sample");
  if (resamples <= 0) throw std::invalid_argument("bootstrap_ci: resamples must be positive");
  if (level <= 0.0 || level >= 100.0)
    throw std::invalid_argument("bootstrap_ci: level must sit in (0, 100)");

  const std::size_t n = flags.size();
  DetRng rng(seed);
  std::vector<double> means(static_cast<std::size_t>(resamples));
  for (auto& mean : means) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (flags[rng.uniform_int(n)]) ++hits;
    }
    mean = static_cast<double>(hits) / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());

  const double alpha = (100.0 - level) / 100.0;
  const double lo = quantile_sorted(means, alpha / 2.0);
  const double hi = quantile_sorted(means, 1.0 - alpha / 2.0);
  return {lo * 100.0, hi * 100.0};
}

Chi2Result chi2_2x2(int successes_a, int n_a, int successes_b, int n_b) {
  if (n_a <= 0 || n_b <= 0) throw std::invalid_argument("chi2_2x2: empty group");
  if (successes_a < 0 || successes_a > n_a || successes_b < 0 || successes_b > n_b)
    throw std::invalid_argument("chi2_2x2: success count outside [0, n]");

  const double a = successes_a;
  const double b = n_a - successes_a;
  const double c = successes_b;
  const double d = n_b - successes_b;
  const double n = a + b + c + d;

  Chi2Result out;
  const double col_success = a + c;
  const double col_failure = b + d;
  if (col_success == 0.0 || col_failure == 0.0) {
    out.degenerate = true;
    return out;  // identical marginal outcomes carry no evidence either way
  }
  const double diff = a * d - b * c;
  out.statistic = n * diff * diff / ((a + b) * (c + d) * col_success * col_failure);
  // Survival function of chi-squared with one degree of freedom.
  out.p_value = std::erfc(std::sqrt(out.statistic / 2.0));
  return out;
}

std::vector<CurvePoint> build_curve(const std::vector<std::optional<int>>& solve_ops,
                                    int max_operations) {
  if (max_operations < 0) throw std::invalid_argument("build_curve: negative operation cap");
  if (solve_ops.empty()) throw std::invalid_argument("build_curve: empty task list");

  std::vector<CurvePoint> curve;
  curve.reserve(static_cast<std::size_t>(max_operations) + 1);
  const double total = static_cast<double>(solve_ops.size());
  for (int k = 0; k <= max_operations; ++k) {
    int solved = 0;
    for (const auto& op : solve_ops) {
      if (op.has_value() && *op <= k) ++solved;
    }
    curve.push_back({k, static_cast<double>(solved) / total});
  }
  return curve;
}

std::optional<int> solve_operation(const EventLog& log) {
  for (const auto& event : log) {
    if (event.stage == "success") return event.step;
  }
  return std::nullopt;
}

}  // namespace ige::harness
