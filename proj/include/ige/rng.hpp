#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace ige {

/// Deterministic random source. Wraps std::mt19937_64 (whose output sequence is
/// fixed by the standard) and derives all uniforms manually, so draws do not
/// depend on the standard library's distribution implementations.
class DetRng {
public:
  explicit DetRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, n).
  int uniform_int(int n) {
    if (n <= 0) throw std::invalid_argument("DetRng::uniform_int: n must be positive");
    return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n));
  }

  /// Uniform real in [0, 1).
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Index drawn proportionally to non-negative weights. At least one weight
  /// must be positive.
  int weighted_index(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) {
      if (w < 0.0) throw std::invalid_argument("DetRng::weighted_index: negative weight");
      total += w;
    }
    if (total <= 0.0) throw std::invalid_argument("DetRng::weighted_index: all weights zero");
    double x = uniform01() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      acc += weights[i];
      if (x < acc) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size() - 1);
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace ige
