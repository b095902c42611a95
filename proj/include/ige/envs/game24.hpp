#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ige/environment.hpp"

namespace ige::envs {

/// One arithmetic reduction: combine `lhs` and `rhs` with `op` into `result`.
/// Operand order is kept as rendered; identity for validity and deduplication
/// treats the operand pair as a multiset.
struct Game24Action {
  int lhs = 0;
  int rhs = 0;
  char op = '+';
  int result = 0;

  std::string equation() const;  // "13 - 10 = 3"

  /// Parse "a op b = r", with or without a trailing ". Next: (...)" clause.
  static std::optional<Game24Action> parse(const std::string& text);

  bool same_reduction(const Game24Action& other) const;
};

/// The 24 game as a short-horizon decision process. A state is the multiset of
/// remaining numbers; each action combines two of them with +, -, * or /.
/// Subtraction always takes the smaller from the larger and division is only
/// offered when it is exact, so every reachable number is a non-negative
/// integer. Success means exactly one number remains and it is 24.
class Game24Env final : public Environment {
public:
  explicit Game24Env(std::vector<int> start);

  static std::string format_numbers(const std::vector<int>& numbers);

  /// All distinct reductions of `numbers` (operand multiset, operator, result
  /// collapsed). At most C(k,2) * 4 for k numbers.
  static std::vector<Game24Action> enumerate(const std::vector<int>& numbers);

  /// Apply a reduction to a number multiset. Throws std::invalid_argument when
  /// the action is not one of enumerate(numbers).
  static std::vector<int> reduce(const std::vector<int>& numbers, const Game24Action& action);

  /// Depth-first proof search over reduction sequences. Returns the first
  /// solving trajectory in enumeration order, or nullopt when unsolvable.
  static std::optional<std::vector<Game24Action>> solve_exhaustive(const std::vector<int>& start);

  /// Rebuild the fully parenthesized infix expression for a solved trajectory,
  /// e.g. "(6 - 4) * (4 + 8) = 24". Operands are combined in the order stored
  /// in each action. Throws std::invalid_argument if the trajectory does not
  /// end at exactly 24.
  static std::string solution_expression(const std::vector<int>& start,
                                         const std::vector<Game24Action>& trajectory);

  /// Draw `count` distinct solvable tasks with values in [1,13], deterministic
  /// in `seed`.
  static std::vector<std::array<int, 4>> generate_solvable_tasks(int count, std::uint64_t seed);

  // Environment interface.
  void reset() override;
  std::string observation() const override;
  ActionSpace valid_actions() const override;
  std::string step(const Action& action) override;
  Snapshot snapshot() const override;
  void restore(const Snapshot& snap) override;
  bool is_terminal() const override;
  bool is_success() const override;
  int steps_taken() const override { return steps_; }
  int horizon() const override { return static_cast<int>(initial_.size()) - 1; }
  std::string description(bool with_examples) const override;
  std::unique_ptr<Environment> clone_fresh() const override;
  std::string name() const override { return "game24"; }

  const std::vector<int>& numbers() const { return numbers_; }

private:
  std::string render_action(const Game24Action& a) const;

  std::vector<int> initial_;  // sorted
  std::vector<int> numbers_;  // sorted
  int steps_ = 0;
};

}  // namespace ige::envs
