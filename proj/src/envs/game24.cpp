#include "ige/envs/game24.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ige/rng.hpp"
#include "json.hpp"

namespace ige::envs {

using ordered_json = nlohmann::ordered_json;

namespace {

const char* kDescription =
    "You are given 4 numbers and must use basic arithmetic operations (+ - * /) to obtain 24. "
    "At each step, you are only allowed to choose two of the remaining numbers to obtain a new "
    "number. A correct answer is one that uses each input exactly once and no other numbers to "
    "reach 24. Reaching 24 before the last step does not count as a correct answer.\n"
    "Follow the convention that division is integer division, and never divide by zero.";

const char* kExamples =
    "Some examples of correct reasoning traces are as follows:\n"
    "Input: (4 4 6 8)\n"
    "Steps:\n"
    "4 + 8 = 12. Next: (4 6 12)\n"
    "6 - 4 = 2. Next: (2 12)\n"
    "2 * 12 = 24. Next: (24)\n"
    "Answer: (6 - 4) * (4 + 8) = 24\n"
    "Input: (2 9 10 12)\n"
    "Steps:\n"
    "12 * 2 = 24. Next: (9 10 24)\n"
    "10 - 9 = 1. Next: (1 24)\n"
    "24 * 1 = 24. Next: (24)\n"
    "Answer: (12 * 2) * (10 - 9) = 24\n"
    "Input: (4 9 10 13)\n"
    "Steps:\n"
    "13 - 10 = 3. Next: (3 4 9)\n"
    "9 - 3 = 6. Next: (4 6)\n"
    "4 * 6 = 24. Next: (24)\n"
    "Answer: 4 * (9 - (13 - 10)) = 24";

void remove_one(std::vector<int>& values, int v) {
  auto it = std::find(values.begin(), values.end(), v);
  if (it == values.end()) {
    throw std::invalid_argument("game24: operand " + std::to_string(v) + " not in state");
  }
  values.erase(it);
}

}  // namespace

std::string Game24Action::equation() const {
  std::ostringstream out;
  out << lhs << ' ' << op << ' ' << rhs << " = " << result;
  return out.str();
}

std::optional<Game24Action> Game24Action::parse(const std::string& text) {
  std::istringstream in(text);
  Game24Action a;
  std::string op_token, eq_token;
  if (!(in >> a.lhs >> op_token >> a.rhs >> eq_token >> a.result)) return std::nullopt;
  if (op_token.size() != 1 || std::string("+-*/").find(op_token[0]) == std::string::npos) {
    return std::nullopt;
  }
  if (eq_token != "=") return std::nullopt;
  a.op = op_token[0];
  return a;
}

bool Game24Action::same_reduction(const Game24Action& other) const {
  return op == other.op && result == other.result &&
         std::min(lhs, rhs) == std::min(other.lhs, other.rhs) &&
         std::max(lhs, rhs) == std::max(other.lhs, other.rhs);
}

Game24Env::Game24Env(std::vector<int> start) : initial_(std::move(start)) {
  if (initial_.empty() || initial_.size() > 4) {
    throw std::invalid_argument("Game24Env: task must hold 1 to 4 numbers");
  }
  for (int v : initial_) {
    if (v < 0) throw std::invalid_argument("Game24Env: numbers must be non-negative");
  }
  std::sort(initial_.begin(), initial_.end());
  numbers_ = initial_;
}

std::string Game24Env::format_numbers(const std::vector<int>& numbers) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < numbers.size(); ++i) {
    if (i) out << ' ';
    out << numbers[i];
  }
  out << ')';
  return out.str();
}

std::vector<Game24Action> Game24Env::enumerate(const std::vector<int>& numbers) {
  std::vector<Game24Action> out;
  std::set<std::tuple<int, int, char, int>> seen;
  auto emit = [&](int hi, int lo, char op, int result) {
    auto key = std::make_tuple(lo, hi, op, result);
    if (seen.insert(key).second) out.push_back({hi, lo, op, result});
  };
  for (std::size_t i = 0; i < numbers.size(); ++i) {
    for (std::size_t j = i + 1; j < numbers.size(); ++j) {
      int hi = std::max(numbers[i], numbers[j]);
      int lo = std::min(numbers[i], numbers[j]);
      emit(hi, lo, '+', hi + lo);
      emit(hi, lo, '-', hi - lo);
      emit(hi, lo, '*', hi * lo);
      if (lo != 0 && hi % lo == 0) emit(hi, lo, '/', hi / lo);
    }
  }
  return out;
}

std::vector<int> Game24Env::reduce(const std::vector<int>& numbers, const Game24Action& action) {
  bool valid = false;
  for (const Game24Action& candidate : enumerate(numbers)) {
    if (candidate.same_reduction(action)) {
      valid = true;
      break;
    }
  }
  if (!valid) {
    throw std::invalid_argument("game24: action '" + action.equation() +
                                "' is not valid in state " + format_numbers(numbers));
  }
  std::vector<int> next = numbers;
  remove_one(next, action.lhs);
  remove_one(next, action.rhs);
  next.push_back(action.result);
  std::sort(next.begin(), next.end());
  return next;
}

std::optional<std::vector<Game24Action>> Game24Env::solve_exhaustive(const std::vector<int>& start) {
  if (start.size() == 1) {
    if (start[0] == 24) return std::vector<Game24Action>{};
    return std::nullopt;
  }
  for (const Game24Action& action : enumerate(start)) {
    auto rest = solve_exhaustive(reduce(start, action));
    if (rest) {
      rest->insert(rest->begin(), action);
      return rest;
    }
  }
  return std::nullopt;
}

std::string Game24Env::solution_expression(const std::vector<int>& start,
                                           const std::vector<Game24Action>& trajectory) {
  std::vector<std::pair<int, std::string>> terms;
  for (int v : start) terms.emplace_back(v, std::to_string(v));

  auto take = [&terms](int value) {
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (terms[i].first == value) {
        std::string expr = terms[i].second;
        terms.erase(terms.begin() + static_cast<std::ptrdiff_t>(i));
        return expr;
      }
    }
    throw std::invalid_argument("game24: trajectory operand " + std::to_string(value) +
                                " missing from state");
  };

  for (const Game24Action& a : trajectory) {
    std::string left = take(a.lhs);
    std::string right = take(a.rhs);
    std::ostringstream combined;
    combined << '(' << left << ' ' << a.op << ' ' << right << ')';
    terms.emplace_back(a.result, combined.str());
  }
  if (terms.size() != 1 || terms[0].first != 24) {
    throw std::invalid_argument("game24: trajectory does not end at 24");
  }

  std::string expr = terms[0].second;
  if (!expr.empty() && expr.front() == '(') {
    int depth = 0;
    for (std::size_t i = 0; i < expr.size(); ++i) {
      if (expr[i] == '(') ++depth;
      if (expr[i] == ')') {
        --depth;
        if (depth == 0) {
          if (i + 1 == expr.size()) expr = expr.substr(1, expr.size() - 2);
          break;
        }
      }
    }
  }
  return expr + " = 24";
}

std::vector<std::array<int, 4>> Game24Env::generate_solvable_tasks(int count, std::uint64_t seed) {
  DetRng rng(seed);
  std::vector<std::array<int, 4>> tasks;
  std::set<std::array<int, 4>> taken;
  while (static_cast<int>(tasks.size()) < count) {
    std::array<int, 4> task{};
    for (int& v : task) v = rng.uniform_int(13) + 1;
    std::sort(task.begin(), task.end());
    if (!taken.insert(task).second) continue;
    std::vector<int> numbers(task.begin(), task.end());
    if (solve_exhaustive(numbers)) tasks.push_back(task);
  }
  return tasks;
}

void Game24Env::reset() {
  numbers_ = initial_;
  steps_ = 0;
}

std::string Game24Env::observation() const { return format_numbers(numbers_); }

std::string Game24Env::render_action(const Game24Action& a) const {
  return a.equation() + ". Next: " + format_numbers(reduce(numbers_, a));
}

ActionSpace Game24Env::valid_actions() const {
  ActionSpace space;
  if (is_terminal()) return space;
  for (const Game24Action& a : enumerate(numbers_)) {
    space.actions.push_back(render_action(a));
  }
  return space;
}

std::string Game24Env::step(const Action& action) {
  if (is_terminal()) throw std::logic_error("game24: step on a terminal state");
  auto parsed = Game24Action::parse(action);
  if (!parsed) throw std::invalid_argument("game24: unparsable action '" + action + "'");
  numbers_ = reduce(numbers_, *parsed);
  steps_ += 1;
  return observation();
}

Snapshot Game24Env::snapshot() const {
  ordered_json j;
  j["env"] = "game24";
  j["task"] = initial_;
  j["numbers"] = numbers_;
  j["steps"] = steps_;
  return j.dump();
}

void Game24Env::restore(const Snapshot& snap) {
  ordered_json j = ordered_json::parse(snap, nullptr, false);
  if (j.is_discarded() || j.value("env", "") != "game24") {
    throw std::invalid_argument("game24: malformed snapshot");
  }
  std::vector<int> task = j.at("task").get<std::vector<int>>();
  if (task != initial_) {
    throw std::invalid_argument("game24: snapshot belongs to a different task");
  }
  numbers_ = j.at("numbers").get<std::vector<int>>();
  steps_ = j.at("steps").get<int>();
}

bool Game24Env::is_terminal() const { return numbers_.size() == 1; }

bool Game24Env::is_success() const { return numbers_.size() == 1 && numbers_[0] == 24; }

std::string Game24Env::description(bool with_examples) const {
  std::string text = kDescription;
  if (with_examples) {
    text += "\n";
    text += kExamples;
  }
  return text;
}

std::unique_ptr<Environment> Game24Env::clone_fresh() const {
  return std::make_unique<Game24Env>(initial_);
}

}  // namespace ige::envs
