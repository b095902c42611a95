#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ige/environment.hpp"
#include "ige/envs/direction.hpp"

namespace ige::envs {

enum class Kind { key = 0, ball = 1, box = 2 };
enum class Color { red = 0, green = 1, blue = 2, purple = 3, yellow = 4, grey = 5 };

const char* kind_name(Kind k);
const char* color_name(Color c);

/// Target descriptor used in goals. Every placed object in a task has a unique
/// (color, kind) pair, so a spec identifies exactly one object.
struct ObjectSpec {
  Kind kind = Kind::ball;
  Color color = Color::red;

  bool operator==(const ObjectSpec&) const = default;
  std::string text() const;  // "red ball"
};

enum class GridFamily {
  go_to = 0,
  pick_up = 1,
  pick_up_then_go_to = 2,
  open_door = 3,
  put_next_to = 4,
};

const char* family_name(GridFamily f);
GridFamily family_from_name(const std::string& name);

struct GridTask {
  GridFamily family = GridFamily::go_to;
  std::string goal_text;  // "pick up the red ball"
  int horizon = 64;
  ObjectSpec target_a;
  std::optional<ObjectSpec> target_b;   // pick_up_then_go_to, put_next_to
  std::optional<Color> door_color;      // open_door
};

/// One board tile. Walls and doors are immovable; objects can be picked up
/// and dropped. A tile holds at most one of these.
struct Tile {
  enum class What { floor, wall, object, door } what = What::floor;
  Kind kind = Kind::ball;     // object tiles
  Color color = Color::red;   // object and door tiles
  bool locked = false;        // door tiles
  bool open = false;          // door tiles
};

/// An 8x8 partially observable gridworld with text observations. The boundary
/// ring is wall, leaving a 6x6 interior; open_door layouts add an internal
/// wall line with a locked door. The agent sees a 6-deep egocentric window
/// (3 tiles to the left, 2 to the right) with walls and closed doors blocking
/// sight, rendered as "You see a yellow box 2 steps left" clauses.
class GridworldEnv final : public Environment {
public:
  static constexpr int kSize = 8;

  /// Builds a solvable task. Layouts are drawn deterministically from `seed`
  /// and rejected until the scripted solver completes within the horizon and
  /// the goal is not already satisfied at spawn.
  GridworldEnv(std::uint64_t seed, GridFamily family);

  const GridTask& task() const { return task_; }
  const Tile& tile(int x, int y) const { return grid_[y][x]; }
  int agent_x() const { return ax_; }
  int agent_y() const { return ay_; }
  Dir facing() const { return facing_; }
  const std::optional<ObjectSpec>& carrying() const { return carrying_; }

  bool goal_reached() const;

  /// Glyph map plus object table plus task line, for fixtures and debugging.
  std::string serialize_layout() const;

  // Environment interface.
  void reset() override;
  std::string observation() const override;
  ActionSpace valid_actions() const override;
  std::string step(const Action& action) override;
  Snapshot snapshot() const override;
  void restore(const Snapshot& snap) override;
  bool is_terminal() const override;
  bool is_success() const override { return success_; }
  int steps_taken() const override { return steps_; }
  int horizon() const override { return task_.horizon; }
  std::string description(bool with_examples) const override;
  std::unique_ptr<Environment> clone_fresh() const override;
  std::string name() const override { return "gridworld"; }

private:
  friend std::optional<std::vector<Action>> scripted_grid_solution(const GridworldEnv& env);

  bool passable(int x, int y) const;
  bool transparent(int x, int y) const;
  std::optional<std::pair<int, int>> find_object(const ObjectSpec& spec) const;
  std::optional<std::pair<int, int>> find_door(Color color) const;
  void apply(const Action& action);

  std::uint64_t seed_ = 0;
  GridTask task_;
  std::array<std::array<Tile, kSize>, kSize> grid_{};     // grid_[y][x]
  std::array<std::array<Tile, kSize>, kSize> initial_{};  // spawn layout
  std::string fingerprint_;  // hash of the spawn layout, guards restore()

  int ax_ = 1, ay_ = 1;
  int start_x_ = 1, start_y_ = 1;
  Dir facing_ = Dir::north;
  Dir start_facing_ = Dir::north;
  std::optional<ObjectSpec> carrying_;
  int steps_ = 0;
  bool success_ = false;
};

/// BFS plan over (position, facing) poses for the current state of `env`.
/// Returns the action list that completes the task, or nullopt when no plan
/// fits in the remaining step budget. Pure: `env` is copied, never mutated.
std::optional<std::vector<Action>> scripted_grid_solution(const GridworldEnv& env);

/// The six fixed action names in listing order.
const std::vector<Action>& grid_actions();

}  // namespace ige::envs
