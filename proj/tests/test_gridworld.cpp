#include "doctest.h"

#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ige/envs/gridworld.hpp"
#include "ige/rng.hpp"

using namespace ige::envs;
using ige::DetRng;

namespace {

const std::vector<GridFamily> kFamilies{GridFamily::go_to, GridFamily::pick_up,
                                        GridFamily::pick_up_then_go_to, GridFamily::open_door,
                                        GridFamily::put_next_to};

int objects_on_grid(const GridworldEnv& env) {
  int count = 0;
  for (int y = 0; y < GridworldEnv::kSize; ++y) {
    for (int x = 0; x < GridworldEnv::kSize; ++x) {
      if (env.tile(x, y).what == Tile::What::object) ++count;
    }
  }
  return count;
}

std::vector<std::pair<int, int>> find_all(const GridworldEnv& env, const ObjectSpec& spec) {
  std::vector<std::pair<int, int>> hits;
  for (int y = 0; y < GridworldEnv::kSize; ++y) {
    for (int x = 0; x < GridworldEnv::kSize; ++x) {
      const auto& t = env.tile(x, y);
      if (t.what == Tile::What::object && t.kind == spec.kind && t.color == spec.color)
        hits.emplace_back(x, y);
    }
  }
  return hits;
}

}  // namespace

TEST_CASE("every generated task is solvable by its scripted plan") {
  for (const auto family : kFamilies) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      GridworldEnv env(seed, family);
      env.reset();
      CHECK(env.task().family == family);
      CHECK_FALSE(env.goal_reached());  // spawn-solved layouts are rejected

      const auto plan = scripted_grid_solution(env);
      REQUIRE_MESSAGE(plan.has_value(), "family ", family_name(family), " seed ", seed);
      CHECK(static_cast<int>(plan->size()) <= env.task().horizon);
      for (const auto& action : *plan) env.step(action);
      CHECK(env.is_success());
    }
  }
}

TEST_CASE("task shapes follow the family table") {
  GridworldEnv go(0, GridFamily::go_to);
  CHECK(go.task().horizon == 64);
  CHECK(go.task().goal_text.rfind("go to the ", 0) == 0);
  CHECK_FALSE(go.task().target_b.has_value());

  GridworldEnv pick(0, GridFamily::pick_up);
  CHECK(pick.task().horizon == 64);
  CHECK(pick.task().goal_text.rfind("pick up the ", 0) == 0);

  GridworldEnv then(0, GridFamily::pick_up_then_go_to);
  CHECK(then.task().horizon == 128);
  CHECK(then.task().goal_text.rfind("pick up the ", 0) == 0);
  CHECK(then.task().goal_text.find(" then go to the ") != std::string::npos);
  CHECK(then.task().target_b.has_value());

  GridworldEnv door(0, GridFamily::open_door);
  CHECK(door.task().horizon == 128);
  CHECK(door.task().goal_text.rfind("unlock the ", 0) == 0);
  CHECK(door.task().door_color.has_value());

  GridworldEnv put(0, GridFamily::put_next_to);
  CHECK(put.task().horizon == 128);
  CHECK(put.task().goal_text.rfind("put the ", 0) == 0);
  CHECK(put.task().goal_text.find(" next to the ") != std::string::npos);
  CHECK(put.task().target_b.has_value());
}

TEST_CASE("placed objects have unique color-kind pairs") {
  for (std::uint64_t seed = 40; seed < 60; ++seed) {
    GridworldEnv env(seed, GridFamily::pick_up_then_go_to);
    std::set<std::pair<int, int>> specs;
    for (int y = 0; y < GridworldEnv::kSize; ++y) {
      for (int x = 0; x < GridworldEnv::kSize; ++x) {
        const auto& t = env.tile(x, y);
        if (t.what != Tile::What::object) continue;
        CHECK(specs.insert({static_cast<int>(t.color), static_cast<int>(t.kind)}).second);
      }
    }
    CHECK(specs.size() == 4);  // one target pair plus two distractors
  }
}

TEST_CASE("layouts are deterministic per seed and family") {
  GridworldEnv a(9, GridFamily::put_next_to), b(9, GridFamily::put_next_to);
  CHECK(a.serialize_layout() == b.serialize_layout());
  GridworldEnv c(10, GridFamily::put_next_to);
  CHECK(a.serialize_layout() != c.serialize_layout());
}

TEST_CASE("a known seed renders the frozen observation") {
  GridworldEnv env(3, GridFamily::go_to);
  env.reset();
  CHECK(env.observation() ==
        "Goal: go to the purple box. You see a wall 4 steps forward, You see a wall 3 steps "
        "left, You see a blue key 1 step left, You see a purple ball 1 step right, You see a "
        "purple box 1 step right and 2 steps forward.");
}

TEST_CASE("the fixed action list is complete and enumerable") {
  const auto& actions = grid_actions();
  REQUIRE(actions.size() == 6);
  CHECK(actions == std::vector<ige::Action>{"turn left", "turn right", "go forward", "pick up",
                                            "drop", "toggle"});
  GridworldEnv env(1, GridFamily::go_to);
  env.reset();
  const auto space = env.valid_actions();
  CHECK_FALSE(space.free_form);
  CHECK(space.actions == actions);
}

TEST_CASE("turning cycles the facing and walls block movement") {
  // pick_up cannot succeed from movement alone, so the march stays live.
  GridworldEnv env(2, GridFamily::pick_up);
  env.reset();
  const auto start = env.facing();
  env.step("turn left");
  CHECK(env.facing() == turn_left(start));
  env.step("turn right");
  CHECK(env.facing() == start);
  for (int i = 0; i < 4; ++i) env.step("turn right");
  CHECK(env.facing() == start);

  // March into the boundary: position freezes once a wall is ahead.
  for (int i = 0; i < 10; ++i) env.step("go forward");
  const int x = env.agent_x(), y = env.agent_y();
  env.step("go forward");
  CHECK(env.agent_x() == x);
  CHECK(env.agent_y() == y);
  CHECK(env.tile(x, y).what == Tile::What::floor);
}

TEST_CASE("unknown commands are rejected") {
  GridworldEnv env(2, GridFamily::pick_up);
  env.reset();
  CHECK_THROWS_AS(env.step("dance"), std::invalid_argument);
  CHECK(env.steps_taken() == 1);  // the attempt still consumed a step
}

TEST_CASE("the open_door plan picks up the matching key and unlocks") {
  GridworldEnv env(5, GridFamily::open_door);
  env.reset();
  const auto plan = scripted_grid_solution(env);
  REQUIRE(plan.has_value());
  bool carried_key = false;
  for (const auto& action : *plan) {
    env.step(action);
    if (env.carrying() && env.carrying()->kind == Kind::key) carried_key = true;
  }
  CHECK(carried_key);
  CHECK(env.is_success());
  const auto color = *env.task().door_color;
  bool found_open = false;
  for (int y = 0; y < GridworldEnv::kSize; ++y) {
    for (int x = 0; x < GridworldEnv::kSize; ++x) {
      const auto& t = env.tile(x, y);
      if (t.what == Tile::What::door && t.color == color) {
        CHECK(t.open);
        CHECK_FALSE(t.locked);
        found_open = true;
      }
    }
  }
  CHECK(found_open);
}

TEST_CASE("the put_next_to plan ends with the targets adjacent") {
  GridworldEnv env(8, GridFamily::put_next_to);
  env.reset();
  const auto plan = scripted_grid_solution(env);
  REQUIRE(plan.has_value());
  for (const auto& action : *plan) env.step(action);
  CHECK(env.is_success());
  const auto a = find_all(env, env.task().target_a);
  const auto b = find_all(env, *env.task().target_b);
  REQUIRE(a.size() == 1);
  REQUIRE(b.size() == 1);
  const int dist = std::abs(a[0].first - b[0].first) + std::abs(a[0].second - b[0].second);
  CHECK(dist == 1);
}

TEST_CASE("random action fuzz preserves the board invariants") {
  for (const auto family : kFamilies) {
    GridworldEnv env(21, family);
    env.reset();
    const int initial_objects = objects_on_grid(env) + (env.carrying() ? 1 : 0);
    DetRng rng(99);
    const auto& actions = grid_actions();
    for (int i = 0; i < 1500 && !env.is_terminal(); ++i) {
      env.step(actions[rng.uniform_int(static_cast<int>(actions.size()))]);
      const int x = env.agent_x(), y = env.agent_y();
      REQUIRE(x >= 1);
      REQUIRE(x <= 6);
      REQUIRE(y >= 1);
      REQUIRE(y <= 6);
      const auto& under = env.tile(x, y);
      REQUIRE((under.what == Tile::What::floor ||
               (under.what == Tile::What::door && under.open)));
      REQUIRE(objects_on_grid(env) + (env.carrying() ? 1 : 0) == initial_objects);
      REQUIRE_FALSE(env.observation().empty());
    }
    CHECK(env.is_terminal());
  }
}

TEST_CASE("turn-only episodes run out the horizon without success") {
  GridworldEnv env(4, GridFamily::pick_up);
  env.reset();
  while (!env.is_terminal()) env.step("turn left");
  CHECK(env.steps_taken() == env.task().horizon);
  CHECK_FALSE(env.is_success());
  CHECK_THROWS_AS(env.step("turn left"), std::logic_error);
}

TEST_CASE("snapshots capture pose, carrying, and board state") {
  GridworldEnv env(5, GridFamily::open_door);
  env.reset();
  const auto plan = scripted_grid_solution(env);
  REQUIRE(plan.has_value());
  // Stop right after the key pickup.
  for (const auto& action : *plan) {
    env.step(action);
    if (env.carrying()) break;
  }
  REQUIRE(env.carrying().has_value());
  const auto snap = env.snapshot();
  const auto obs = env.observation();

  env.step("turn left");
  env.step("drop");
  env.restore(snap);
  CHECK(env.observation() == obs);
  CHECK(env.carrying().has_value());

  GridworldEnv other(6, GridFamily::open_door);
  other.reset();
  CHECK_THROWS_AS(other.restore(snap), std::invalid_argument);
}

TEST_CASE("clone_fresh restarts the identical layout") {
  GridworldEnv env(12, GridFamily::pick_up);
  env.reset();
  env.step("go forward");
  auto clone = env.clone_fresh();
  clone->reset();
  CHECK(clone->steps_taken() == 0);
  CHECK(clone->observation() == GridworldEnv(12, GridFamily::pick_up).observation());
}

TEST_CASE("the briefing lists the actions and the goal protocol") {
  GridworldEnv env(1, GridFamily::go_to);
  const auto text = env.description(false);
  for (const auto& action : grid_actions()) CHECK(text.find(action) != std::string::npos);
  CHECK(env.description(true).size() >= text.size());
}
