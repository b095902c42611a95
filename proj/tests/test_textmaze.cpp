#include "doctest.h"

#include <set>
#include <stdexcept>

#include "ige/envs/textmaze.hpp"

using namespace ige::envs;

namespace {

int count_edges(const RoomGraph& graph) {
  int twice_edges = 0;
  for (const auto& room : graph.rooms) {
    for (const int exit : room.exits) {
      if (exit >= 0) ++twice_edges;
    }
  }
  return twice_edges / 2;
}

bool exits_reciprocal(const RoomGraph& graph) {
  for (const auto& room : graph.rooms) {
    for (int d = 0; d < 4; ++d) {
      const int other = room.exits[static_cast<std::size_t>(d)];
      if (other < 0) continue;
      const auto back = static_cast<std::size_t>(opposite(static_cast<Dir>(d)));
      if (graph.rooms[static_cast<std::size_t>(other)].exits[back] != room.id) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("generated mazes are trees with the exact optimal distance") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto graph = generate_maze(seed, {});
    REQUIRE(graph.rooms.size() == 40);
    CHECK(count_edges(graph) == 39);  // connected + n-1 edges = tree
    CHECK(exits_reciprocal(graph));
    CHECK(graph.start_room != graph.coin_room);
    CHECK(shortest_path(graph, graph.start_room, graph.coin_room).length == 20);

    std::set<std::string> names;
    for (const auto& room : graph.rooms) names.insert(room.name);
    CHECK(names.size() == graph.rooms.size());  // distinct room names
  }
}

TEST_CASE("maze generation is deterministic per seed") {
  CHECK(serialize_graph(generate_maze(7, {})) == serialize_graph(generate_maze(7, {})));
  CHECK(serialize_graph(generate_maze(7, {})) != serialize_graph(generate_maze(8, {})));
}

TEST_CASE("custom maze shapes and infeasible configs") {
  MazeConfig small{12, 5, 9, 0.3};
  const auto graph = generate_maze(3, small);
  CHECK(graph.rooms.size() == 12);
  CHECK(shortest_path(graph, graph.start_room, graph.coin_room).length == 5);

  CHECK_THROWS_AS(generate_maze(0, {10, 10, 12, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(generate_maze(0, {10, 5, 5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(generate_maze(0, {10, 5, 9, 1.5}), std::invalid_argument);
}

TEST_CASE("observations render the room, exits, and coin") {
  TextMazeEnv env(11);
  env.reset();
  const auto obs = env.observation();
  CHECK(obs.find("-= ") == 0);
  CHECK(obs.find(" =-\n") != std::string::npos);
  CHECK(obs.find("You find yourself in a ") != std::string::npos);
  CHECK(obs.find("exit") != std::string::npos);
  CHECK(obs.find("coin") == std::string::npos);  // optimal distance 20, not the start
}

TEST_CASE("every command costs a step, including invalid ones") {
  TextMazeEnv env(2);
  env.reset();
  CHECK(env.steps_taken() == 0);
  const auto goal = env.step("goal");
  CHECK(goal.find("You need to explore the maze and find the coin.") == 0);
  CHECK(env.steps_taken() == 1);
  CHECK(env.step("take coin") == "You can't see any such thing.");
  CHECK(env.steps_taken() == 2);
  CHECK(env.step("dance wildly") == "That's not a verb I recognise.");
  CHECK(env.steps_taken() == 3);

  // A direction with no exit is refused but still billed.
  const auto& room = env.graph().rooms[static_cast<std::size_t>(env.agent_room())];
  for (int d = 0; d < 4; ++d) {
    if (room.exits[static_cast<std::size_t>(d)] >= 0) continue;
    const auto before = env.steps_taken();
    CHECK(env.step(std::string("go ") + dir_name(static_cast<Dir>(d))) ==
          "You can't go that way.");
    CHECK(env.steps_taken() == before + 1);
    break;
  }
}

TEST_CASE("walking the shortest path and taking the coin wins") {
  TextMazeEnv env(5, {12, 5, 9, 0.5});
  env.reset();
  const auto path = shortest_path(env.graph(), env.graph().start_room, env.graph().coin_room);
  for (const auto& move : path.moves) env.step(move);
  CHECK(env.agent_room() == env.graph().coin_room);
  CHECK(env.observation().find("You see a coin on the floor here!") != std::string::npos);

  const auto finale = env.step("take coin");
  CHECK(finale.find("You take the coin.") != std::string::npos);
  CHECK(finale.find("*** The End ***") != std::string::npos);
  CHECK(env.is_success());
  CHECK(env.is_terminal());
  CHECK(env.steps_taken() == path.length + 1);
  CHECK(env.valid_actions().actions.empty());
  CHECK_THROWS_AS(env.step("goal"), std::logic_error);
}

TEST_CASE("the horizon ends unfinished runs") {
  TextMazeEnv env(4, {12, 5, 9, 0.5});
  env.reset();
  for (int i = 0; i < 9; ++i) env.step("goal");
  CHECK(env.is_terminal());
  CHECK_FALSE(env.is_success());
  CHECK_THROWS_AS(env.step("goal"), std::logic_error);
}

TEST_CASE("valid actions enumerate exits and the coin pickup") {
  TextMazeEnv env(9);
  env.reset();
  const auto space = env.valid_actions();
  CHECK(space.free_form);
  const auto& room = env.graph().rooms[static_cast<std::size_t>(env.agent_room())];
  int exits = 0;
  for (const int e : room.exits) {
    if (e >= 0) ++exits;
  }
  CHECK(static_cast<int>(space.actions.size()) == exits);
  for (const auto& action : space.actions) CHECK(action.rfind("go ", 0) == 0);
}

TEST_CASE("snapshots round trip and refuse foreign mazes") {
  TextMazeEnv env(6);
  env.reset();
  const auto first_move = env.valid_actions().actions.front();
  env.step(first_move);
  env.step("goal");
  const auto snap = env.snapshot();
  const auto obs = env.observation();
  const auto steps = env.steps_taken();

  env.step(env.valid_actions().actions.front());
  env.restore(snap);
  CHECK(env.observation() == obs);
  CHECK(env.steps_taken() == steps);

  TextMazeEnv other(7);
  other.reset();
  CHECK_THROWS_AS(other.restore(snap), std::invalid_argument);
}

TEST_CASE("clone_fresh rebuilds the same maze at step zero") {
  TextMazeEnv env(13);
  env.reset();
  env.step(env.valid_actions().actions.front());
  auto clone = env.clone_fresh();
  clone->reset();
  CHECK(clone->steps_taken() == 0);
  CHECK(clone->name() == "textmaze");
  CHECK(clone->observation() == TextMazeEnv(13).observation());
}

TEST_CASE("the briefing embeds the step limit") {
  TextMazeEnv env(1);
  const auto text = env.description(false);
  CHECK(text.find("You have 25 steps to complete the task. Restarting is forbidden.") !=
        std::string::npos);
  CHECK(text.find("take coin") != std::string::npos);

  TextMazeEnv tiny(1, {12, 5, 9, 0.5});
  CHECK(tiny.description(false).find("You have 9 steps") != std::string::npos);
}
