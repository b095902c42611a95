#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ige/environment.hpp"
#include "ige/envs/direction.hpp"

namespace ige::envs {

struct Room {
  int id = 0;
  std::string name;            // title case, e.g. "Dusty Kitchen"
  std::array<int, 4> exits{};  // indexed by Dir, -1 = no exit
};

/// A room maze laid out on a 2D lattice. The graph is a tree: the start-to-coin
/// backbone is a self-avoiding walk and every distractor room attaches through
/// exactly one new exit, so the unique simple path between start and coin is
/// the backbone itself.
struct RoomGraph {
  std::vector<Room> rooms;
  int start_room = 0;
  int coin_room = 0;
};

struct MazeConfig {
  int n_rooms = 40;
  int optimal_len = 20;
  int horizon = 25;
  double distractor_branching = 0.5;  // chance a distractor starts a new branch
};

/// Deterministic maze construction. Throws std::invalid_argument when the
/// config is infeasible (optimal_len >= n_rooms, horizon < optimal_len + 1,
/// branching outside [0,1], or non-positive sizes).
RoomGraph generate_maze(std::uint64_t seed, const MazeConfig& config);

/// Structured text dump (rooms, exits, start, coin) for fixtures and debugging.
std::string serialize_graph(const RoomGraph& graph);

struct MazePath {
  int length = 0;
  std::vector<std::string> moves;  // full commands, e.g. "go north"
};

/// Breadth-first distance plus one witness command sequence.
MazePath shortest_path(const RoomGraph& graph, int from, int to);

/// Coin hunt in a generated maze. Commands are free-form text: "goal",
/// "go <dir>" and "take coin". Every command, valid or not, costs one step;
/// taking the coin in its room ends the game with success.
class TextMazeEnv final : public Environment {
public:
  explicit TextMazeEnv(std::uint64_t seed, MazeConfig config = {});

  const RoomGraph& graph() const { return graph_; }
  const MazeConfig& config() const { return config_; }
  int agent_room() const { return room_; }

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
  int horizon() const override { return config_.horizon; }
  Action fallback_action() const override { return "goal"; }
  std::string description(bool with_examples) const override;
  std::unique_ptr<Environment> clone_fresh() const override;
  std::string name() const override { return "textmaze"; }

private:
  std::string render_room(int id) const;

  std::uint64_t seed_ = 0;
  MazeConfig config_;
  RoomGraph graph_;
  std::string fingerprint_;  // hash of the serialized graph, guards restore()

  int room_ = 0;
  int steps_ = 0;
  bool success_ = false;
};

}  // namespace ige::envs
