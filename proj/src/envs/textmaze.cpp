#include "ige/envs/textmaze.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ige/fnv.hpp"
#include "ige/rng.hpp"

namespace ige::envs {

namespace {

const std::array<const char*, 12> kAdjectives{
    "dusty",  "quiet",  "gloomy", "sunlit", "cramped", "drafty",
    "tidy",   "messy",  "narrow", "grand",  "chilly",  "crooked",
};

const std::array<const char*, 15> kNouns{
    "kitchen", "pantry",   "attic",    "cellar",  "study",
    "workshop", "corridor", "chamber",  "closet",  "lounge",
    "library",  "parlor",   "vault",    "bedroom", "hallway",
};

constexpr const char* kGoalText =
    "You need to explore the maze and find the coin. Take the coin to win the game.";

std::string title_case(const std::string& words) {
  std::string out = words;
  bool start = true;
  for (char& c : out) {
    if (start && std::isalpha(static_cast<unsigned char>(c))) {
      c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    start = (c == ' ');
  }
  return out;
}

std::vector<int> shuffled_dirs(DetRng& rng) {
  std::vector<int> dirs{0, 1, 2, 3};
  for (int i = 3; i > 0; --i) std::swap(dirs[i], dirs[rng.uniform_int(i + 1)]);
  return dirs;
}

void validate(const MazeConfig& cfg) {
  if (cfg.n_rooms < 2) throw std::invalid_argument("maze needs at least two rooms");
  if (cfg.optimal_len < 1) throw std::invalid_argument("optimal_len must be positive");
  if (cfg.optimal_len >= cfg.n_rooms) {
    throw std::invalid_argument("optimal_len must be smaller than n_rooms");
  }
  if (cfg.horizon < cfg.optimal_len + 1) {
    throw std::invalid_argument("horizon leaves no room to take the coin");
  }
  if (cfg.distractor_branching < 0.0 || cfg.distractor_branching > 1.0) {
    throw std::invalid_argument("distractor_branching must lie in [0,1]");
  }
}

}  // namespace

RoomGraph generate_maze(std::uint64_t seed, const MazeConfig& config) {
  validate(config);
  DetRng rng(seed);

  using Cell = std::pair<int, int>;
  auto neighbor = [](Cell c, int d) {
    Dir dir = static_cast<Dir>(d);
    return Cell{c.first + dx(dir), c.second + dy(dir)};
  };

  // Self-avoiding backbone walk of exactly optimal_len moves, found by
  // depth-first extension with backtracking.
  std::vector<Cell> path{{0, 0}};
  std::set<Cell> used{{0, 0}};
  std::vector<std::vector<int>> options{shuffled_dirs(rng)};
  std::vector<int> path_dirs;  // direction taken out of path[i]
  while (static_cast<int>(path.size()) < config.optimal_len + 1) {
    if (options.back().empty()) {
      used.erase(path.back());
      path.pop_back();
      options.pop_back();
      if (path.empty()) throw std::logic_error("backbone walk failed");
      path_dirs.pop_back();
      continue;
    }
    int d = options.back().back();
    options.back().pop_back();
    Cell next = neighbor(path.back(), d);
    if (used.count(next)) continue;
    path.push_back(next);
    used.insert(next);
    path_dirs.push_back(d);
    options.push_back(shuffled_dirs(rng));
  }

  RoomGraph graph;
  std::map<Cell, int> cell_of;
  auto add_room = [&](Cell c) {
    Room r;
    r.id = static_cast<int>(graph.rooms.size());
    r.exits.fill(-1);
    graph.rooms.push_back(r);
    cell_of[c] = r.id;
    return r.id;
  };
  auto link = [&](int from, int to, int d) {
    graph.rooms[from].exits[d] = to;
    graph.rooms[to].exits[(d + 2) % 4] = from;
  };

  add_room(path[0]);
  for (std::size_t i = 1; i < path.size(); ++i) {
    int id = add_room(path[i]);
    link(id - 1, id, path_dirs[i - 1]);
  }
  graph.start_room = 0;
  graph.coin_room = static_cast<int>(path.size()) - 1;

  // Distractor rooms grow only into free lattice cells, so the graph stays a
  // tree and the backbone remains the unique start-to-coin path.
  std::vector<Cell> room_cell(path.begin(), path.end());
  int last_added = -1;
  while (static_cast<int>(graph.rooms.size()) < config.n_rooms) {
    auto free_dirs = [&](int id) {
      std::vector<int> out;
      for (int d = 0; d < 4; ++d) {
        if (!cell_of.count(neighbor(room_cell[id], d))) out.push_back(d);
      }
      return out;
    };
    std::vector<int> open_rooms;
    for (const Room& r : graph.rooms) {
      if (!free_dirs(r.id).empty()) open_rooms.push_back(r.id);
    }
    if (open_rooms.empty()) throw std::logic_error("lattice frontier exhausted");

    int attach;
    bool corridor = last_added >= 0 && !free_dirs(last_added).empty() &&
                    !rng.bernoulli(config.distractor_branching);
    if (corridor) {
      attach = last_added;
    } else {
      attach = open_rooms[rng.uniform_int(open_rooms.size())];
    }
    std::vector<int> dirs = free_dirs(attach);
    int d = dirs[rng.uniform_int(dirs.size())];
    Cell c = neighbor(room_cell[attach], d);
    int id = add_room(c);
    room_cell.push_back(c);
    link(attach, id, d);
    last_added = id;
  }

  // Unique names drawn from a fixed adjective x noun pool.
  std::vector<std::string> pool;
  pool.reserve(kAdjectives.size() * kNouns.size());
  for (const char* a : kAdjectives) {
    for (const char* n : kNouns) pool.push_back(std::string(a) + " " + n);
  }
  if (pool.size() < graph.rooms.size()) throw std::logic_error("name pool too small");
  for (std::size_t i = pool.size() - 1; i > 0; --i) {
    std::swap(pool[i], pool[rng.uniform_int(i + 1)]);
  }
  for (Room& r : graph.rooms) r.name = title_case(pool[r.id]);

  return graph;
}

std::string serialize_graph(const RoomGraph& graph) {
  std::ostringstream os;
  os << "start: " << graph.start_room << "\n";
  os << "coin: " << graph.coin_room << "\n";
  for (const Room& r : graph.rooms) {
    os << "room " << r.id << " \"" << r.name << "\" exits:";
    for (int d = 0; d < 4; ++d) {
      if (r.exits[d] >= 0) {
        os << " " << dir_name(static_cast<Dir>(d)) << "=" << r.exits[d];
      }
    }
    os << "\n";
  }
  return os.str();
}

MazePath shortest_path(const RoomGraph& graph, int from, int to) {
  if (from < 0 || to < 0 || from >= static_cast<int>(graph.rooms.size()) ||
      to >= static_cast<int>(graph.rooms.size())) {
    throw std::invalid_argument("room id outside graph");
  }
  std::vector<int> prev(graph.rooms.size(), -1);
  std::vector<int> prev_dir(graph.rooms.size(), -1);
  std::vector<bool> seen(graph.rooms.size(), false);
  std::queue<int> frontier;
  frontier.push(from);
  seen[from] = true;
  while (!frontier.empty()) {
    int cur = frontier.front();
    frontier.pop();
    if (cur == to) break;
    for (int d = 0; d < 4; ++d) {
      int nxt = graph.rooms[cur].exits[d];
      if (nxt < 0 || seen[nxt]) continue;
      seen[nxt] = true;
      prev[nxt] = cur;
      prev_dir[nxt] = d;
      frontier.push(nxt);
    }
  }
  if (!seen[to]) throw std::logic_error("maze graph is not connected");

  MazePath out;
  for (int cur = to; cur != from; cur = prev[cur]) {
    out.moves.push_back(std::string("go ") + dir_name(static_cast<Dir>(prev_dir[cur])));
  }
  std::reverse(out.moves.begin(), out.moves.end());
  out.length = static_cast<int>(out.moves.size());
  return out;
}

TextMazeEnv::TextMazeEnv(std::uint64_t seed, MazeConfig config)
    : seed_(seed), config_(config), graph_(generate_maze(seed, config)) {
  fingerprint_ = fnv1a_hex(serialize_graph(graph_));
  reset();
}

void TextMazeEnv::reset() {
  room_ = graph_.start_room;
  steps_ = 0;
  success_ = false;
}

std::string TextMazeEnv::render_room(int id) const {
  const Room& r = graph_.rooms[id];
  std::string lower = r.name;
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  std::ostringstream os;
  os << "-= " << r.name << " =-\n";
  os << "You find yourself in a " << lower << ".";
  for (int d = 0; d < 4; ++d) {
    if (r.exits[d] >= 0) {
      os << " There is an exit to the " << dir_name(static_cast<Dir>(d)) << ".";
    }
  }
  if (id == graph_.coin_room && !success_) {
    os << " You see a coin on the floor here!";
  }
  if (success_) os << "\n\n*** The End ***";
  return os.str();
}

std::string TextMazeEnv::observation() const { return render_room(room_); }

ActionSpace TextMazeEnv::valid_actions() const {
  ActionSpace space;
  space.free_form = true;
  space.grammar = "\"go <dir>\" with dir one of north, east, south, west; \"take coin\"; \"goal\"";
  if (is_terminal()) return space;
  if (room_ == graph_.coin_room) space.actions.push_back("take coin");
  const Room& r = graph_.rooms[room_];
  for (int d = 0; d < 4; ++d) {
    if (r.exits[d] >= 0) {
      space.actions.push_back(std::string("go ") + dir_name(static_cast<Dir>(d)));
    }
  }
  return space;
}

std::string TextMazeEnv::step(const Action& action) {
  if (is_terminal()) throw std::logic_error("step on terminal maze state");
  ++steps_;  // every command costs a step, valid or not

  std::string cmd = action;
  auto strip = [](std::string& s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  };
  strip(cmd);

  if (cmd == "goal") return kGoalText;
  if (cmd == "take coin") {
    if (room_ == graph_.coin_room) {
      success_ = true;
      return "You take the coin.\n\n*** The End ***";
    }
    return "You can't see any such thing.";
  }
  if (cmd.rfind("go ", 0) == 0) {
    std::string dir = cmd.substr(3);
    strip(dir);
    for (int d = 0; d < 4; ++d) {
      if (dir == dir_name(static_cast<Dir>(d))) {
        int nxt = graph_.rooms[room_].exits[d];
        if (nxt < 0) return "You can't go that way.";
        room_ = nxt;
        return render_room(room_);
      }
    }
    return "You can't go that way.";
  }
  return "That's not a verb I recognise.";
}

Snapshot TextMazeEnv::snapshot() const {
  nlohmann::ordered_json j;
  j["env"] = name();
  j["maze"] = fingerprint_;
  j["room"] = room_;
  j["steps"] = steps_;
  j["success"] = success_;
  return j.dump();
}

void TextMazeEnv::restore(const Snapshot& snap) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(snap);
  } catch (const nlohmann::json::exception&) {
    throw std::invalid_argument("malformed maze snapshot");
  }
  if (!j.is_object() || j.value("env", "") != name() || j.value("maze", "") != fingerprint_) {
    throw std::invalid_argument("snapshot belongs to a different maze");
  }
  int room = j.value("room", -1);
  if (room < 0 || room >= static_cast<int>(graph_.rooms.size())) {
    throw std::invalid_argument("snapshot room outside maze");
  }
  room_ = room;
  steps_ = j.value("steps", 0);
  success_ = j.value("success", false);
}

bool TextMazeEnv::is_terminal() const { return success_ || steps_ >= config_.horizon; }

std::string TextMazeEnv::description(bool /*with_examples*/) const {
  std::ostringstream os;
  os << "You are an agent playing TextWorld, a text-based adventure game where you are in a "
        "randomly generated maze and must find the coin. You need to explore different rooms "
        "to find the target object.\n"
        "\n"
        "Here are the available commands:\n"
        "  goal:                print the goal of this game\n"
        "  go <dir>:            move the player north, east, south, or west. You can only go "
        "in the direction indicated with something like an exit or a door.\n"
        "  take coin:            win the game by `take coin' if you see the coin in the room\n"
        "\n"
        "The only action you can do is `go <dir>' to explore the maze and `take coin' when "
        "you see the coin in the room.\n"
        "\n"
        "You have "
     << config_.horizon << " steps to complete the task. Restarting is forbidden.";
  return os.str();
}

std::unique_ptr<Environment> TextMazeEnv::clone_fresh() const {
  return std::make_unique<TextMazeEnv>(seed_, config_);
}

}  // namespace ige::envs
