#include "ige/envs/gridworld.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ige/fnv.hpp"
#include "ige/rng.hpp"

namespace ige::envs {

namespace {

const std::vector<Action> kActions{
    "turn left", "turn right", "go forward", "pick up", "drop", "toggle",
};

constexpr int kViewDepth = 6;   // forward distances 0..5
constexpr int kViewLeft = 3;    // lateral offsets -3..+2
constexpr int kViewRight = 2;

std::string article(const std::string& phrase) {
  if (phrase.empty()) return "a";
  switch (phrase.front()) {
    case 'a': case 'e': case 'i': case 'o': case 'u': return "an";
    default: return "a";
  }
}

std::string steps_phrase(int n, const char* where) {
  std::ostringstream os;
  os << n << (n == 1 ? " step " : " steps ") << where;
  return os.str();
}

int sgn(int v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

}  // namespace

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::key: return "key";
    case Kind::ball: return "ball";
    case Kind::box: return "box";
  }
  throw std::logic_error("bad kind");
}

const char* color_name(Color c) {
  switch (c) {
    case Color::red: return "red";
    case Color::green: return "green";
    case Color::blue: return "blue";
    case Color::purple: return "purple";
    case Color::yellow: return "yellow";
    case Color::grey: return "grey";
  }
  throw std::logic_error("bad color");
}

std::string ObjectSpec::text() const {
  return std::string(color_name(color)) + " " + kind_name(kind);
}

const char* family_name(GridFamily f) {
  switch (f) {
    case GridFamily::go_to: return "go_to";
    case GridFamily::pick_up: return "pick_up";
    case GridFamily::pick_up_then_go_to: return "pick_up_then_go_to";
    case GridFamily::open_door: return "open_door";
    case GridFamily::put_next_to: return "put_next_to";
  }
  throw std::logic_error("bad family");
}

GridFamily family_from_name(const std::string& name) {
  for (int i = 0; i < 5; ++i) {
    GridFamily f = static_cast<GridFamily>(i);
    if (name == family_name(f)) return f;
  }
  throw std::invalid_argument("unknown task family: " + name);
}

const std::vector<Action>& grid_actions() { return kActions; }

GridworldEnv::GridworldEnv(std::uint64_t seed, GridFamily family) : seed_(seed) {
  DetRng rng(seed);
  task_.family = family;
  task_.horizon =
      (family == GridFamily::go_to || family == GridFamily::pick_up) ? 64 : 128;

  auto all_specs = [] {
    std::vector<ObjectSpec> out;
    for (int k = 0; k < 3; ++k) {
      for (int c = 0; c < 6; ++c) {
        out.push_back({static_cast<Kind>(k), static_cast<Color>(c)});
      }
    }
    return out;
  }();

  for (int attempt = 0; attempt < 500; ++attempt) {
    // Boundary-walled skeleton.
    for (int y = 0; y < kSize; ++y) {
      for (int x = 0; x < kSize; ++x) {
        grid_[y][x] = Tile{};
        if (x == 0 || y == 0 || x == kSize - 1 || y == kSize - 1) {
          grid_[y][x].what = Tile::What::wall;
        }
      }
    }
    task_.target_b.reset();
    task_.door_color.reset();
    carrying_.reset();
    steps_ = 0;
    success_ = false;

    // Cells still free for placement, filtered by an optional region predicate.
    auto pick_free = [&](auto&& allowed) -> std::pair<int, int> {
      std::vector<std::pair<int, int>> cells;
      for (int y = 1; y < kSize - 1; ++y) {
        for (int x = 1; x < kSize - 1; ++x) {
          if (grid_[y][x].what == Tile::What::floor && allowed(x, y)) {
            cells.emplace_back(x, y);
          }
        }
      }
      if (cells.empty()) throw std::logic_error("no free cell for placement");
      return cells[rng.uniform_int(cells.size())];
    };
    auto anywhere = [](int, int) { return true; };
    auto put_object = [&](ObjectSpec spec, auto&& allowed) {
      auto [x, y] = pick_free(allowed);
      grid_[y][x].what = Tile::What::object;
      grid_[y][x].kind = spec.kind;
      grid_[y][x].color = spec.color;
    };

    std::vector<ObjectSpec> specs = all_specs;
    for (std::size_t i = specs.size() - 1; i > 0; --i) {
      std::swap(specs[i], specs[rng.uniform_int(i + 1)]);
    }

    if (task_.family == GridFamily::open_door) {
      bool vertical = rng.bernoulli(0.5);
      int line = 2 + static_cast<int>(rng.uniform_int(4));  // wall coordinate in 2..5
      int slot = 1 + static_cast<int>(rng.uniform_int(6));  // door position along it
      for (int i = 1; i < kSize - 1; ++i) {
        Tile& t = vertical ? grid_[i][line] : grid_[line][i];
        t.what = Tile::What::wall;
      }
      Color door_color = static_cast<Color>(rng.uniform_int(6));
      Tile& door = vertical ? grid_[slot][line] : grid_[line][slot];
      door.what = Tile::What::door;
      door.color = door_color;
      door.locked = true;
      door.open = false;
      task_.door_color = door_color;
      task_.target_a = {Kind::key, door_color};
      task_.goal_text = std::string("unlock the ") + color_name(door_color) + " door";

      bool low_side = rng.bernoulli(0.5);
      auto agent_side = [&](int x, int y) {
        int coord = vertical ? x : y;
        return low_side ? coord < line : coord > line;
      };
      put_object({Kind::key, door_color}, agent_side);
      Color other = static_cast<Color>(rng.uniform_int(6));
      if (other == door_color) other = static_cast<Color>((static_cast<int>(other) + 1) % 6);
      put_object({Kind::key, other}, agent_side);
      auto [x, y] = pick_free(agent_side);
      ax_ = x;
      ay_ = y;
    } else {
      int n_targets = (task_.family == GridFamily::go_to || task_.family == GridFamily::pick_up)
                          ? 1
                          : 2;
      int n_distractors = n_targets == 1 ? 3 : 2;
      task_.target_a = specs[0];
      if (n_targets == 2) task_.target_b = specs[1];
      for (int i = 0; i < n_targets + n_distractors; ++i) put_object(specs[i], anywhere);
      switch (task_.family) {
        case GridFamily::go_to:
          task_.goal_text = "go to the " + task_.target_a.text();
          break;
        case GridFamily::pick_up:
          task_.goal_text = "pick up the " + task_.target_a.text();
          break;
        case GridFamily::pick_up_then_go_to:
          task_.goal_text = "pick up the " + task_.target_a.text() + " then go to the " +
                            task_.target_b->text();
          break;
        case GridFamily::put_next_to:
          task_.goal_text = "put the " + task_.target_a.text() + " next to the " +
                            task_.target_b->text();
          break;
        default:
          throw std::logic_error("unreachable");
      }
      auto [x, y] = pick_free(anywhere);
      ax_ = x;
      ay_ = y;
    }
    facing_ = static_cast<Dir>(rng.uniform_int(4));

    start_x_ = ax_;
    start_y_ = ay_;
    start_facing_ = facing_;
    initial_ = grid_;

    if (goal_reached()) continue;  // trivially solved at spawn, draw again
    auto plan = scripted_grid_solution(*this);
    if (!plan) continue;
    fingerprint_ = fnv1a_hex(serialize_layout());
    return;
  }
  throw std::logic_error("gridworld generation exhausted its attempt budget");
}

void GridworldEnv::reset() {
  grid_ = initial_;
  ax_ = start_x_;
  ay_ = start_y_;
  facing_ = start_facing_;
  carrying_.reset();
  steps_ = 0;
  success_ = false;
}

bool GridworldEnv::passable(int x, int y) const {
  if (x < 0 || y < 0 || x >= kSize || y >= kSize) return false;
  const Tile& t = grid_[y][x];
  if (t.what == Tile::What::floor) return true;
  return t.what == Tile::What::door && t.open;
}

bool GridworldEnv::transparent(int x, int y) const {
  if (x < 0 || y < 0 || x >= kSize || y >= kSize) return false;
  const Tile& t = grid_[y][x];
  if (t.what == Tile::What::wall) return false;
  if (t.what == Tile::What::door && !t.open) return false;
  return true;
}

std::optional<std::pair<int, int>> GridworldEnv::find_object(const ObjectSpec& spec) const {
  for (int y = 0; y < kSize; ++y) {
    for (int x = 0; x < kSize; ++x) {
      const Tile& t = grid_[y][x];
      if (t.what == Tile::What::object && t.kind == spec.kind && t.color == spec.color) {
        return std::make_pair(x, y);
      }
    }
  }
  return std::nullopt;
}

std::optional<std::pair<int, int>> GridworldEnv::find_door(Color color) const {
  for (int y = 0; y < kSize; ++y) {
    for (int x = 0; x < kSize; ++x) {
      const Tile& t = grid_[y][x];
      if (t.what == Tile::What::door && t.color == color) return std::make_pair(x, y);
    }
  }
  return std::nullopt;
}

bool GridworldEnv::goal_reached() const {
  int fx = ax_ + dx(facing_);
  int fy = ay_ + dy(facing_);
  auto facing_spec = [&](const ObjectSpec& spec) {
    const Tile& t = grid_[fy][fx];
    return t.what == Tile::What::object && t.kind == spec.kind && t.color == spec.color;
  };
  switch (task_.family) {
    case GridFamily::go_to:
      return facing_spec(task_.target_a);
    case GridFamily::pick_up:
      return carrying_ == task_.target_a;
    case GridFamily::pick_up_then_go_to:
      // Carrying A while standing at B implies the pickup happened first.
      return carrying_ == task_.target_a && facing_spec(*task_.target_b);
    case GridFamily::open_door: {
      auto d = find_door(*task_.door_color);
      return d && grid_[d->second][d->first].open;
    }
    case GridFamily::put_next_to: {
      auto a = find_object(task_.target_a);
      auto b = find_object(*task_.target_b);
      if (!a || !b) return false;
      return std::abs(a->first - b->first) + std::abs(a->second - b->second) == 1;
    }
  }
  throw std::logic_error("bad family");
}

void GridworldEnv::apply(const Action& action) {
  int fx = ax_ + dx(facing_);
  int fy = ay_ + dy(facing_);
  Tile& ahead = grid_[fy][fx];
  if (action == "turn left") {
    facing_ = turn_left(facing_);
  } else if (action == "turn right") {
    facing_ = turn_right(facing_);
  } else if (action == "go forward") {
    if (passable(fx, fy)) {
      ax_ = fx;
      ay_ = fy;
    }
  } else if (action == "pick up") {
    if (!carrying_ && ahead.what == Tile::What::object) {
      carrying_ = ObjectSpec{ahead.kind, ahead.color};
      ahead = Tile{};
    }
  } else if (action == "drop") {
    if (carrying_ && ahead.what == Tile::What::floor) {
      ahead.what = Tile::What::object;
      ahead.kind = carrying_->kind;
      ahead.color = carrying_->color;
      carrying_.reset();
    }
  } else if (action == "toggle") {
    if (ahead.what == Tile::What::door) {
      if (ahead.locked) {
        if (carrying_ && carrying_->kind == Kind::key && carrying_->color == ahead.color) {
          ahead.locked = false;
          ahead.open = true;
        }
      } else {
        ahead.open = !ahead.open;
      }
    }
  } else {
    throw std::invalid_argument("unknown gridworld action: " + action);
  }
}

std::string GridworldEnv::step(const Action& action) {
  if (is_terminal()) throw std::logic_error("step on terminal gridworld state");
  ++steps_;
  apply(action);
  if (goal_reached()) success_ = true;
  return observation();
}

std::string GridworldEnv::observation() const {
  // Egocentric visibility over forward distance f in [0,6) and lateral offset
  // l in [-3,+2], positive to the agent's right. Sight spreads outward from
  // the agent through transparent tiles; walls and closed doors are seen but
  // hide what lies behind them.
  Dir right = turn_right(facing_);
  auto world = [&](int f, int l) -> std::optional<std::pair<int, int>> {
    int x = ax_ + f * dx(facing_) + l * dx(right);
    int y = ay_ + f * dy(facing_) + l * dy(right);
    if (x < 0 || y < 0 || x >= kSize || y >= kSize) return std::nullopt;
    return std::make_pair(x, y);
  };
  auto transp = [&](int f, int l) {
    auto w = world(f, l);
    return w && transparent(w->first, w->second);
  };

  bool vis[kViewDepth][kViewLeft + kViewRight + 1] = {};
  auto visible = [&](int f, int l) -> bool& { return vis[f][l + kViewLeft]; };
  static const int kLateralOrder[] = {0, -1, 1, -2, 2, -3};
  visible(0, 0) = true;
  for (int f = 0; f < kViewDepth; ++f) {
    for (int l : kLateralOrder) {
      if (f == 0 && l == 0) continue;
      bool v = false;
      if (f > 0 && visible(f - 1, l) && transp(f - 1, l)) v = true;
      if (f > 0 && l != 0 && visible(f - 1, l - sgn(l)) && transp(f - 1, l - sgn(l))) v = true;
      if (l != 0 && visible(f, l - sgn(l)) && transp(f, l - sgn(l))) v = true;
      visible(f, l) = v;
    }
  }

  std::vector<std::string> clauses;
  // Nearest wall along the three sight rays.
  auto wall_ray = [&](int df, int dl, int limit, const char* where) {
    for (int i = 1; i <= limit; ++i) {
      auto w = world(i * df, i * dl);
      if (!w) return;
      const Tile& t = grid_[w->second][w->first];
      if (t.what == Tile::What::wall) {
        clauses.push_back("a wall " + steps_phrase(i, where));
        return;
      }
      if (!transparent(w->first, w->second)) return;  // a closed door hides it
    }
  };
  wall_ray(1, 0, kViewDepth - 1, "forward");
  wall_ray(0, -1, kViewLeft, "left");
  wall_ray(0, 1, kViewRight, "right");

  for (int f = 0; f < kViewDepth; ++f) {
    for (int l = -kViewLeft; l <= kViewRight; ++l) {
      if (f == 0 && l == 0) continue;
      if (!visible(f, l)) continue;
      auto w = world(f, l);
      if (!w) continue;
      const Tile& t = grid_[w->second][w->first];
      std::string what;
      if (t.what == Tile::What::object) {
        what = ObjectSpec{t.kind, t.color}.text();
      } else if (t.what == Tile::What::door) {
        std::string state = t.locked ? "locked " : (t.open ? "open " : "");
        what = state + color_name(t.color) + " door";
      } else {
        continue;
      }
      std::string offs;
      if (l != 0) offs = steps_phrase(std::abs(l), l < 0 ? "left" : "right");
      if (f != 0) {
        if (!offs.empty()) offs += " and ";
        offs += steps_phrase(f, "forward");
      }
      clauses.push_back(article(what) + " " + what + " " + offs);
    }
  }

  std::string obs = "Goal: " + task_.goal_text + ".";
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    obs += (i == 0 ? " You see " : ", You see ") + clauses[i];
  }
  if (!clauses.empty()) obs += ".";
  if (carrying_) {
    std::string what = carrying_->text();
    obs += " You are carrying " + article(what) + " " + what + ".";
  }
  return obs;
}

ActionSpace GridworldEnv::valid_actions() const {
  ActionSpace space;
  if (!is_terminal()) space.actions = kActions;
  return space;
}

Snapshot GridworldEnv::snapshot() const {
  nlohmann::ordered_json j;
  j["env"] = name();
  j["task"] = fingerprint_;
  j["agent"] = {ax_, ay_, static_cast<int>(facing_)};
  if (carrying_) {
    j["carrying"] = {static_cast<int>(carrying_->kind), static_cast<int>(carrying_->color)};
  } else {
    j["carrying"] = nullptr;
  }
  nlohmann::ordered_json objects = nlohmann::ordered_json::array();
  nlohmann::ordered_json doors = nlohmann::ordered_json::array();
  for (int y = 0; y < kSize; ++y) {
    for (int x = 0; x < kSize; ++x) {
      const Tile& t = grid_[y][x];
      if (t.what == Tile::What::object) {
        objects.push_back({x, y, static_cast<int>(t.kind), static_cast<int>(t.color)});
      } else if (t.what == Tile::What::door) {
        doors.push_back({x, y, static_cast<int>(t.color), t.locked, t.open});
      }
    }
  }
  j["objects"] = objects;
  j["doors"] = doors;
  j["steps"] = steps_;
  j["success"] = success_;
  return j.dump();
}

void GridworldEnv::restore(const Snapshot& snap) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(snap);
  } catch (const nlohmann::json::exception&) {
    throw std::invalid_argument("malformed gridworld snapshot");
  }
  if (!j.is_object() || j.value("env", "") != name() || j.value("task", "") != fingerprint_) {
    throw std::invalid_argument("snapshot belongs to a different gridworld task");
  }
  std::array<std::array<Tile, kSize>, kSize> grid;
  for (int y = 0; y < kSize; ++y) {
    for (int x = 0; x < kSize; ++x) {
      grid[y][x] = Tile{};
      if (initial_[y][x].what == Tile::What::wall) grid[y][x].what = Tile::What::wall;
    }
  }
  try {
    for (const auto& o : j.at("objects")) {
      int x = o.at(0), y = o.at(1);
      Tile& t = grid.at(y).at(x);
      if (t.what != Tile::What::floor) throw std::invalid_argument("object on blocked tile");
      t.what = Tile::What::object;
      t.kind = static_cast<Kind>(o.at(2).get<int>());
      t.color = static_cast<Color>(o.at(3).get<int>());
    }
    for (const auto& d : j.at("doors")) {
      int x = d.at(0), y = d.at(1);
      Tile& t = grid.at(y).at(x);
      if (t.what != Tile::What::floor) throw std::invalid_argument("door on blocked tile");
      t.what = Tile::What::door;
      t.color = static_cast<Color>(d.at(2).get<int>());
      t.locked = d.at(3).get<bool>();
      t.open = d.at(4).get<bool>();
    }
    auto agent = j.at("agent");
    int x = agent.at(0), y = agent.at(1), dir = agent.at(2);
    if (x < 1 || y < 1 || x >= kSize - 1 || y >= kSize - 1 || dir < 0 || dir > 3) {
      throw std::invalid_argument("agent pose outside the grid");
    }
    std::optional<ObjectSpec> carrying;
    if (!j.at("carrying").is_null()) {
      carrying = ObjectSpec{static_cast<Kind>(j.at("carrying").at(0).get<int>()),
                            static_cast<Color>(j.at("carrying").at(1).get<int>())};
    }
    grid_ = grid;
    ax_ = x;
    ay_ = y;
    facing_ = static_cast<Dir>(dir);
    carrying_ = carrying;
    steps_ = j.value("steps", 0);
    success_ = j.value("success", false);
  } catch (const nlohmann::json::exception&) {
    throw std::invalid_argument("malformed gridworld snapshot");
  }
}

bool GridworldEnv::is_terminal() const { return success_ || steps_ >= task_.horizon; }

std::string GridworldEnv::description(bool /*with_examples*/) const {
  std::ostringstream os;
  os << "You are an agent in an 8x8 partially-observable 2D text-based environment.\n"
        "You see the 6x6 grid in front of you, and can face north, south, east, or west.\n"
        "The possible actions are turn left, turn right, go forward, pick up, drop, and "
        "toggle.\n"
        "At each turn, you will receive a history of the last observations and actions.\n"
        "Your aim is to complete the task described in the goal.\n"
        "Each tile in the grid can only contain at most one object.\n"
        "Objects cannot be crossed, and may need to be bypassed or moved.\n"
        "You can only move onto an empty tile or on a tile containing an open door.\n"
        "You can only hold one object at a time, using pick up when they are one step in "
        "front.\n"
        "Objects are dropped one tile in front and cannot be dropped when there is another "
        "object in front.\n"
        "Doors are unlocked with keys of the same color using the toggle action.\n"
        "Actions are deterministic, do not repeat actions if they have no effect.\n"
        "You have "
     << task_.horizon << " steps to complete the task.";
  return os.str();
}

std::unique_ptr<Environment> GridworldEnv::clone_fresh() const {
  return std::make_unique<GridworldEnv>(seed_, task_.family);
}

std::string GridworldEnv::serialize_layout() const {
  std::ostringstream os;
  os << "task: " << task_.goal_text << "\n";
  os << "family: " << family_name(task_.family) << "\n";
  os << "horizon: " << task_.horizon << "\n";
  os << "grid:\n";
  for (int y = kSize - 1; y >= 0; --y) {
    for (int x = 0; x < kSize; ++x) {
      char glyph = '.';
      const Tile& t = grid_[y][x];
      if (t.what == Tile::What::wall) glyph = '#';
      if (t.what == Tile::What::door) glyph = 'D';
      if (t.what == Tile::What::object) {
        glyph = t.kind == Kind::key ? 'k' : (t.kind == Kind::ball ? 'b' : 'x');
      }
      if (x == ax_ && y == ay_) glyph = "^>v<"[static_cast<int>(facing_)];
      os << glyph;
    }
    os << "\n";
  }
  os << "agent: (" << ax_ << "," << ay_ << ") facing " << dir_name(facing_) << "\n";
  os << "carrying: " << (carrying_ ? carrying_->text() : "none") << "\n";
  os << "objects:\n";
  for (int y = 0; y < kSize; ++y) {
    for (int x = 0; x < kSize; ++x) {
      const Tile& t = grid_[y][x];
      if (t.what == Tile::What::object) {
        os << "  (" << x << "," << y << ") " << ObjectSpec{t.kind, t.color}.text() << "\n";
      }
    }
  }
  os << "doors:\n";
  for (int y = 0; y < kSize; ++y) {
    for (int x = 0; x < kSize; ++x) {
      const Tile& t = grid_[y][x];
      if (t.what == Tile::What::door) {
        os << "  (" << x << "," << y << ") " << color_name(t.color) << " door "
           << (t.locked ? "locked" : (t.open ? "open" : "closed")) << "\n";
      }
    }
  }
  return os.str();
}

namespace {

/// BFS over (x, y, facing) with moves {turn left, turn right, go forward},
/// stopping at the first pose satisfying `goal`. Passability is evaluated on
/// the provided environment's current grid.
std::optional<std::vector<Action>> navigate(const GridworldEnv& env,
                                            const std::function<bool(int, int, Dir)>& goal) {
  constexpr int kSz = GridworldEnv::kSize;
  auto index = [](int x, int y, int d) { return (y * kSz + x) * 4 + d; };
  std::vector<int> parent(kSz * kSz * 4, -1);
  std::vector<int> via(kSz * kSz * 4, -1);  // 0 left, 1 right, 2 forward
  std::vector<bool> seen(kSz * kSz * 4, false);

  int start = index(env.agent_x(), env.agent_y(), static_cast<int>(env.facing()));
  if (goal(env.agent_x(), env.agent_y(), env.facing())) return std::vector<Action>{};
  std::queue<int> frontier;
  seen[start] = true;
  frontier.push(start);
  while (!frontier.empty()) {
    int cur = frontier.front();
    frontier.pop();
    int d = cur % 4;
    int x = (cur / 4) % kSz;
    int y = cur / (4 * kSz);
    Dir dir = static_cast<Dir>(d);
    struct Move {
      int nx, ny, nd, act;
    };
    std::array<Move, 3> moves{{
        {x, y, static_cast<int>(turn_left(dir)), 0},
        {x, y, static_cast<int>(turn_right(dir)), 1},
        {x + dx(dir), y + dy(dir), d, 2},
    }};
    for (const Move& m : moves) {
      if (m.act == 2) {
        // go forward needs a passable target tile
        bool ok = m.nx >= 0 && m.ny >= 0 && m.nx < kSz && m.ny < kSz;
        if (!ok) continue;
        const Tile& t = env.tile(m.nx, m.ny);
        bool pass = t.what == Tile::What::floor || (t.what == Tile::What::door && t.open);
        if (!pass) continue;
      }
      int ni = index(m.nx, m.ny, m.nd);
      if (seen[ni]) continue;
      seen[ni] = true;
      parent[ni] = cur;
      via[ni] = m.act;
      if (goal(m.nx, m.ny, static_cast<Dir>(m.nd))) {
        std::vector<Action> actions;
        for (int i = ni; i != start; i = parent[i]) {
          actions.push_back(kActions[via[i] == 2 ? 2 : via[i]]);
        }
        std::reverse(actions.begin(), actions.end());
        return actions;
      }
      frontier.push(ni);
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::vector<Action>> scripted_grid_solution(const GridworldEnv& env) {
  GridworldEnv sim = env;
  if (sim.is_terminal()) {
    if (sim.is_success()) return std::vector<Action>{};
    return std::nullopt;
  }
  std::vector<Action> plan;

  enum class Outcome { ongoing, solved, dead };
  auto run = [&](const std::vector<Action>& actions) {
    for (const Action& a : actions) {
      if (sim.is_terminal()) return Outcome::dead;
      sim.step(a);
      plan.push_back(a);
      if (sim.is_success()) return Outcome::solved;
    }
    return sim.is_terminal() ? Outcome::dead : Outcome::ongoing;
  };
  auto facing_object = [&](const ObjectSpec& spec) {
    return [&sim, spec](int x, int y, Dir d) {
      int fx = x + dx(d);
      int fy = y + dy(d);
      if (fx < 0 || fy < 0 || fx >= GridworldEnv::kSize || fy >= GridworldEnv::kSize) {
        return false;
      }
      const Tile& t = sim.tile(fx, fy);
      return t.what == Tile::What::object && t.kind == spec.kind && t.color == spec.color;
    };
  };
  auto phase = [&](const std::function<bool(int, int, Dir)>& goal,
                   const std::optional<Action>& then) -> std::optional<Outcome> {
    auto path = navigate(sim, goal);
    if (!path) return std::nullopt;
    Outcome out = run(*path);
    if (out != Outcome::ongoing) return out;
    if (then) out = run({*then});
    return out;
  };

  const GridTask& task = sim.task();
  std::optional<Outcome> out;
  switch (task.family) {
    case GridFamily::go_to:
      out = phase(facing_object(task.target_a), std::nullopt);
      break;
    case GridFamily::pick_up:
      out = phase(facing_object(task.target_a), Action("pick up"));
      break;
    case GridFamily::pick_up_then_go_to:
      out = phase(facing_object(task.target_a), Action("pick up"));
      if (out == Outcome::ongoing) out = phase(facing_object(*task.target_b), std::nullopt);
      break;
    case GridFamily::open_door: {
      out = phase(facing_object({Kind::key, *task.door_color}), Action("pick up"));
      if (out == Outcome::ongoing) {
        auto facing_door = [&sim, &task](int x, int y, Dir d) {
          int fx = x + dx(d);
          int fy = y + dy(d);
          if (fx < 0 || fy < 0 || fx >= GridworldEnv::kSize || fy >= GridworldEnv::kSize) {
            return false;
          }
          const Tile& t = sim.tile(fx, fy);
          return t.what == Tile::What::door && t.color == *task.door_color;
        };
        out = phase(facing_door, Action("toggle"));
      }
      break;
    }
    case GridFamily::put_next_to: {
      out = phase(facing_object(task.target_a), Action("pick up"));
      if (out == Outcome::ongoing) {
        auto drop_site = [&sim, &task](int x, int y, Dir d) {
          int fx = x + dx(d);
          int fy = y + dy(d);
          if (fx < 1 || fy < 1 || fx >= GridworldEnv::kSize - 1 ||
              fy >= GridworldEnv::kSize - 1) {
            return false;
          }
          if (sim.tile(fx, fy).what != Tile::What::floor) return false;
          static const int ddx[] = {0, 1, 0, -1};
          static const int ddy[] = {1, 0, -1, 0};
          for (int i = 0; i < 4; ++i) {
            int bx = fx + ddx[i];
            int by = fy + ddy[i];
            if (bx < 0 || by < 0 || bx >= GridworldEnv::kSize || by >= GridworldEnv::kSize) {
              continue;
            }
            const Tile& t = sim.tile(bx, by);
            if (t.what == Tile::What::object && t.kind == task.target_b->kind &&
                t.color == task.target_b->color) {
              return true;
            }
          }
          return false;
        };
        out = phase(drop_site, Action("drop"));
      }
      break;
    }
  }
  if (out && *out == Outcome::solved) return plan;
  return std::nullopt;
}

}  // namespace ige::envs
