#pragma once

#include <stdexcept>

namespace ige::envs {

/// Cardinal directions in fixed listing order.
enum class Dir { north = 0, east = 1, south = 2, west = 3 };

inline Dir opposite(Dir d) { return static_cast<Dir>((static_cast<int>(d) + 2) % 4); }
inline Dir turn_left(Dir d) { return static_cast<Dir>((static_cast<int>(d) + 3) % 4); }
inline Dir turn_right(Dir d) { return static_cast<Dir>((static_cast<int>(d) + 1) % 4); }

/// Unit step on a grid where x grows east and y grows north.
inline int dx(Dir d) {
  switch (d) {
    case Dir::north: case Dir::south: return 0;
    case Dir::east: return 1;
    case Dir::west: return -1;
  }
  throw std::logic_error("bad direction");
}

inline int dy(Dir d) {
  switch (d) {
    case Dir::north: return 1;
    case Dir::south: return -1;
    case Dir::east: case Dir::west: return 0;
  }
  throw std::logic_error("bad direction");
}

inline const char* dir_name(Dir d) {
  switch (d) {
    case Dir::north: return "north";
    case Dir::east: return "east";
    case Dir::south: return "south";
    case Dir::west: return "west";
  }
  throw std::logic_error("bad direction");
}

}  // namespace ige::envs
