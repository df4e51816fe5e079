#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>

namespace sirl {

// Grid coordinates: origin top-left, x grows rightward, y grows downward.
struct Cell {
  int x = 0;
  int y = 0;

  friend bool operator==(const Cell& a, const Cell& b) {
    return a.x == b.x && a.y == b.y;
  }
  friend bool operator!=(const Cell& a, const Cell& b) { return !(a == b); }
};

inline int chebyshev(const Cell& a, const Cell& b) {
  return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

inline int manhattan(const Cell& a, const Cell& b) {
  return std::abs(a.x - b.x) + std::abs(a.y - b.y);
}

inline double euclidean(const Cell& a, const Cell& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

// Von Neumann neighborhood in Up, Right, Down, Left order (may be off-grid).
inline std::array<Cell, 4> neighbor_cells4(const Cell& c) {
  return {Cell{c.x, c.y - 1}, Cell{c.x + 1, c.y}, Cell{c.x, c.y + 1},
          Cell{c.x - 1, c.y}};
}

}  // namespace sirl
