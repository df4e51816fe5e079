#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "sirl/grid.hpp"
#include "sirl/rng.hpp"

namespace sirl {

enum class Action : int { Up = 0, Right = 1, Down = 2, Left = 3, Stop = 4 };
constexpr int kActionCount = 5;

// Unit displacement of an action; Stop maps to (0,0). Up decrements y.
Cell action_delta(Action a);

// The labeled area to be formed. The labeled cell count defines the number of
// agents N required to fill it.
class TargetShape {
 public:
  TargetShape(int width, int height, std::vector<uint8_t> labeled);

  int width() const { return width_; }
  int height() const { return height_; }
  int agent_count() const { return agent_count_; }

  bool in_grid(const Cell& c) const {
    return c.x >= 0 && c.x < width_ && c.y >= 0 && c.y < height_;
  }
  bool labeled(const Cell& c) const {
    return labeled_[static_cast<size_t>(c.y) * width_ + c.x] != 0;
  }
  std::vector<Cell> labeled_cells() const;

  friend bool operator==(const TargetShape& a, const TargetShape& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ &&
           a.labeled_ == b.labeled_;
  }

 private:
  int width_;
  int height_;
  std::vector<uint8_t> labeled_;
  int agent_count_;
};

// Grid occupancy state: one agent per cell, positions and the occupancy index
// kept consistent through every move.
class WorldState {
 public:
  WorldState(TargetShape shape, std::vector<Cell> positions);

  // Places shape.agent_count() agents on distinct uniform-random cells.
  static WorldState random_placement(TargetShape shape, Rng& rng);

  const TargetShape& shape() const { return shape_; }
  int agent_count() const { return static_cast<int>(positions_.size()); }
  const std::vector<Cell>& positions() const { return positions_; }
  Cell position(int agent) const { return positions_[agent]; }

  bool occupied(const Cell& c) const { return occupant_at(c) >= 0; }
  // Agent index at the cell, or -1 when empty.
  int occupant_at(const Cell& c) const {
    return occupancy_[static_cast<size_t>(c.y) * shape_.width() + c.x];
  }

  // Moves one agent. A Stop, an off-grid target or an occupied target leaves
  // the state unchanged and reports moved=false.
  bool apply_action(int agent, Action act);

  // Fraction of agents standing on labeled cells.
  double similarity() const;

  // Occupancy flags of the four von Neumann cells in Up, Right, Down, Left
  // order; off-grid directions report false.
  std::array<bool, 4> neighbors4(int agent) const;

  // Indices of agents in the 8 surrounding cells, scanned row-major.
  std::vector<int> moore8(int agent) const;
  int moore8_count(int agent) const;
  int neighbors4_count(int agent) const;

  // World snapshot as a P2 graymap: agents white, unoccupied labeled cells
  // gray, everything else black.
  void write_pgm(std::ostream& os) const;

 private:
  TargetShape shape_;
  std::vector<Cell> positions_;
  std::vector<int> occupancy_;  // agent index per cell, -1 when empty
};

// Change in similarity between two states of the same task. Throws
// std::invalid_argument when the shapes or agent counts differ.
double global_reward(const WorldState& before, const WorldState& after);

}  // namespace sirl
