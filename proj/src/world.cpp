#include "sirl/world.hpp"

#include <ostream>
#include <stdexcept>

namespace sirl {

Cell action_delta(Action a) {
  switch (a) {
    case Action::Up: return {0, -1};
    case Action::Right: return {1, 0};
    case Action::Down: return {0, 1};
    case Action::Left: return {-1, 0};
    case Action::Stop: return {0, 0};
  }
  return {0, 0};
}

TargetShape::TargetShape(int width, int height, std::vector<uint8_t> labeled)
    : width_(width), height_(height), labeled_(std::move(labeled)) {
  if (width <= 0 || height <= 0) {
    throw std::invalid_argument("TargetShape: dimensions must be positive");
  }
  if (labeled_.size() != static_cast<size_t>(width) * height) {
    throw std::invalid_argument("TargetShape: mask size mismatch");
  }
  agent_count_ = 0;
  for (uint8_t v : labeled_) agent_count_ += v != 0;
  if (agent_count_ == 0) {
    throw std::invalid_argument("TargetShape: no labeled cells");
  }
}

std::vector<Cell> TargetShape::labeled_cells() const {
  std::vector<Cell> out;
  out.reserve(agent_count_);
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      if (labeled({x, y})) out.push_back({x, y});
    }
  }
  return out;
}

WorldState::WorldState(TargetShape shape, std::vector<Cell> positions)
    : shape_(std::move(shape)), positions_(std::move(positions)) {
  occupancy_.assign(static_cast<size_t>(shape_.width()) * shape_.height(), -1);
  for (size_t i = 0; i < positions_.size(); ++i) {
    const Cell& c = positions_[i];
    if (!shape_.in_grid(c)) {
      throw std::invalid_argument("WorldState: agent position outside grid");
    }
    int& slot = occupancy_[static_cast<size_t>(c.y) * shape_.width() + c.x];
    if (slot >= 0) {
      throw std::invalid_argument("WorldState: two agents share a cell");
    }
    slot = static_cast<int>(i);
  }
}

WorldState WorldState::random_placement(TargetShape shape, Rng& rng) {
  const int n = shape.agent_count();
  const int cells = shape.width() * shape.height();
  if (n > cells) {
    throw std::invalid_argument("random_placement: more agents than cells");
  }
  // Partial Fisher-Yates over the cell indices.
  std::vector<int> idx(cells);
  for (int i = 0; i < cells; ++i) idx[i] = i;
  std::vector<Cell> pos(n);
  for (int i = 0; i < n; ++i) {
    const int j = i + static_cast<int>(rng.next_below(cells - i));
    std::swap(idx[i], idx[j]);
    pos[i] = {idx[i] % shape.width(), idx[i] / shape.width()};
  }
  return WorldState(std::move(shape), std::move(pos));
}

bool WorldState::apply_action(int agent, Action act) {
  if (act == Action::Stop) return false;
  const Cell from = positions_[agent];
  const Cell d = action_delta(act);
  const Cell to{from.x + d.x, from.y + d.y};
  if (!shape_.in_grid(to) || occupied(to)) return false;
  occupancy_[static_cast<size_t>(from.y) * shape_.width() + from.x] = -1;
  occupancy_[static_cast<size_t>(to.y) * shape_.width() + to.x] = agent;
  positions_[agent] = to;
  return true;
}

double WorldState::similarity() const {
  int on = 0;
  for (const Cell& c : positions_) on += shape_.labeled(c);
  return static_cast<double>(on) / static_cast<double>(positions_.size());
}

std::array<bool, 4> WorldState::neighbors4(int agent) const {
  const Cell p = positions_[agent];
  std::array<bool, 4> out{};
  static constexpr Cell kDirs[4] = {{0, -1}, {1, 0}, {0, 1}, {-1, 0}};
  for (int k = 0; k < 4; ++k) {
    const Cell c{p.x + kDirs[k].x, p.y + kDirs[k].y};
    out[k] = shape_.in_grid(c) && occupied(c);
  }
  return out;
}

std::vector<int> WorldState::moore8(int agent) const {
  const Cell p = positions_[agent];
  std::vector<int> out;
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      if (dx == 0 && dy == 0) continue;
      const Cell c{p.x + dx, p.y + dy};
      if (!shape_.in_grid(c)) continue;
      const int who = occupant_at(c);
      if (who >= 0) out.push_back(who);
    }
  }
  return out;
}

int WorldState::moore8_count(int agent) const {
  const Cell p = positions_[agent];
  int n = 0;
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      if (dx == 0 && dy == 0) continue;
      const Cell c{p.x + dx, p.y + dy};
      if (shape_.in_grid(c) && occupied(c)) ++n;
    }
  }
  return n;
}

int WorldState::neighbors4_count(int agent) const {
  const auto f = neighbors4(agent);
  return static_cast<int>(f[0]) + f[1] + f[2] + f[3];
}

void WorldState::write_pgm(std::ostream& os) const {
  os << "P2\n" << shape_.width() << " " << shape_.height() << "\n255\n";
  for (int y = 0; y < shape_.height(); ++y) {
    for (int x = 0; x < shape_.width(); ++x) {
      const Cell c{x, y};
      int v = 0;
      if (occupied(c)) {
        v = 255;
      } else if (shape_.labeled(c)) {
        v = 128;
      }
      os << v << (x + 1 < shape_.width() ? ' ' : '\n');
    }
  }
}

double global_reward(const WorldState& before, const WorldState& after) {
  if (!(before.shape() == after.shape()) ||
      before.agent_count() != after.agent_count()) {
    throw std::invalid_argument("global_reward: mismatched tasks");
  }
  return after.similarity() - before.similarity();
}

}  // namespace sirl
