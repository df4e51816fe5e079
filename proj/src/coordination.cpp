#include "sirl/coordination.hpp"

#include <cmath>
#include <stdexcept>

namespace sirl {

std::vector<uint8_t> decide_winners(const std::vector<double>& priorities,
                                    const WorldState& w,
                                    const CoordinationConfig& cfg) {
  const int n = w.agent_count();
  if (static_cast<int>(priorities.size()) != n) {
    throw std::invalid_argument("one priority per agent required");
  }
  for (double p : priorities) {
    if (!std::isfinite(p)) {
      throw std::invalid_argument("priorities must be finite");
    }
  }
  std::vector<uint8_t> win(n, 1);
  if (cfg.range == CoordinationRange::Disabled) return win;

  const bool moore = cfg.range == CoordinationRange::Moore8;
  for (int i = 0; i < n; ++i) {
    const Cell pos = w.position(i);
    const Cell deltas[8] = {{-1, -1}, {0, -1}, {1, -1}, {-1, 0},
                            {1, 0},   {-1, 1}, {0, 1},  {1, 1}};
    for (const Cell& d : deltas) {
      if (!moore && d.x != 0 && d.y != 0) continue;  // diagonals out of range
      const Cell c{pos.x + d.x, pos.y + d.y};
      if (!w.shape().in_grid(c)) continue;
      const int k = w.occupant_at(c);
      if (k < 0) continue;
      const bool beats =
          priorities[i] > priorities[k] ||
          (priorities[i] == priorities[k] && i < k);
      if (!beats) {
        win[i] = 0;
        break;
      }
    }
  }
  return win;
}

}  // namespace sirl
