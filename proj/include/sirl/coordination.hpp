#pragma once

#include <vector>

#include "sirl/world.hpp"

namespace sirl {

// How far the conflict-avoidance channel reaches.
enum class CoordinationRange { Moore8, VonNeumann4, Disabled };

struct CoordinationConfig {
  CoordinationRange range = CoordinationRange::Moore8;
};

// Winners of the priority exchange: agent i acts iff every in-range
// neighbor k satisfies p_i > p_k, or p_i == p_k and i < k. Disabled range
// lets everyone act. Returns a 0/1 flag per agent.
std::vector<uint8_t> decide_winners(const std::vector<double>& priorities,
                                    const WorldState& w,
                                    const CoordinationConfig& cfg);

}  // namespace sirl
