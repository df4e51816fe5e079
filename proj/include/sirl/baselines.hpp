#pragma once

#include <vector>

#include "sirl/medium.hpp"
#include "sirl/perception.hpp"
#include "sirl/world.hpp"

namespace sirl {

// Reward shaping for the coordinate-observation variants: nonzero only when
// entering the labeled area, plus a global-progress bonus while staying in.
struct OriginRewardTable {
  double a3 = 10.0;
  double b3 = 100.0;
};

double origin_reward(bool was_labeled, bool is_labeled, double delta_si,
                     const OriginRewardTable& tbl);

// Hand-set reward by (von Neumann neighbor count, labeled flag); rows with
// equal reward for both flags are collapsed.
struct DcRewardTable {
  double enclosed = 0.0;        // 4 neighbors, any position
  double three_labeled = 4.0;   // 3 neighbors, in the labeled area
  double three_unlabeled = 12.0;
  double two = 8.0;             // 2 neighbors, any position
  double one_labeled = 8.0;
  double one_unlabeled = 12.0;
  double free_standing = 12.0;  // 0 neighbors, any position
};

double dc_reward(int neighbor_count, bool in_labeled, const DcRewardTable& tbl);

struct DcConfig {
  DcRewardTable rewards;
  DistanceWeightParams weight;
  MediumConfig medium;
};

// One synchronous step of the hand-crafted decentralized method: every agent
// scores itself with dc_reward, local maxima within the Moore range move one
// cell toward their highest-weight attractor (with a clockwise detour around
// the labeled boundary when the direct move is unavailable), movers deposit,
// then occupied cells decay. Deterministic.
void dc_step(WorldState& w, PheromoneMap& medium, const DcConfig& cfg);

// Same motion, but exactly min(k, N) movers picked by highest reward
// (ties to the lowest agent index) instead of the local-maximum rule.
void cs_step(WorldState& w, PheromoneMap& medium, int k, const DcConfig& cfg);

// Centralized greedy scheduler: repeatedly matches the closest
// (vacant labeled cell, agent outside the labeled area) pair and walks that
// agent one cell along a shortest free path. One agent moves per call;
// returns false when nothing can move (formation finished or fully blocked).
bool oracle_step(WorldState& w);

}  // namespace sirl
