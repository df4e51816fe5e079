#pragma once

#include <array>
#include <optional>
#include <vector>

#include "sirl/medium.hpp"
#include "sirl/rng.hpp"
#include "sirl/world.hpp"

namespace sirl {

// Gaussian distance weighting for attractor selection: peak at distance
// `mean`, falling off with standard deviation `sigma`.
struct DistanceWeightParams {
  double peak = 1.0;
  double mean = 0.0;
  double sigma = 0.25;
};

double distance_weight(double d, const DistanceWeightParams& p = {});
// log of distance_weight, computed directly so large distances do not
// underflow before the normalization step.
double log_distance_weight(double d, const DistanceWeightParams& p = {});

struct AttractorView {
  Cell cell;
  double amount = 0.0;    // pheromone amount, > 0
  double distance = 0.0;  // Euclidean distance to the sensing agent, > 0
};

// Sensed cells turned into attractor candidates for an agent at `pos`.
std::vector<AttractorView> attractor_views(const PheromoneMap& map,
                                           const Cell& pos,
                                           const MediumConfig& cfg);
void attractor_views(const PheromoneMap& map, const Cell& pos,
                     const MediumConfig& cfg, std::vector<AttractorView>& out);

// Normalized selection probabilities: weight_j = D(d_j) * amount_j,
// evaluated in log space with max-subtraction. Throws std::invalid_argument
// when any amount or distance is non-positive.
std::vector<double> selection_probabilities(
    const std::vector<AttractorView>& views, const DistanceWeightParams& p = {});

// Samples one attractor with the probabilities above; empty input selects
// nothing.
std::optional<AttractorView> select_attractor(
    const std::vector<AttractorView>& views, Rng& rng,
    const DistanceWeightParams& p = {});

// The 7-element observation: four neighbor flags (Up, Right, Down, Left),
// the selected attractor offset scaled by the sensing radius, and the
// labeled flag of the occupied cell.
struct LocalState {
  std::array<double, 7> v{};

  double operator[](int i) const { return v[i]; }
  const double* data() const { return v.data(); }
  static constexpr int size() { return 7; }
};

LocalState build_local_state(const WorldState& w, int agent,
                             const std::optional<AttractorView>& selected,
                             int sense_radius);

}  // namespace sirl
