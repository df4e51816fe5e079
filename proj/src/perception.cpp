#include "sirl/perception.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sirl {

double distance_weight(double d, const DistanceWeightParams& p) {
  return std::exp(log_distance_weight(d, p));
}

double log_distance_weight(double d, const DistanceWeightParams& p) {
  if (!(p.sigma > 0.0) || !(p.peak > 0.0)) {
    throw std::invalid_argument("distance weight parameters must be positive");
  }
  const double z = d - p.mean;
  return std::log(p.peak) - z * z / (2.0 * p.sigma * p.sigma);
}

std::vector<AttractorView> attractor_views(const PheromoneMap& map,
                                           const Cell& pos,
                                           const MediumConfig& cfg) {
  std::vector<AttractorView> out;
  attractor_views(map, pos, cfg, out);
  return out;
}

void attractor_views(const PheromoneMap& map, const Cell& pos,
                     const MediumConfig& cfg,
                     std::vector<AttractorView>& out) {
  out.clear();
  static thread_local std::vector<SensedCell> sensed;
  map.sense(pos, cfg, sensed);
  out.reserve(sensed.size());
  for (const SensedCell& s : sensed) {
    out.push_back({s.cell, s.amount, euclidean(pos, s.cell)});
  }
}

std::vector<double> selection_probabilities(
    const std::vector<AttractorView>& views, const DistanceWeightParams& p) {
  std::vector<double> probs(views.size(), 0.0);
  if (views.empty()) return probs;

  // log weights; normalize after subtracting the max so distant candidates
  // cannot underflow the whole distribution to zero.
  double max_lw = -std::numeric_limits<double>::infinity();
  for (size_t j = 0; j < views.size(); ++j) {
    const AttractorView& v = views[j];
    if (!(v.amount > 0.0)) {
      throw std::invalid_argument("attractor amount must be positive");
    }
    if (!(v.distance > 0.0)) {
      throw std::invalid_argument("attractor distance must be positive");
    }
    const double lw = log_distance_weight(v.distance, p) + std::log(v.amount);
    probs[j] = lw;
    max_lw = std::max(max_lw, lw);
  }
  double total = 0.0;
  for (double& lw : probs) {
    lw = std::exp(lw - max_lw);
    total += lw;
  }
  for (double& w : probs) w /= total;
  return probs;
}

std::optional<AttractorView> select_attractor(
    const std::vector<AttractorView>& views, Rng& rng,
    const DistanceWeightParams& p) {
  if (views.empty()) return std::nullopt;
  const std::vector<double> probs = selection_probabilities(views, p);
  const double u = rng.next_double();
  double acc = 0.0;
  for (size_t j = 0; j < views.size(); ++j) {
    acc += probs[j];
    if (u < acc) return views[j];
  }
  return views.back();  // guard against accumulated rounding
}

LocalState build_local_state(const WorldState& w, int agent,
                             const std::optional<AttractorView>& selected,
                             int sense_radius) {
  if (sense_radius <= 0) {
    throw std::invalid_argument("sense_radius must be positive");
  }
  LocalState s;
  const Cell pos = w.position(agent);
  const std::array<bool, 4> nbr = w.neighbors4(agent);
  for (int k = 0; k < 4; ++k) s.v[k] = nbr[k] ? 1.0 : 0.0;
  if (selected) {
    const double r = static_cast<double>(sense_radius);
    const double dx = std::clamp<double>(selected->cell.x - pos.x, -r, r);
    const double dy = std::clamp<double>(selected->cell.y - pos.y, -r, r);
    s.v[4] = dx / r;
    s.v[5] = dy / r;
  }
  s.v[6] = w.shape().labeled(pos) ? 1.0 : 0.0;
  return s;
}

}  // namespace sirl
