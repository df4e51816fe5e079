#include "sirl/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <stdexcept>

#include "sirl/coordination.hpp"

namespace sirl {

double origin_reward(bool was_labeled, bool is_labeled, double delta_si,
                     const OriginRewardTable& tbl) {
  if (!(tbl.a3 > 0.0) || !(tbl.b3 > 0.0)) {
    throw std::invalid_argument("origin reward constants must be positive");
  }
  if (!was_labeled && is_labeled) return tbl.a3;
  if (was_labeled && is_labeled) return tbl.b3 * std::max(delta_si, 0.0);
  return 0.0;
}

double dc_reward(int neighbor_count, bool in_labeled,
                 const DcRewardTable& tbl) {
  switch (neighbor_count) {
    case 4:
      return tbl.enclosed;
    case 3:
      return in_labeled ? tbl.three_labeled : tbl.three_unlabeled;
    case 2:
      return tbl.two;
    case 1:
      return in_labeled ? tbl.one_labeled : tbl.one_unlabeled;
    case 0:
      return tbl.free_standing;
    default:
      throw std::invalid_argument("neighbor count must be 0..4");
  }
}

namespace {

// Highest-weight attractor (deterministic: first of equal weights in sense
// order), or none.
std::optional<Cell> best_attractor(const PheromoneMap& medium, const Cell& pos,
                                   const DcConfig& cfg) {
  static thread_local std::vector<AttractorView> views;
  attractor_views(medium, pos, cfg.medium, views);
  if (views.empty()) return std::nullopt;
  size_t best = 0;
  double best_lw = -std::numeric_limits<double>::infinity();
  for (size_t j = 0; j < views.size(); ++j) {
    const double lw = log_distance_weight(views[j].distance, cfg.weight) +
                      std::log(views[j].amount);
    if (lw > best_lw) {
      best_lw = lw;
      best = j;
    }
  }
  return views[best].cell;
}

// Von Neumann move minimizing the Euclidean distance to `target` among
// in-grid cells; ties fall to the earlier action.
Action greedy_toward(const TargetShape& shape, const Cell& pos,
                     const Cell& target) {
  Action best = Action::Stop;
  double best_d = euclidean(pos, target);
  for (int k = 0; k < 4; ++k) {
    const Action a = static_cast<Action>(k);
    const Cell d = action_delta(a);
    const Cell c{pos.x + d.x, pos.y + d.y};
    if (!shape.in_grid(c)) continue;
    const double dist = euclidean(c, target);
    if (dist < best_d) {
      best_d = dist;
      best = a;
    }
  }
  return best;
}

bool adjacent_to_labeled(const TargetShape& shape, const Cell& pos) {
  for (const Cell& c : neighbor_cells4(pos)) {
    if (shape.in_grid(c) && shape.labeled(c)) return true;
  }
  return false;
}

// Clockwise tangential actions around the labeled region, most-aligned
// first: the tangent is the position vector from the labeled centroid
// rotated 90 degrees clockwise (y grows downward).
std::array<Action, 2> tangential_actions(const TargetShape& shape,
                                         const Cell& pos) {
  double cx = 0.0, cy = 0.0;
  int n = 0;
  for (const Cell& c : shape.labeled_cells()) {
    cx += c.x;
    cy += c.y;
    ++n;
  }
  cx /= n;
  cy /= n;
  const double vx = pos.x - cx;
  const double vy = pos.y - cy;
  const double tx = -vy;
  const double ty = vx;
  const Action x_move = tx >= 0.0 ? Action::Right : Action::Left;
  const Action y_move = ty >= 0.0 ? Action::Down : Action::Up;
  if (std::abs(tx) >= std::abs(ty)) return {x_move, y_move};
  return {y_move, x_move};
}

// Circular-approach motion shared by the two hand-crafted methods: direct
// greedy step toward the attractor, detouring clockwise along the labeled
// boundary when the direct step is taken by someone else or would cut into
// the labeled area prematurely.
Action circular_move(const WorldState& w, int agent,
                     const PheromoneMap& medium, const DcConfig& cfg) {
  const Cell pos = w.position(agent);
  const std::optional<Cell> att = best_attractor(medium, pos, cfg);
  if (!att) return Action::Stop;
  const TargetShape& shape = w.shape();
  const Action greedy = greedy_toward(shape, pos, *att);
  if (greedy != Action::Stop) {
    const Cell d = action_delta(greedy);
    const Cell target{pos.x + d.x, pos.y + d.y};
    const bool blocked = w.occupied(target);
    const bool skirt_boundary = !shape.labeled(pos) &&
                                adjacent_to_labeled(shape, pos) &&
                                !shape.labeled(target);
    if (!blocked && !skirt_boundary) return greedy;
  }
  for (Action a : tangential_actions(shape, pos)) {
    const Cell d = action_delta(a);
    const Cell c{pos.x + d.x, pos.y + d.y};
    if (shape.in_grid(c) && !w.occupied(c)) return a;
  }
  return Action::Stop;
}

void move_and_mark(WorldState& w, PheromoneMap& medium,
                   const std::vector<uint8_t>& movers, const DcConfig& cfg) {
  for (int i = 0; i < w.agent_count(); ++i) {
    if (!movers[i]) continue;
    w.apply_action(i, circular_move(w, i, medium, cfg));
    const Cell pos = w.position(i);
    medium.deposit(pos, w.shape().labeled(pos), cfg.medium);
  }
  medium.decay_occupied(w.positions(), cfg.medium);
}

std::vector<double> dc_rewards(const WorldState& w, const DcConfig& cfg) {
  std::vector<double> rewards(w.agent_count());
  for (int i = 0; i < w.agent_count(); ++i) {
    rewards[i] = dc_reward(w.neighbors4_count(i),
                           w.shape().labeled(w.position(i)), cfg.rewards);
  }
  return rewards;
}

}  // namespace

void dc_step(WorldState& w, PheromoneMap& medium, const DcConfig& cfg) {
  const std::vector<double> rewards = dc_rewards(w, cfg);
  const std::vector<uint8_t> movers =
      decide_winners(rewards, w, {CoordinationRange::Moore8});
  move_and_mark(w, medium, movers, cfg);
}

void cs_step(WorldState& w, PheromoneMap& medium, int k, const DcConfig& cfg) {
  if (k < 1) throw std::invalid_argument("mover count must be at least 1");
  const int n = w.agent_count();
  k = std::min(k, n);
  const std::vector<double> rewards = dc_rewards(w, cfg);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return rewards[a] > rewards[b];
  });
  std::vector<uint8_t> movers(n, 0);
  for (int j = 0; j < k; ++j) movers[order[j]] = 1;
  move_and_mark(w, medium, movers, cfg);
}

namespace {

// One BFS step from `start` toward `goal`, treating occupied cells (except
// the goal) as walls; returns the first action of a shortest path or none.
std::optional<Action> bfs_first_step(const WorldState& w, const Cell& start,
                                     const Cell& goal) {
  const TargetShape& shape = w.shape();
  const int wdt = shape.width(), hgt = shape.height();
  auto idx = [wdt](const Cell& c) {
    return static_cast<size_t>(c.y) * wdt + c.x;
  };
  std::vector<int> prev(static_cast<size_t>(wdt) * hgt, -2);  // -2 unseen
  std::deque<Cell> queue;
  queue.push_back(start);
  prev[idx(start)] = -1;
  while (!queue.empty()) {
    const Cell cur = queue.front();
    queue.pop_front();
    if (cur == goal) {
      // walk back to the cell right after start
      Cell step = cur;
      while (prev[idx(step)] >= 0) {
        const int p = prev[idx(step)];
        const Cell parent{p % wdt, p / wdt};
        if (parent == start) break;
        step = parent;
      }
      const Cell d{step.x - start.x, step.y - start.y};
      for (int k = 0; k < 4; ++k) {
        if (action_delta(static_cast<Action>(k)) == d) {
          return static_cast<Action>(k);
        }
      }
      return std::nullopt;  // start == goal
    }
    for (int k = 0; k < 4; ++k) {
      const Cell d = action_delta(static_cast<Action>(k));
      const Cell c{cur.x + d.x, cur.y + d.y};
      if (!shape.in_grid(c) || prev[idx(c)] != -2) continue;
      if (w.occupied(c) && !(c == goal)) continue;
      prev[idx(c)] = static_cast<int>(idx(cur));
      queue.push_back(c);
    }
  }
  return std::nullopt;
}

}  // namespace

bool oracle_step(WorldState& w) {
  const TargetShape& shape = w.shape();
  std::vector<Cell> vacancies;
  for (const Cell& c : shape.labeled_cells()) {
    if (!w.occupied(c)) vacancies.push_back(c);  // labeled_cells is row-major
  }
  std::vector<int> loose;
  for (int i = 0; i < w.agent_count(); ++i) {
    if (!shape.labeled(w.position(i))) loose.push_back(i);
  }
  if (vacancies.empty() || loose.empty()) return false;

  // All (vacancy, agent) pairs by straight-line distance, then vacancy
  // scan order, then agent index.
  struct Pair {
    double d;
    int v;
    int a;
  };
  std::vector<Pair> pairs;
  pairs.reserve(vacancies.size() * loose.size());
  for (size_t v = 0; v < vacancies.size(); ++v) {
    for (size_t a = 0; a < loose.size(); ++a) {
      pairs.push_back({euclidean(vacancies[v], w.position(loose[a])),
                       static_cast<int>(v), static_cast<int>(a)});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
    if (x.d != y.d) return x.d < y.d;
    if (x.v != y.v) return x.v < y.v;
    return x.a < y.a;
  });
  for (const Pair& p : pairs) {
    const int agent = loose[p.a];
    const std::optional<Action> step =
        bfs_first_step(w, w.position(agent), vacancies[p.v]);
    if (step && w.apply_action(agent, *step)) return true;
  }
  return false;
}

}  // namespace sirl
