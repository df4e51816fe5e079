#include "sirl/agent.hpp"

#include <algorithm>
#include <stdexcept>

namespace sirl {
namespace {

std::vector<int> with_head(int input_size, const std::vector<int>& hidden,
                           int head) {
  std::vector<int> t;
  t.reserve(hidden.size() + 2);
  t.push_back(input_size);
  t.insert(t.end(), hidden.begin(), hidden.end());
  t.push_back(head);
  return t;
}

Action pick(const std::vector<double>& pi, SelectMode mode, Rng& rng) {
  if (mode == SelectMode::Greedy) {
    int best = 0;
    for (int k = 1; k < kActionCount; ++k) {
      if (pi[k] > pi[best]) best = k;
    }
    return static_cast<Action>(best);
  }
  const double u = rng.next_double();
  double acc = 0.0;
  for (int k = 0; k < kActionCount; ++k) {
    acc += pi[k];
    if (u < acc) return static_cast<Action>(k);
  }
  return static_cast<Action>(kActionCount - 1);
}

}  // namespace

void DiscountConfig::validate() const {
  if (gamma1 < 0.0 || gamma1 > 1.0 || gamma2 < 0.0 || gamma2 > 1.0) {
    throw std::invalid_argument("discount factors must lie in [0,1]");
  }
  if (!(reward_scale > 0.0)) {
    throw std::invalid_argument("reward_scale must be positive");
  }
}

AgentBrain AgentBrain::random_init(int input_size,
                                   const std::vector<int>& hidden, Rng& rng) {
  AgentBrain b{
      Mlp::random_init(with_head(input_size, hidden, 1), rng),
      Mlp(with_head(input_size, hidden, 1)),
      Mlp::random_init(with_head(input_size, hidden, kActionCount), rng),
      Mlp::random_init(with_head(input_size, hidden, 1), rng),
      Mlp(with_head(input_size, hidden, 1)),
  };
  b.sync_targets();
  return b;
}

void AgentBrain::sync_targets() {
  sync_target(eval_value, eval_target);
  sync_target(behav_value, behav_target);
}

double action_priority(const AgentBrain& brain, const LocalState& s) {
  return value_forward(brain.eval_value, s);
}

Action select_action(const AgentBrain& brain, const LocalState& s,
                     SelectMode mode, Rng& rng) {
  return select_action_cascaded(
      brain, std::span<const double>(s.v.data(), s.v.size()), mode, rng);
}

Action select_action_cascaded(const AgentBrain& brain,
                              std::span<const double> x, SelectMode mode,
                              Rng& rng) {
  static thread_local std::vector<double> pi;
  policy_forward(brain.policy, x, pi);
  return pick(pi, mode, rng);
}

double medium_reward(double d_prev, double d_now, const DiscountConfig& cfg) {
  return cfg.reward_scale * std::max(d_prev - d_now, 0.0);
}

double deterministic_return(double reward,
                            const std::optional<LocalState>& next_s,
                            const AgentBrain& brain,
                            const DiscountConfig& cfg) {
  if (!next_s) return deterministic_return(reward, {}, true, brain, cfg);
  return deterministic_return(
      reward, std::span<const double>(next_s->v.data(), next_s->v.size()),
      false, brain, cfg);
}

double stochastic_return(double reward,
                         const std::optional<LocalState>& next_s,
                         const AgentBrain& brain, const DiscountConfig& cfg) {
  if (!next_s) return stochastic_return(reward, {}, true, brain, cfg);
  return stochastic_return(
      reward, std::span<const double>(next_s->v.data(), next_s->v.size()),
      false, brain, cfg);
}

double deterministic_return(double reward, std::span<const double> next_obs,
                            bool terminal, const AgentBrain& brain,
                            const DiscountConfig& cfg) {
  if (terminal || cfg.gamma2 == 0.0) return reward;
  return reward + cfg.gamma2 * value_forward(brain.eval_target, next_obs);
}

double stochastic_return(double reward, std::span<const double> next_obs,
                         bool terminal, const AgentBrain& brain,
                         const DiscountConfig& cfg) {
  if (terminal || cfg.gamma1 == 0.0) return reward;
  return reward + cfg.gamma1 * value_forward(brain.behav_target, next_obs);
}

void save_brain(const AgentBrain& brain, std::ostream& os) {
  save_mlp(brain.eval_value, os);
  save_mlp(brain.eval_target, os);
  save_mlp(brain.policy, os);
  save_mlp(brain.behav_value, os);
  save_mlp(brain.behav_target, os);
}

AgentBrain load_brain(std::istream& is) {
  Mlp e = load_mlp(is);
  Mlp et = load_mlp(is);
  Mlp p = load_mlp(is);
  Mlp b = load_mlp(is);
  Mlp bt = load_mlp(is);
  return AgentBrain{std::move(e), std::move(et), std::move(p), std::move(b),
                    std::move(bt)};
}

}  // namespace sirl
