#pragma once

#include <iosfwd>
#include <optional>

#include "sirl/neuralcore.hpp"
#include "sirl/perception.hpp"
#include "sirl/rng.hpp"

namespace sirl {

struct DiscountConfig {
  double gamma1 = 0.9;        // stochastic-return discount
  double gamma2 = 0.0;        // deterministic-return discount
  double reward_scale = 1.0;  // scales the approach reward

  void validate() const;
};

// One agent's networks: the Evaluation Module (value net + frozen target)
// scoring action priority, and the Behavior Module (policy + value net +
// frozen target) producing actions.
struct AgentBrain {
  Mlp eval_value;
  Mlp eval_target;
  Mlp policy;
  Mlp behav_value;
  Mlp behav_target;

  // Policy topology `input -> hidden... -> 5`; the four value nets share the
  // hidden stack with a scalar head. input_size lets cascaded-observation
  // variants widen the first layer.
  static AgentBrain random_init(int input_size,
                                const std::vector<int>& hidden, Rng& rng);

  void sync_targets();  // eval_target <- eval_value, behav_target <- behav_value
};

enum class SelectMode { Greedy, Stochastic };

// V_e(s): the agent's claim for the conflict-avoidance round.
double action_priority(const AgentBrain& brain, const LocalState& s);

// Greedy: argmax of pi(s), lowest index on ties. Stochastic: sample from
// pi(s).
Action select_action(const AgentBrain& brain, const LocalState& s,
                     SelectMode mode, Rng& rng);
Action select_action_cascaded(const AgentBrain& brain,
                              std::span<const double> x, SelectMode mode,
                              Rng& rng);

// Individual approach reward: reward_scale * max(d_prev - d_now, 0), both
// distances to the attractor selected before the move.
double medium_reward(double d_prev, double d_now, const DiscountConfig& cfg);

// One-step bootstrapped returns; next_s empty means terminal.
double deterministic_return(double reward,
                            const std::optional<LocalState>& next_s,
                            const AgentBrain& brain,
                            const DiscountConfig& cfg);
double stochastic_return(double reward, const std::optional<LocalState>& next_s,
                         const AgentBrain& brain, const DiscountConfig& cfg);
// Raw-observation variants for cascaded inputs; terminal ignores next_obs.
double deterministic_return(double reward, std::span<const double> next_obs,
                            bool terminal, const AgentBrain& brain,
                            const DiscountConfig& cfg);
double stochastic_return(double reward, std::span<const double> next_obs,
                         bool terminal, const AgentBrain& brain,
                         const DiscountConfig& cfg);

// Five network checkpoints in a fixed order.
void save_brain(const AgentBrain& brain, std::ostream& os);
AgentBrain load_brain(std::istream& is);

}  // namespace sirl
