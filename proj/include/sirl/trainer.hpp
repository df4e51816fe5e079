#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sirl/agent.hpp"
#include "sirl/baselines.hpp"
#include "sirl/coordination.hpp"
#include "sirl/medium.hpp"
#include "sirl/perception.hpp"
#include "sirl/world.hpp"

namespace sirl {

// Momentum optimizer of the aggregator agent: averages the per-agent
// gradients of one step and applies velocity = m*velocity - lr*mean,
// params += velocity.
struct FederalOptimizer {
  double learning_rate = 1e-3;
  double momentum = 0.9;
  std::vector<double> velocity;  // sized on first step
  long steps = 0;                // applied (non-empty) steps

  std::vector<double> mean_scratch;
};

// Applies one aggregated update; an empty gradient list is a no-op. Throws
// on shape mismatches.
void federal_step(FederalOptimizer& opt, std::vector<double>& params,
                  std::span<const GradSet> grads);

enum class ObservationKind { Local, Cascaded };
enum class RewardKind { Medium, Origin };

struct TrainerConfig {
  int t_max = 25;              // phases per session
  int rounds = 2000;
  int target_sync_period = 100;  // optimizer steps between target copies
  double learning_rate = 1e-3;
  double momentum = 0.9;
  std::vector<int> hidden = {16, 16};
  MediumConfig medium;
  DiscountConfig discount;
  DistanceWeightParams weight;
  CoordinationConfig coordination;  // behavior-session conflict avoidance
  ObservationKind observation = ObservationKind::Local;
  RewardKind reward = RewardKind::Medium;
  OriginRewardTable origin;
  bool use_stigmergy = true;     // off: no medium, coordinates in the state
  bool train_evaluation = true;  // off: behavior-only methods
  uint64_t seed = 1;

  void validate() const;
};

// One swarm start: agent positions drawn from the random-walk generator.
using Sample = std::vector<Cell>;

// Collects `count` position snapshots from a pheromone-guided random walk,
// restarting from a fresh uniform placement periodically.
std::vector<Sample> generate_samples(const TargetShape& shape, int count,
                                     const MediumConfig& medium,
                                     const DistanceWeightParams& weight,
                                     Rng& rng);

struct SessionMetrics {
  int round = 0;
  int session = 0;  // 0 = evaluation, 1 = behavior
  int steps = 0;
  double si_start = 0.0;
  double si_end = 0.0;
  double value_loss_mean = 0.0;
  double policy_loss_mean = 0.0;
};

// Per-phase observation assembly shared by training and testing. Remembers
// the last state each agent formed, which the cascaded variant reads as the
// neighbors' transmitted states (zero until a neighbor has formed one).
class ObservationBuilder {
 public:
  ObservationBuilder(ObservationKind kind, bool use_stigmergy,
                     int agent_count);

  int width() const { return kind_ == ObservationKind::Cascaded ? 63 : 7; }
  void reset();

  // Forms agent's state against the current world/medium and writes the
  // final observation vector; rng drives attractor sampling.
  void form(const WorldState& w, const PheromoneMap& medium, int agent,
            const MediumConfig& mcfg, const DistanceWeightParams& wcfg,
            Rng& rng, std::vector<double>& obs);

  const std::optional<AttractorView>& attractor(int agent) const {
    return att_[agent];
  }
  const LocalState& state(int agent) const { return last_[agent]; }

 private:
  ObservationKind kind_;
  bool stigmergy_;
  std::vector<LocalState> last_;
  std::vector<std::optional<AttractorView>> att_;
};

// The two-session training loop. All agents start from one shared parameter
// draw; every optimizer step ends with a broadcast, so the swarm's networks
// stay bit-identical.
class Trainer {
 public:
  Trainer(TargetShape shape, TrainerConfig cfg);

  void set_samples(std::vector<Sample> samples);
  const std::vector<Sample>& samples() const { return samples_; }
  // Convenience: generate_samples with this trainer's configs and seed.
  void generate_default_samples(int count);

  // Greedy-action session updating the evaluation value net on all agents'
  // gradients each non-improving phase.
  SessionMetrics run_evaluation_session(WorldState& world, int round);
  // Priority-gated session updating policy and behavior value nets on the
  // winners' gradients.
  SessionMetrics run_behavior_session(WorldState& world, int round);

  // Draws a sample, runs the evaluation session then the behavior session
  // from the same placement (evaluation skipped for behavior-only methods).
  std::vector<SessionMetrics> run_training_round(int round);
  std::vector<SessionMetrics> train();

  const TargetShape& shape() const { return shape_; }
  const TrainerConfig& config() const { return cfg_; }
  int agent_count() const { return static_cast<int>(brains_.size()); }
  int obs_width() const { return builder_.width(); }
  const AgentBrain& brain(int i) const { return brains_[i]; }
  const AgentBrain& virtual_brain() const { return virtual_; }
  AgentBrain& virtual_brain() { return virtual_; }
  PheromoneMap& medium() { return medium_; }
  // Per-phase global rewards of the most recent session.
  const std::vector<double>& last_phase_rewards() const { return dsi_trace_; }

  long eval_steps() const { return eval_opt_.steps; }
  long behavior_steps() const { return bvalue_opt_.steps; }

 private:
  SessionMetrics run_session(int session, WorldState& world, int round);
  void broadcast(Mlp AgentBrain::* net);
  double phase_reward(int agent, double dsi) const;

  TargetShape shape_;
  TrainerConfig cfg_;
  std::vector<AgentBrain> brains_;
  AgentBrain virtual_;
  FederalOptimizer eval_opt_;
  FederalOptimizer policy_opt_;
  FederalOptimizer bvalue_opt_;
  PheromoneMap medium_;
  ObservationBuilder builder_;
  std::vector<Sample> samples_;

  // per-phase scratch
  std::vector<std::vector<double>> obs_;
  std::vector<std::vector<double>> next_obs_;
  std::vector<Rng> rngs_;
  std::vector<double> priorities_;
  std::vector<uint8_t> winners_;
  std::vector<Action> actions_;
  std::vector<double> rewards_;
  std::vector<uint8_t> was_labeled_;
  std::vector<uint8_t> is_labeled_;
  std::vector<GradSet> grads_;
  std::vector<GradSet> grads2_;
  std::vector<double> dsi_trace_;
};

}  // namespace sirl
