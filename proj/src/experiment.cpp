#include "sirl/experiment.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "sirl/coordination.hpp"

namespace sirl {

WorldState initial_placement(const TargetShape& shape, uint64_t seed) {
  Rng rng = derive_rng(seed, 15);
  return WorldState::random_placement(shape, rng);
}

namespace {

// One iteration of the deployment loop for network-driven methods.
void learned_test_step(const ExperimentConfig& cfg, WorldState& world,
                       const AgentBrain& brain, ObservationBuilder& builder,
                       PheromoneMap& medium, int iteration,
                       std::vector<std::vector<double>>& obs,
                       std::vector<double>& priorities,
                       std::vector<uint8_t>& winners) {
  const TrainerConfig& t = cfg.trainer;
  const int n = world.agent_count();
  const CoordinationRange range = test_coordination_range(cfg.method);
  for (int i = 0; i < n; ++i) {
    Rng rng = derive_rng(cfg.seed, 16, iteration, i);
    builder.form(world, medium, i, t.medium, t.weight, rng, obs[i]);
    if (range != CoordinationRange::Disabled) {
      priorities[i] =
          value_forward(brain.eval_value, std::span<const double>(obs[i]));
    }
  }
  if (range != CoordinationRange::Disabled) {
    winners = decide_winners(priorities, world, {range});
  } else {
    std::fill(winners.begin(), winners.end(), uint8_t{1});
  }
  Rng unused(0);  // greedy selection draws nothing
  for (int i = 0; i < n; ++i) {
    if (!winners[i]) continue;
    const Action a = select_action_cascaded(
        brain, std::span<const double>(obs[i]), SelectMode::Greedy, unused);
    world.apply_action(i, a);
    if (t.use_stigmergy) {
      const Cell now = world.position(i);
      medium.deposit(now, world.shape().labeled(now), t.medium);
    }
  }
  if (t.use_stigmergy) {
    medium.decay_occupied(world.positions(), t.medium);
  }
}

}  // namespace

double run_test(const ExperimentConfig& cfg, WorldState& world,
                PheromoneMap& medium, const AgentBrain* brain,
                TestTrace* trace) {
  const TrainerConfig& t = cfg.trainer;
  const int n = world.agent_count();
  DcConfig dc{cfg.dc_rewards, t.weight, t.medium};

  ObservationBuilder builder(t.observation, t.use_stigmergy, n);
  std::vector<std::vector<double>> obs(n);
  std::vector<double> priorities(n, 0.0);
  std::vector<uint8_t> winners(n, 1);

  if (method_is_learned(cfg.method)) {
    if (brain == nullptr) {
      throw std::invalid_argument("method requires trained networks");
    }
    if (brain->policy.input_size() != builder.width()) {
      throw std::runtime_error(
          "checkpoint input width does not match the method's observation");
    }
  }

  for (int it = 0; it < cfg.test_iterations; ++it) {
    switch (cfg.method) {
      case Method::Dc:
        dc_step(world, medium, dc);
        break;
      case Method::Cs:
        cs_step(world, medium, cfg.cs_k, dc);
        break;
      case Method::Oracle:
        oracle_step(world);
        break;
      default:
        learned_test_step(cfg, world, *brain, builder, medium, it, obs,
                          priorities, winners);
        break;
    }
    if (trace) trace->si.push_back(world.similarity());
  }
  return world.similarity();
}

Trainer train_experiment(const ExperimentConfig& cfg,
                         const TargetShape& shape) {
  ExperimentConfig local = cfg;
  apply_method_preset(local);
  local.validate();
  Trainer trainer(shape, local.trainer);
  if (!method_is_learned(local.method)) return trainer;

  trainer.generate_default_samples(local.sample_count);
  std::vector<SessionMetrics> rows;
  rows.reserve(static_cast<size_t>(local.trainer.rounds) * 2);
  for (int r = 0; r < local.trainer.rounds; ++r) {
    for (SessionMetrics& m : trainer.run_training_round(r)) {
      rows.push_back(m);
    }
    if (!local.out_dir.empty() && local.checkpoint_every > 0 &&
        (r + 1) % local.checkpoint_every == 0) {
      std::ofstream os(local.out_dir + "/round_" + std::to_string(r + 1) +
                       ".ckpt");
      save_brain(trainer.virtual_brain(), os);
    }
  }
  if (!local.out_dir.empty()) {
    write_metrics(rows, local.out_dir + "/training.csv");
  }
  return trainer;
}

void export_frame(const WorldState& w, const PheromoneMap& medium,
                  const std::string& stem) {
  {
    std::ofstream os(stem + "_world.pgm");
    if (!os) throw std::runtime_error("cannot write " + stem + "_world.pgm");
    w.write_pgm(os);
  }
  {
    std::ofstream os(stem + "_field.pgm");
    if (!os) throw std::runtime_error("cannot write " + stem + "_field.pgm");
    medium.write_pgm(os);
  }
}

void write_metrics(const std::vector<SessionMetrics>& rows,
                   const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write metrics file: " + path);
  os << "round,session,steps,si_start,si_end,value_loss,policy_loss\n";
  char buf[256];
  for (const SessionMetrics& m : rows) {
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%.17g,%.17g,%.17g,%.17g\n",
                  m.round, m.session, m.steps, m.si_start, m.si_end,
                  m.value_loss_mean, m.policy_loss_mean);
    os << buf;
  }
}

void write_test_trace(const TestTrace& trace, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write trace file: " + path);
  os << "iteration,si\n";
  char buf[64];
  for (size_t i = 0; i < trace.si.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i, trace.si[i]);
    os << buf;
  }
}

}  // namespace sirl
