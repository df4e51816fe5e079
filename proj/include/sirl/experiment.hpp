#pragma once

#include <string>
#include <vector>

#include "sirl/agent.hpp"
#include "sirl/config.hpp"
#include "sirl/trainer.hpp"

namespace sirl {

// Uniform-random distinct placement from the run seed.
WorldState initial_placement(const TargetShape& shape, uint64_t seed);

// Per-iteration similarity of a test run.
struct TestTrace {
  std::vector<double> si;
};

// The deployment loop: winners of the priority exchange act greedily each
// iteration, the medium is marked and decayed, and the final similarity is
// returned. Hand-crafted methods replace the per-iteration body with their
// own step rule; `brain` may be null for them. World and medium (normally
// fresh) are advanced in place.
double run_test(const ExperimentConfig& cfg, WorldState& world,
                PheromoneMap& medium, const AgentBrain* brain,
                TestTrace* trace = nullptr);

// Runs training per the configured method, writing metrics/checkpoints
// under cfg.out_dir when set; returns the trainer holding trained networks.
// Methods without training return a trainer whose networks stay at init.
Trainer train_experiment(const ExperimentConfig& cfg, const TargetShape& shape);

// PGM snapshots of the world and the pheromone field: <stem>_world.pgm and
// <stem>_field.pgm.
void export_frame(const WorldState& w, const PheromoneMap& medium,
                  const std::string& stem);

void write_metrics(const std::vector<SessionMetrics>& rows,
                   const std::string& path);
void write_test_trace(const TestTrace& trace, const std::string& path);

}  // namespace sirl
