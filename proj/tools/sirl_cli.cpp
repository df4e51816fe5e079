// Command-line front end: `train` fits the configured method's networks and
// writes metrics + a checkpoint; `test` runs the deployment loop and reports
// the final similarity.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sirl/experiment.hpp"
#include "sirl/shape_io.hpp"

namespace {

struct CliOverrides {
  std::string config;
  std::string method;
  std::string shape;
  std::string out;
  std::string checkpoint;
  std::optional<uint64_t> seed;
  std::optional<int> rounds;
  std::optional<int> iters;
  std::optional<int> samples;
  std::optional<int> cs_k;
};

void add_common_flags(CLI::App* cmd, CliOverrides& o) {
  cmd->add_option("--config", o.config, "experiment file (key = value)");
  cmd->add_option("--method", o.method,
                  "SIRL, SIRL-A, SIRL-WS, JL, IRL, JL-O, IRL-O, CS, DC, "
                  "Oracle");
  cmd->add_option("--shape", o.shape, "target bitmap (text or IDX image)");
  cmd->add_option("--seed", o.seed, "run seed (required here or in the file)");
  cmd->add_option("--rounds", o.rounds, "training rounds");
  cmd->add_option("--iters", o.iters, "test iterations");
  cmd->add_option("--samples", o.samples, "training start-sample count");
  cmd->add_option("--cs-k", o.cs_k, "movers per iteration for CS");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--checkpoint", o.checkpoint, "checkpoint path");
}

sirl::ExperimentConfig build_config(const CliOverrides& o) {
  sirl::ExperimentConfig cfg;
  if (!o.config.empty()) cfg = sirl::load_experiment_config(o.config);
  if (!o.method.empty()) cfg.method = sirl::parse_method(o.method);
  if (!o.shape.empty()) cfg.shape_path = o.shape;
  if (o.seed) {
    cfg.seed = *o.seed;
    cfg.seed_set = true;
  }
  if (o.rounds) cfg.trainer.rounds = *o.rounds;
  if (o.iters) cfg.test_iterations = *o.iters;
  if (o.samples) cfg.sample_count = *o.samples;
  if (o.cs_k) cfg.cs_k = *o.cs_k;
  if (!o.out.empty()) cfg.out_dir = o.out;
  if (!o.checkpoint.empty()) cfg.checkpoint_path = o.checkpoint;
  sirl::apply_method_preset(cfg);
  cfg.validate();
  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
  }
  return cfg;
}

int run_train(const CliOverrides& o) {
  sirl::ExperimentConfig cfg = build_config(o);
  if (!sirl::method_is_learned(cfg.method)) {
    std::cerr << sirl::method_name(cfg.method) << " has nothing to train\n";
    return 2;
  }
  const sirl::TargetShape shape =
      sirl::load_shape(cfg.shape_path, cfg.threshold, cfg.image_index);
  std::printf("training %s on %dx%d shape, %d agents, %d rounds, seed %llu\n",
              sirl::method_name(cfg.method).c_str(), shape.width(),
              shape.height(), shape.agent_count(), cfg.trainer.rounds,
              static_cast<unsigned long long>(cfg.seed));
  sirl::Trainer trainer = sirl::train_experiment(cfg, shape);
  const std::string ckpt = cfg.checkpoint_path.empty()
                               ? (cfg.out_dir.empty() ? "model.ckpt"
                                                      : cfg.out_dir +
                                                            "/model.ckpt")
                               : cfg.checkpoint_path;
  std::ofstream os(ckpt);
  if (!os) {
    std::cerr << "cannot write checkpoint: " << ckpt << "\n";
    return 1;
  }
  sirl::save_brain(trainer.virtual_brain(), os);
  std::printf("checkpoint written to %s\n", ckpt.c_str());
  return 0;
}

int run_test_cmd(const CliOverrides& o) {
  sirl::ExperimentConfig cfg = build_config(o);
  const sirl::TargetShape shape =
      sirl::load_shape(cfg.shape_path, cfg.threshold, cfg.image_index);
  std::optional<sirl::AgentBrain> brain;
  if (sirl::method_is_learned(cfg.method)) {
    if (cfg.checkpoint_path.empty()) {
      std::cerr << "a checkpoint is required to test "
                << sirl::method_name(cfg.method) << "\n";
      return 2;
    }
    std::ifstream is(cfg.checkpoint_path);
    if (!is) {
      std::cerr << "cannot open checkpoint: " << cfg.checkpoint_path << "\n";
      return 1;
    }
    brain = sirl::load_brain(is);
  }
  sirl::WorldState world = sirl::initial_placement(shape, cfg.seed);
  sirl::PheromoneMap medium(shape.width(), shape.height());
  sirl::TestTrace trace;
  const double si =
      sirl::run_test(cfg, world, medium, brain ? &*brain : nullptr, &trace);
  if (!cfg.out_dir.empty()) {
    sirl::write_test_trace(trace, cfg.out_dir + "/test.csv");
    sirl::export_frame(world, medium, cfg.out_dir + "/final");
  }
  std::printf("final similarity: %.6f (%d/%d agents placed)\n", si,
              static_cast<int>(si * shape.agent_count() + 0.5),
              shape.agent_count());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stigmergic swarm shape-formation trainer"};
  app.require_subcommand(1);
  CliOverrides o;
  CLI::App* train = app.add_subcommand("train", "fit a method's networks");
  add_common_flags(train, o);
  CLI::App* test = app.add_subcommand("test", "run the deployment loop");
  add_common_flags(test, o);
  CLI11_PARSE(app, argc, argv);
  try {
    if (train->parsed()) return run_train(o);
    return run_test_cmd(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
