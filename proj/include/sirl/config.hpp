#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>

#include "sirl/trainer.hpp"

namespace sirl {

enum class Method {
  Sirl,
  SirlA,
  SirlWs,
  Jl,
  Irl,
  JlO,
  IrlO,
  Cs,
  Dc,
  Oracle
};

Method parse_method(const std::string& name);  // e.g. "SIRL", "jl-o"
std::string method_name(Method m);
bool method_is_learned(Method m);  // needs trained networks

// "[section]" + "key = value" text; keys are exposed as "section.key".
// '#' and ';' start comments.
class KeyValues {
 public:
  static KeyValues parse(std::istream& is);
  static KeyValues parse_file(const std::string& path);

  bool has(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback) const;
  double get(const std::string& key, double fallback) const;
  int get(const std::string& key, int fallback) const;
  uint64_t get(const std::string& key, uint64_t fallback) const;
  bool get(const std::string& key, bool fallback) const;

  const std::map<std::string, std::string>& entries() const {
    return values_;
  }

 private:
  std::map<std::string, std::string> values_;
};

struct ExperimentConfig {
  Method method = Method::Sirl;
  std::string shape_path;
  int threshold = 128;   // binarization cut for image shapes
  int image_index = 0;   // image within an IDX file
  uint64_t seed = 0;
  bool seed_set = false;  // a seed must be given explicitly
  int test_iterations = 100;
  int sample_count = 2000;
  int cs_k = 0;  // movers per iteration, required for CS
  int checkpoint_every = 0;
  std::string out_dir;
  std::string checkpoint_path;
  TrainerConfig trainer;
  DcRewardTable dc_rewards;

  void validate() const;
};

// Reads the experiment file; missing keys keep their defaults.
ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig experiment_from_keyvalues(const KeyValues& kv);

// Locks the method-defining switches (observation kind, stigmergy, rewards,
// conflict avoidance, trained modules) onto the trainer config.
void apply_method_preset(ExperimentConfig& cfg);

// Coordination range used when testing the method.
CoordinationRange test_coordination_range(Method m);

}  // namespace sirl
