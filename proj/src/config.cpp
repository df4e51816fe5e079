#include "sirl/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sirl {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(std::stoi(item));
  }
  return out;
}

}  // namespace

Method parse_method(const std::string& name) {
  const std::string n = lower(trim(name));
  if (n == "sirl") return Method::Sirl;
  if (n == "sirl-a" || n == "sirl_a") return Method::SirlA;
  if (n == "sirl-ws" || n == "sirl_ws") return Method::SirlWs;
  if (n == "jl") return Method::Jl;
  if (n == "irl") return Method::Irl;
  if (n == "jl-o" || n == "jl_o") return Method::JlO;
  if (n == "irl-o" || n == "irl_o") return Method::IrlO;
  if (n == "cs") return Method::Cs;
  if (n == "dc") return Method::Dc;
  if (n == "oracle") return Method::Oracle;
  throw std::invalid_argument("unknown method: " + name);
}

std::string method_name(Method m) {
  switch (m) {
    case Method::Sirl: return "SIRL";
    case Method::SirlA: return "SIRL-A";
    case Method::SirlWs: return "SIRL-WS";
    case Method::Jl: return "JL";
    case Method::Irl: return "IRL";
    case Method::JlO: return "JL-O";
    case Method::IrlO: return "IRL-O";
    case Method::Cs: return "CS";
    case Method::Dc: return "DC";
    case Method::Oracle: return "Oracle";
  }
  return "?";
}

bool method_is_learned(Method m) {
  switch (m) {
    case Method::Cs:
    case Method::Dc:
    case Method::Oracle:
      return false;
    default:
      return true;
  }
}

KeyValues KeyValues::parse(std::istream& is) {
  KeyValues kv;
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const size_t hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw std::runtime_error("line " + std::to_string(lineno) +
                                 ": unterminated section header");
      }
      section = lower(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("line " + std::to_string(lineno) +
                               ": expected key = value");
    }
    const std::string key = lower(trim(line.substr(0, eq)));
    if (key.empty()) {
      throw std::runtime_error("line " + std::to_string(lineno) +
                               ": empty key");
    }
    const std::string full = section.empty() ? key : section + "." + key;
    kv.values_[full] = trim(line.substr(eq + 1));
  }
  return kv;
}

KeyValues KeyValues::parse_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config file: " + path);
  try {
    return parse(is);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

bool KeyValues::has(const std::string& key) const {
  return values_.count(lower(key)) > 0;
}

std::string KeyValues::get(const std::string& key,
                           const std::string& fallback) const {
  auto it = values_.find(lower(key));
  return it == values_.end() ? fallback : it->second;
}

double KeyValues::get(const std::string& key, double fallback) const {
  auto it = values_.find(lower(key));
  if (it == values_.end()) return fallback;
  try {
    size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("config value " + key + " is not a number: " +
                             it->second);
  }
}

int KeyValues::get(const std::string& key, int fallback) const {
  auto it = values_.find(lower(key));
  if (it == values_.end()) return fallback;
  try {
    size_t pos = 0;
    const int v = std::stoi(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("config value " + key + " is not an integer: " +
                             it->second);
  }
}

uint64_t KeyValues::get(const std::string& key, uint64_t fallback) const {
  auto it = values_.find(lower(key));
  if (it == values_.end()) return fallback;
  try {
    size_t pos = 0;
    const unsigned long long v = std::stoull(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("config value " + key +
                             " is not an unsigned integer: " + it->second);
  }
}

bool KeyValues::get(const std::string& key, bool fallback) const {
  auto it = values_.find(lower(key));
  if (it == values_.end()) return fallback;
  const std::string v = lower(it->second);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::runtime_error("config value " + key + " is not a boolean: " +
                           it->second);
}

void ExperimentConfig::validate() const {
  if (shape_path.empty()) {
    throw std::invalid_argument("a shape file is required");
  }
  if (!seed_set) throw std::invalid_argument("a seed is required");
  if (test_iterations < 0) {
    throw std::invalid_argument("test iterations must be non-negative");
  }
  if (method == Method::Cs && cs_k < 1) {
    throw std::invalid_argument("CS requires movers-per-iteration k >= 1");
  }
  if (threshold < 0 || threshold > 255) {
    throw std::invalid_argument("threshold must lie in [0,255]");
  }
  trainer.validate();
}

ExperimentConfig experiment_from_keyvalues(const KeyValues& kv) {
  ExperimentConfig cfg;
  cfg.method = parse_method(kv.get("experiment.method", std::string("SIRL")));
  cfg.shape_path = kv.get("experiment.shape", cfg.shape_path);
  cfg.threshold = kv.get("experiment.threshold", cfg.threshold);
  cfg.image_index = kv.get("experiment.image_index", cfg.image_index);
  if (kv.has("experiment.seed")) {
    cfg.seed = kv.get("experiment.seed", uint64_t{0});
    cfg.seed_set = true;
  }
  cfg.test_iterations =
      kv.get("experiment.test_iterations", cfg.test_iterations);
  cfg.sample_count = kv.get("experiment.samples", cfg.sample_count);
  cfg.cs_k = kv.get("experiment.cs_k", cfg.cs_k);
  cfg.checkpoint_every =
      kv.get("experiment.checkpoint_every", cfg.checkpoint_every);
  cfg.out_dir = kv.get("experiment.out", cfg.out_dir);
  cfg.checkpoint_path = kv.get("experiment.checkpoint", cfg.checkpoint_path);

  TrainerConfig& t = cfg.trainer;
  t.t_max = kv.get("trainer.t_max", t.t_max);
  t.rounds = kv.get("trainer.rounds", t.rounds);
  t.target_sync_period = kv.get("trainer.target_sync", t.target_sync_period);
  t.learning_rate = kv.get("trainer.learning_rate", t.learning_rate);
  t.momentum = kv.get("trainer.momentum", t.momentum);
  if (kv.has("trainer.hidden")) {
    t.hidden = parse_int_list(kv.get("trainer.hidden", std::string()));
  }
  t.discount.gamma1 = kv.get("trainer.gamma1", t.discount.gamma1);
  t.discount.gamma2 = kv.get("trainer.gamma2", t.discount.gamma2);
  t.discount.reward_scale =
      kv.get("trainer.reward_scale", t.discount.reward_scale);
  t.origin.a3 = kv.get("trainer.origin_a3", t.origin.a3);
  t.origin.b3 = kv.get("trainer.origin_b3", t.origin.b3);

  MediumConfig& m = t.medium;
  m.deposit_amount = kv.get("medium.deposit", m.deposit_amount);
  m.discount = kv.get("medium.discount", m.discount);
  m.diffusion_rate = kv.get("medium.diffusion", m.diffusion_rate);
  m.decay_rate = kv.get("medium.decay", m.decay_rate);
  m.sense_radius = kv.get("medium.sense_radius", m.sense_radius);

  t.weight.peak = kv.get("weight.peak", t.weight.peak);
  t.weight.mean = kv.get("weight.mean", t.weight.mean);
  t.weight.sigma = kv.get("weight.sigma", t.weight.sigma);
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  return experiment_from_keyvalues(KeyValues::parse_file(path));
}

void apply_method_preset(ExperimentConfig& cfg) {
  TrainerConfig& t = cfg.trainer;
  t.seed = cfg.seed;
  switch (cfg.method) {
    case Method::Sirl:
    case Method::SirlA:
    case Method::SirlWs:
      // one trained model family; the coordination range varies at test time
      t.observation = ObservationKind::Local;
      t.use_stigmergy = true;
      t.reward = RewardKind::Medium;
      t.train_evaluation = true;
      t.coordination.range = CoordinationRange::Moore8;
      break;
    case Method::Jl:
      t.observation = ObservationKind::Cascaded;
      t.use_stigmergy = true;
      t.reward = RewardKind::Medium;
      t.train_evaluation = false;
      t.coordination.range = CoordinationRange::Disabled;
      break;
    case Method::Irl:
      t.observation = ObservationKind::Local;
      t.use_stigmergy = true;
      t.reward = RewardKind::Medium;
      t.train_evaluation = false;
      t.coordination.range = CoordinationRange::Disabled;
      break;
    case Method::JlO:
      t.observation = ObservationKind::Cascaded;
      t.use_stigmergy = false;
      t.reward = RewardKind::Origin;
      t.train_evaluation = false;
      t.coordination.range = CoordinationRange::Disabled;
      break;
    case Method::IrlO:
      t.observation = ObservationKind::Local;
      t.use_stigmergy = false;
      t.reward = RewardKind::Origin;
      t.train_evaluation = false;
      t.coordination.range = CoordinationRange::Disabled;
      break;
    case Method::Cs:
    case Method::Dc:
    case Method::Oracle:
      break;  // nothing trained
  }
}

CoordinationRange test_coordination_range(Method m) {
  switch (m) {
    case Method::Sirl:
      return CoordinationRange::Moore8;
    case Method::SirlA:
      return CoordinationRange::VonNeumann4;
    default:
      return CoordinationRange::Disabled;
  }
}

}  // namespace sirl
