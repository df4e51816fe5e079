#include "sirl/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sirl {

void federal_step(FederalOptimizer& opt, std::vector<double>& params,
                  std::span<const GradSet> grads) {
  if (grads.empty()) return;
  const size_t n = params.size();
  for (const GradSet& g : grads) {
    if (g.size() != n) {
      throw std::invalid_argument("gradient shape does not match parameters");
    }
  }
  if (opt.velocity.empty()) opt.velocity.assign(n, 0.0);
  if (opt.velocity.size() != n) {
    throw std::invalid_argument("optimizer bound to a different shape");
  }
  // Running mean keeps identical gradients bit-exact for any agent count.
  std::vector<double>& mean = opt.mean_scratch;
  mean.assign(n, 0.0);
  for (size_t k = 0; k < grads.size(); ++k) {
    const double* g = grads[k].data();
    const double inv = 1.0 / static_cast<double>(k + 1);
    for (size_t p = 0; p < n; ++p) mean[p] += (g[p] - mean[p]) * inv;
  }
  for (size_t p = 0; p < n; ++p) {
    opt.velocity[p] =
        opt.momentum * opt.velocity[p] - opt.learning_rate * mean[p];
    params[p] += opt.velocity[p];
  }
  ++opt.steps;
}

void TrainerConfig::validate() const {
  if (t_max < 1) throw std::invalid_argument("t_max must be at least 1");
  if (rounds < 0) throw std::invalid_argument("rounds must be non-negative");
  if (target_sync_period < 1) {
    throw std::invalid_argument("target_sync_period must be at least 1");
  }
  if (!(learning_rate > 0.0)) {
    throw std::invalid_argument("learning_rate must be positive");
  }
  if (momentum < 0.0 || momentum >= 1.0) {
    throw std::invalid_argument("momentum must lie in [0,1)");
  }
  medium.validate();
  discount.validate();
}

std::vector<Sample> generate_samples(const TargetShape& shape, int count,
                                     const MediumConfig& medium,
                                     const DistanceWeightParams& weight,
                                     Rng& rng) {
  if (count < 1) throw std::invalid_argument("sample count must be positive");
  constexpr int kWalkLength = 60;  // iterations before a fresh placement
  std::vector<Sample> samples;
  samples.reserve(count);
  PheromoneMap map(shape.width(), shape.height());
  std::vector<AttractorView> views;
  while (static_cast<int>(samples.size()) < count) {
    WorldState w = WorldState::random_placement(shape, rng);
    map.clear();
    for (int it = 0;
         it < kWalkLength && static_cast<int>(samples.size()) < count; ++it) {
      for (int i = 0; i < w.agent_count(); ++i) {
        const Cell pos = w.position(i);
        attractor_views(map, pos, medium, views);
        const std::optional<AttractorView> att =
            select_attractor(views, rng, weight);
        // move weights: favor steps that close in on the attractor
        double wsum = 0.0;
        double mw[4];
        for (int k = 0; k < 4; ++k) {
          const Cell d = action_delta(static_cast<Action>(k));
          const Cell c{pos.x + d.x, pos.y + d.y};
          mw[k] = att && euclidean(c, att->cell) < att->distance ? 3.0 : 1.0;
          wsum += mw[k];
        }
        double u = rng.next_double() * wsum;
        int pick = 3;
        for (int k = 0; k < 4; ++k) {
          u -= mw[k];
          if (u < 0.0) {
            pick = k;
            break;
          }
        }
        w.apply_action(i, static_cast<Action>(pick));  // blocked: stays
        const Cell now = w.position(i);
        map.deposit(now, shape.labeled(now), medium);
      }
      map.decay_occupied(w.positions(), medium);
      samples.push_back(w.positions());
    }
  }
  return samples;
}

ObservationBuilder::ObservationBuilder(ObservationKind kind,
                                       bool use_stigmergy, int agent_count)
    : kind_(kind),
      stigmergy_(use_stigmergy),
      last_(agent_count),
      att_(agent_count) {}

void ObservationBuilder::reset() {
  std::fill(last_.begin(), last_.end(), LocalState{});
  std::fill(att_.begin(), att_.end(), std::nullopt);
}

void ObservationBuilder::form(const WorldState& w, const PheromoneMap& medium,
                              int agent, const MediumConfig& mcfg,
                              const DistanceWeightParams& wcfg, Rng& rng,
                              std::vector<double>& obs) {
  static thread_local std::vector<AttractorView> views;
  std::optional<AttractorView> att;
  if (stigmergy_) {
    attractor_views(medium, w.position(agent), mcfg, views);
    att = select_attractor(views, rng, wcfg);
  }
  LocalState s = build_local_state(w, agent, att, mcfg.sense_radius);
  if (!stigmergy_) {
    // coordinate observation: the agent's own position, scaled to [0,1]
    const Cell pos = w.position(agent);
    const int gw = w.shape().width(), gh = w.shape().height();
    s.v[4] = gw > 1 ? static_cast<double>(pos.x) / (gw - 1) : 0.0;
    s.v[5] = gh > 1 ? static_cast<double>(pos.y) / (gh - 1) : 0.0;
  }
  att_[agent] = att;
  last_[agent] = s;

  if (kind_ == ObservationKind::Local) {
    obs.assign(s.v.begin(), s.v.end());
    return;
  }
  // cascaded: own state first, then the Moore neighbors' latest states in
  // row-major scan order, zero blocks where no agent sits
  obs.assign(63, 0.0);
  std::copy(s.v.begin(), s.v.end(), obs.begin());
  const Cell pos = w.position(agent);
  int slot = 1;
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      if (dx == 0 && dy == 0) continue;
      const Cell c{pos.x + dx, pos.y + dy};
      if (w.shape().in_grid(c)) {
        const int k = w.occupant_at(c);
        if (k >= 0) {
          std::copy(last_[k].v.begin(), last_[k].v.end(),
                    obs.begin() + slot * 7);
        }
      }
      ++slot;
    }
  }
}

Trainer::Trainer(TargetShape shape, TrainerConfig cfg)
    : shape_(std::move(shape)),
      cfg_(std::move(cfg)),
      virtual_(AgentBrain{Mlp({1, 1}), Mlp({1, 1}), Mlp({1, 1}), Mlp({1, 1}),
                          Mlp({1, 1})}),
      medium_(shape_.width(), shape_.height()),
      builder_(cfg_.observation, cfg_.use_stigmergy, shape_.agent_count()) {
  cfg_.validate();
  const int n = shape_.agent_count();
  Rng init = derive_rng(cfg_.seed, 14);
  virtual_ = AgentBrain::random_init(builder_.width(), cfg_.hidden, init);
  brains_.assign(n, virtual_);
  eval_opt_ = {cfg_.learning_rate, cfg_.momentum, {}, 0, {}};
  policy_opt_ = eval_opt_;
  bvalue_opt_ = eval_opt_;

  obs_.resize(n);
  next_obs_.resize(n);
  rngs_.assign(n, Rng(0));
  priorities_.assign(n, 0.0);
  winners_.assign(n, 1);
  actions_.assign(n, Action::Stop);
  rewards_.assign(n, 0.0);
  was_labeled_.assign(n, 0);
  is_labeled_.assign(n, 0);
  grads_.resize(n);
  grads2_.resize(n);
}

void Trainer::set_samples(std::vector<Sample> samples) {
  for (const Sample& s : samples) {
    if (static_cast<int>(s.size()) != shape_.agent_count()) {
      throw std::invalid_argument("sample size does not match agent count");
    }
  }
  samples_ = std::move(samples);
}

void Trainer::generate_default_samples(int count) {
  Rng rng = derive_rng(cfg_.seed, 13);
  set_samples(
      generate_samples(shape_, count, cfg_.medium, cfg_.weight, rng));
}

void Trainer::broadcast(Mlp AgentBrain::* net) {
  const std::vector<double>& src = (virtual_.*net).params();
  for (AgentBrain& b : brains_) (b.*net).params() = src;
}

double Trainer::phase_reward(int agent, double dsi) const {
  if (cfg_.reward == RewardKind::Origin) {
    return origin_reward(was_labeled_[agent] != 0, is_labeled_[agent] != 0,
                         dsi, cfg_.origin);
  }
  return rewards_[agent];
}

SessionMetrics Trainer::run_evaluation_session(WorldState& world, int round) {
  return run_session(0, world, round);
}

SessionMetrics Trainer::run_behavior_session(WorldState& world, int round) {
  return run_session(1, world, round);
}

SessionMetrics Trainer::run_session(int session, WorldState& world,
                                    int round) {
  const int n = world.agent_count();
  if (n != agent_count()) {
    throw std::invalid_argument("world population does not match trainer");
  }
  builder_.reset();
  dsi_trace_.clear();
  SessionMetrics m;
  m.round = round;
  m.session = session;
  m.si_start = world.similarity();
  double vloss_sum = 0.0, ploss_sum = 0.0;
  long vloss_n = 0, ploss_n = 0;

  const uint64_t phase_tag = static_cast<uint64_t>(round) * 2 + session;
  const bool coordinated =
      session == 1 && cfg_.coordination.range != CoordinationRange::Disabled;

  for (int step = 0; step < cfg_.t_max; ++step) {
    const double si_before = world.similarity();
    auto act = [&](int i, SelectMode mode) {
      actions_[i] = select_action_cascaded(
          brains_[i], std::span<const double>(obs_[i]), mode, rngs_[i]);
      const std::optional<AttractorView>& att = builder_.attractor(i);
      was_labeled_[i] = shape_.labeled(world.position(i)) ? 1 : 0;
      world.apply_action(i, actions_[i]);
      const Cell now = world.position(i);
      if (cfg_.use_stigmergy) {
        medium_.deposit(now, shape_.labeled(now), cfg_.medium);
      }
      is_labeled_[i] = shape_.labeled(now) ? 1 : 0;
      rewards_[i] = att ? medium_reward(att->distance,
                                        euclidean(now, att->cell),
                                        cfg_.discount)
                        : 0.0;
    };

    if (session == 0) {
      // Greedy sweep: each agent observes the partially updated world at
      // its own turn, acts, and marks the medium.
      for (int i = 0; i < n; ++i) {
        rngs_[i] = derive_rng(cfg_.seed, 10, phase_tag, step, i);
        builder_.form(world, medium_, i, cfg_.medium, cfg_.weight, rngs_[i],
                      obs_[i]);
        winners_[i] = 1;
        act(i, SelectMode::Greedy);
      }
    } else {
      // Synchronous priority exchange on the pre-move world, then the
      // winners act in index order.
      for (int i = 0; i < n; ++i) {
        rngs_[i] = derive_rng(cfg_.seed, 10, phase_tag, step, i);
        builder_.form(world, medium_, i, cfg_.medium, cfg_.weight, rngs_[i],
                      obs_[i]);
        if (coordinated) {
          priorities_[i] =
              value_forward(brains_[i].eval_value, std::span<const double>(obs_[i]));
        }
      }
      if (coordinated) {
        winners_ = decide_winners(priorities_, world, cfg_.coordination);
      } else {
        std::fill(winners_.begin(), winners_.end(), uint8_t{1});
      }
      for (int i = 0; i < n; ++i) {
        if (winners_[i]) act(i, SelectMode::Stochastic);
      }
    }

    // next observations for the gradient step, formed after every mover of
    // this phase has settled (skipped when the return cannot use them)
    const bool terminal = step == cfg_.t_max - 1;
    const bool bootstrap = (session == 0 ? cfg_.discount.gamma2 != 0.0
                                         : cfg_.discount.gamma1 != 0.0) &&
                           !terminal;
    for (int i = 0; i < n; ++i) {
      if (!winners_[i] || !bootstrap) continue;
      Rng r = derive_rng(cfg_.seed, 11, phase_tag, step, i);
      builder_.form(world, medium_, i, cfg_.medium, cfg_.weight, r,
                    next_obs_[i]);
    }

    if (cfg_.use_stigmergy) {
      medium_.decay_occupied(world.positions(), cfg_.medium);
    }

    const double si_after = world.similarity();
    const double dsi = si_after - si_before;
    dsi_trace_.push_back(dsi);
    m.steps = step + 1;
    if (dsi > 0.0) break;
    if (session == 0) {
      for (int i = 0; i < n; ++i) {
        const double target = deterministic_return(
            phase_reward(i, dsi), std::span<const double>(next_obs_[i]),
            terminal, brains_[i], cfg_.discount);
        vloss_sum += value_loss_grad(brains_[i].eval_value,
                                     std::span<const double>(obs_[i]), target,
                                     grads_[i]);
        ++vloss_n;
      }
      federal_step(eval_opt_, virtual_.eval_value.params(),
                   std::span<const GradSet>(grads_.data(), n));
      broadcast(&AgentBrain::eval_value);
      if (eval_opt_.steps % cfg_.target_sync_period == 0) {
        sync_target(virtual_.eval_value, virtual_.eval_target);
        broadcast(&AgentBrain::eval_target);
      }
    } else {
      int nt = 0;
      for (int i = 0; i < n; ++i) {
        if (!winners_[i]) continue;
        const double r = phase_reward(i, dsi);
        const double ret =
            stochastic_return(r, std::span<const double>(next_obs_[i]),
                              terminal, brains_[i], cfg_.discount);
        const double baseline = value_forward(
            brains_[i].behav_value, std::span<const double>(obs_[i]));
        ploss_sum += policy_loss_grad(brains_[i].policy,
                                      std::span<const double>(obs_[i]),
                                      actions_[i], ret - baseline, grads_[nt]);
        vloss_sum += value_loss_grad(brains_[i].behav_value,
                                     std::span<const double>(obs_[i]), ret,
                                     grads2_[nt]);
        ++ploss_n;
        ++vloss_n;
        ++nt;
      }
      if (coordinated && nt == 0 && n > 0) {
        throw std::logic_error("priority exchange produced no winner");
      }
      federal_step(policy_opt_, virtual_.policy.params(),
                   std::span<const GradSet>(grads_.data(), nt));
      broadcast(&AgentBrain::policy);
      federal_step(bvalue_opt_, virtual_.behav_value.params(),
                   std::span<const GradSet>(grads2_.data(), nt));
      broadcast(&AgentBrain::behav_value);
      if (nt > 0 && bvalue_opt_.steps % cfg_.target_sync_period == 0) {
        sync_target(virtual_.behav_value, virtual_.behav_target);
        broadcast(&AgentBrain::behav_target);
      }
    }
  }

  m.si_end = world.similarity();
  m.value_loss_mean = vloss_n > 0 ? vloss_sum / vloss_n : 0.0;
  m.policy_loss_mean = ploss_n > 0 ? ploss_sum / ploss_n : 0.0;
  return m;
}

std::vector<SessionMetrics> Trainer::run_training_round(int round) {
  if (samples_.empty()) {
    throw std::logic_error("no samples: generate or set them before training");
  }
  Rng draw = derive_rng(cfg_.seed, 12, static_cast<uint64_t>(round));
  const Sample& sample =
      samples_[draw.next_below(static_cast<uint32_t>(samples_.size()))];

  std::vector<SessionMetrics> out;
  if (cfg_.train_evaluation) {
    WorldState world(shape_, sample);
    out.push_back(run_evaluation_session(world, round));
  }
  WorldState world(shape_, sample);
  out.push_back(run_behavior_session(world, round));
  return out;
}

std::vector<SessionMetrics> Trainer::train() {
  std::vector<SessionMetrics> all;
  all.reserve(static_cast<size_t>(cfg_.rounds) * 2);
  for (int r = 0; r < cfg_.rounds; ++r) {
    for (SessionMetrics& m : run_training_round(r)) all.push_back(m);
  }
  return all;
}

}  // namespace sirl
