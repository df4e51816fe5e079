#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "sirl/agent.hpp"

using namespace sirl;

namespace {

LocalState make_state(double up, double right, double down, double left,
                      double ax, double ay, double labeled) {
  LocalState s;
  s.v = {up, right, down, left, ax, ay, labeled};
  return s;
}

// Each of the five nets gets a distinct constant output via its head bias,
// so tests can tell exactly which net a code path consulted.
AgentBrain constant_brain(double ev, double et, double bv, double bt) {
  AgentBrain b{Mlp({7, 1}), Mlp({7, 1}), Mlp({7, 5}), Mlp({7, 1}),
               Mlp({7, 1})};
  b.eval_value.params()[7] = ev;
  b.eval_target.params()[7] = et;
  b.behav_value.params()[7] = bv;
  b.behav_target.params()[7] = bt;
  return b;
}

}  // namespace

TEST_CASE("action priority is the evaluation value and nothing else") {
  const LocalState s = make_state(1, 0, 0, 0, 0.5, -0.25, 1);

  AgentBrain zero{Mlp({7, 1}), Mlp({7, 1}), Mlp({7, 5}), Mlp({7, 1}),
                  Mlp({7, 1})};
  CHECK(action_priority(zero, s) == 0.0);

  Rng rng(7);
  AgentBrain a = AgentBrain::random_init(7, {8}, rng);
  AgentBrain b = a;
  b.policy = Mlp::random_init({7, 8, 5}, rng);  // different policy
  b.behav_value = Mlp::random_init({7, 8, 1}, rng);
  CHECK(action_priority(a, s) == action_priority(b, s));
  CHECK(action_priority(a, s) == value_forward(a.eval_value, s));
}

TEST_CASE("sync_targets copies both value nets onto their targets") {
  Rng rng(21);
  AgentBrain b = AgentBrain::random_init(7, {6, 6}, rng);
  CHECK(b.eval_target.params() == b.eval_value.params());  // synced at init
  b.eval_value.params()[0] += 0.5;
  b.behav_value.params()[3] -= 0.25;
  CHECK(b.eval_target.params() != b.eval_value.params());
  b.sync_targets();
  CHECK(b.eval_target.params() == b.eval_value.params());
  CHECK(b.behav_target.params() == b.behav_value.params());
}

TEST_CASE("greedy selection takes the argmax with lowest-index ties") {
  const LocalState s = make_state(0, 0, 0, 0, 0, 0, 0);
  Rng rng(1);

  AgentBrain zero{Mlp({7, 1}), Mlp({7, 1}), Mlp({7, 5}), Mlp({7, 1}),
                  Mlp({7, 1})};
  CHECK(select_action(zero, s, SelectMode::Greedy, rng) == Action::Up);

  AgentBrain biased = zero;
  biased.policy.params()[37] = 1.0;  // third output bias
  CHECK(select_action(biased, s, SelectMode::Greedy, rng) == Action::Down);

  // Determinism: the greedy path must not consume randomness.
  Rng r1(42), r2(42);
  CHECK(select_action(biased, s, SelectMode::Greedy, r1) ==
        select_action(biased, s, SelectMode::Greedy, r2));
  CHECK(r1.next_u64() == r2.next_u64());
}

TEST_CASE("greedy choice is invariant to sharpening the head layer") {
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    AgentBrain b = AgentBrain::random_init(7, {8}, rng);
    LocalState s = make_state(rng.next_below(2), rng.next_below(2),
                              rng.next_below(2), rng.next_below(2),
                              rng.next_in(-1, 1), rng.next_in(-1, 1),
                              rng.next_below(2));
    const std::vector<double> pi = policy_forward(b.policy, s);
    int best = 0;
    for (int i = 1; i < 5; ++i)
      if (pi[i] > pi[best]) best = i;
    bool unique = true;
    for (int i = 0; i < 5; ++i)
      if (i != best && pi[i] == pi[best]) unique = false;
    if (!unique) continue;

    Rng unused(0);
    const Action before = select_action(b, s, SelectMode::Greedy, unused);
    const size_t head = b.policy.layer_offset(b.policy.layer_count() - 1);
    for (size_t p = head; p < b.policy.param_count(); ++p)
      b.policy.params()[p] *= 2.0;
    CHECK(select_action(b, s, SelectMode::Greedy, unused) == before);
  }
}

TEST_CASE("stochastic selection matches the policy distribution") {
  const LocalState s = make_state(0, 0, 0, 0, 0, 0, 0);
  AgentBrain zero{Mlp({7, 1}), Mlp({7, 1}), Mlp({7, 5}), Mlp({7, 1}),
                  Mlp({7, 1})};
  Rng rng(2024);
  const int draws = 100000;
  std::array<int, 5> counts{};
  for (int i = 0; i < draws; ++i)
    ++counts[static_cast<int>(select_action(zero, s, SelectMode::Stochastic,
                                            rng))];
  // Uniform 0.2 each; 3 sigma of a Bernoulli(0.2) mean over 1e5 draws.
  const double tol = 3.0 * std::sqrt(0.2 * 0.8 / draws);
  for (int c : counts)
    CHECK(std::abs(static_cast<double>(c) / draws - 0.2) <= tol);
}

TEST_CASE("cascaded selection agrees with the local-state path on 7 inputs") {
  Rng rng(5);
  const AgentBrain b = AgentBrain::random_init(7, {8}, rng);
  for (int trial = 0; trial < 20; ++trial) {
    LocalState s = make_state(rng.next_below(2), rng.next_below(2),
                              rng.next_below(2), rng.next_below(2),
                              rng.next_in(-1, 1), rng.next_in(-1, 1),
                              rng.next_below(2));
    Rng r1(trial), r2(trial);
    CHECK(select_action(b, s, SelectMode::Stochastic, r1) ==
          select_action_cascaded(b, std::span<const double>(s.data(), 7),
                                 SelectMode::Stochastic, r2));
  }
}

TEST_CASE("approach reward pays only for getting closer") {
  DiscountConfig cfg;  // reward_scale = 1
  CHECK(medium_reward(3.0, 2.0, cfg) == 1.0);
  CHECK(medium_reward(2.0, 3.0, cfg) == 0.0);
  CHECK(medium_reward(2.5, 2.5, cfg) == 0.0);
  cfg.reward_scale = 2.0;
  CHECK(medium_reward(3.0, 2.0, cfg) == 2.0);
}

TEST_CASE("bootstrapped returns use the right target net and discount") {
  // eval_target outputs 2, behav_target outputs 3.
  const AgentBrain b = constant_brain(0.7, 2.0, 0.4, 3.0);
  const LocalState next = make_state(0, 0, 0, 0, 0, 0, 1);
  DiscountConfig cfg{0.5, 0.9, 1.0};  // gamma1=0.5, gamma2=0.9

  CHECK(deterministic_return(1.0, std::optional<LocalState>(next), b, cfg) ==
        doctest::Approx(1.0 + 0.9 * 2.0).epsilon(1e-15));
  CHECK(stochastic_return(1.0, std::optional<LocalState>(next), b, cfg) ==
        doctest::Approx(1.0 + 0.5 * 3.0).epsilon(1e-15));

  // Terminal: no bootstrap term at all.
  CHECK(deterministic_return(1.0, std::nullopt, b, cfg) == 1.0);
  CHECK(stochastic_return(1.0, std::nullopt, b, cfg) == 1.0);

  // Zero discount kills the bootstrap even when next_s exists.
  cfg.gamma2 = 0.0;
  CHECK(deterministic_return(1.0, std::optional<LocalState>(next), b, cfg) ==
        1.0);

  // Raw-observation variants agree with the local-state path.
  cfg.gamma2 = 0.9;
  const std::span<const double> xs(next.data(), 7);
  CHECK(deterministic_return(1.0, xs, false, b, cfg) ==
        deterministic_return(1.0, std::optional<LocalState>(next), b, cfg));
  CHECK(stochastic_return(1.0, xs, false, b, cfg) ==
        stochastic_return(1.0, std::optional<LocalState>(next), b, cfg));
  CHECK(deterministic_return(1.0, xs, true, b, cfg) == 1.0);
}

TEST_CASE("discount config validation") {
  DiscountConfig bad;
  bad.gamma1 = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = DiscountConfig{};
  bad.gamma2 = -0.1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = DiscountConfig{};
  bad.reward_scale = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  DiscountConfig good{0.9, 0.0, 1.0};
  CHECK_NOTHROW(good.validate());
}

TEST_CASE("brain checkpoints round-trip bit for bit") {
  Rng rng(77);
  const AgentBrain b = AgentBrain::random_init(7, {16, 16}, rng);
  std::stringstream buf;
  save_brain(b, buf);
  const AgentBrain back = load_brain(buf);
  CHECK(back.eval_value.params() == b.eval_value.params());
  CHECK(back.eval_target.params() == b.eval_target.params());
  CHECK(back.policy.params() == b.policy.params());
  CHECK(back.behav_value.params() == b.behav_value.params());
  CHECK(back.behav_target.params() == b.behav_target.params());
  CHECK(back.policy.topology() == b.policy.topology());

  std::stringstream junk("garbage");
  CHECK_THROWS_AS(load_brain(junk), std::runtime_error);
}
