#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "sirl/neuralcore.hpp"

using namespace sirl;

namespace {

std::vector<double> random_input(int n, Rng& rng) {
  std::vector<double> x(n);
  for (double& v : x) v = rng.next_in(-1.0, 1.0);
  return x;
}

// Central finite differences over every parameter of `net`.
template <typename LossFn>
double max_grad_error(Mlp net, const GradSet& g, LossFn loss) {
  const double h = 1e-5;
  double worst = 0.0;
  for (size_t p = 0; p < net.param_count(); ++p) {
    const double keep = net.params()[p];
    net.params()[p] = keep + h;
    const double up = loss(net);
    net.params()[p] = keep - h;
    const double dn = loss(net);
    net.params()[p] = keep;
    const double fd = (up - dn) / (2.0 * h);
    const double denom = std::max({std::abs(fd), std::abs(g[p]), 1e-6});
    worst = std::max(worst, std::abs(g[p] - fd) / denom);
  }
  return worst;
}

}  // namespace

TEST_CASE("a zero policy net is uniform and a zero value net is flat") {
  const Mlp policy({7, 5});
  const Mlp value({7, 1});
  Rng rng(1);
  const std::vector<double> x = random_input(7, rng);
  std::vector<double> pi;
  policy_forward(policy, x, pi);
  for (double p : pi) CHECK(p == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(value_forward(value, x) == 0.0);
}

TEST_CASE("policy outputs are valid distributions over random nets and inputs") {
  Rng rng(8);
  Mlp net = Mlp::random_init({7, 16, 5}, rng);
  for (int i = 0; i < 10000; ++i) {
    const std::vector<double> x = random_input(7, rng);
    std::vector<double> pi;
    policy_forward(net, x, pi);
    double sum = 0.0;
    for (double p : pi) {
      CHECK(p > 0.0);
      CHECK(std::isfinite(p));
      sum += p;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
  }
}

TEST_CASE("forward passes are pure and reject bad input") {
  Rng rng(3);
  const Mlp net = Mlp::random_init({7, 8, 1}, rng);
  const std::vector<double> x = random_input(7, rng);
  CHECK(value_forward(net, x) == value_forward(net, x));
  std::vector<double> bad = x;
  bad[2] = std::nan("");
  std::vector<double> out;
  CHECK_THROWS_AS(forward_raw(net, bad, out), std::invalid_argument);
  CHECK_THROWS_AS(forward_raw(net, std::vector<double>(6, 0.0), out),
                  std::invalid_argument);
}

TEST_CASE("value loss and gradient at hand-checked points") {
  GradSet g;

  SUBCASE("exact fit gives zero loss and zero gradient") {
    const Mlp net({7, 1});  // V = 0 everywhere
    const double loss =
        value_loss_grad(net, std::vector<double>(7, 0.3), 0.0, g);
    CHECK(loss == 0.0);
    for (double v : g) CHECK(v == 0.0);
  }
  SUBCASE("V=1.5 against target 2 costs 0.125") {
    Mlp net({7, 1});
    net.params()[7] = 1.5;  // bias of the scalar head
    const double loss =
        value_loss_grad(net, std::vector<double>(7, 0.0), 2.0, g);
    CHECK(loss == doctest::Approx(0.125).epsilon(1e-12));
  }
  SUBCASE("non-finite target is rejected") {
    const Mlp net({7, 1});
    CHECK_THROWS_AS(value_loss_grad(net, std::vector<double>(7, 0.0),
                                    std::nan(""), g),
                    std::invalid_argument);
  }
}

TEST_CASE("policy loss and gradient at hand-checked points") {
  GradSet g;

  SUBCASE("zero advantage zeroes the loss and the gradient") {
    Rng rng(4);
    const Mlp net = Mlp::random_init({7, 5}, rng);
    const double loss = policy_loss_grad(net, random_input(7, rng), Action::Up,
                                         0.0, g);
    CHECK(loss == 0.0);
    for (double v : g) CHECK(v == 0.0);
  }
  SUBCASE("a half-probability action at unit advantage costs ln 2") {
    Mlp net({7, 5});
    net.params()[35] = std::log(4.0);  // first output bias: softmax = 4/8
    const double loss = policy_loss_grad(net, std::vector<double>(7, 0.0),
                                         Action::Up, 1.0, g);
    CHECK(loss == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  }
}

TEST_CASE("analytic gradients match central finite differences") {
  Rng rng(123);
  double worst = 0.0;
  for (int trial = 0; trial < 12; ++trial) {
    Mlp net = Mlp::random_init({7, 6, 1}, rng);
    const std::vector<double> x = random_input(7, rng);
    const double target = rng.next_in(-2.0, 2.0);
    GradSet g;
    value_loss_grad(net, x, target, g);
    worst = std::max(worst, max_grad_error(net, g, [&](const Mlp& n) {
      GradSet scratch;
      return value_loss_grad(n, x, target, scratch);
    }));
  }
  for (int trial = 0; trial < 12; ++trial) {
    Mlp net = Mlp::random_init({7, 8, 5}, rng);
    const std::vector<double> x = random_input(7, rng);
    const Action a = static_cast<Action>(rng.next_below(5));
    const double adv = rng.next_in(-2.0, 2.0);
    GradSet g;
    policy_loss_grad(net, x, a, adv, g);
    worst = std::max(worst, max_grad_error(net, g, [&](const Mlp& n) {
      GradSet scratch;
      return policy_loss_grad(n, x, a, adv, scratch);
    }));
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("forward and backward stay finite across the input box") {
  Rng rng(55);
  Mlp policy = Mlp::random_init({7, 16, 16, 5}, rng);
  Mlp value = Mlp::random_init({7, 16, 16, 1}, rng);
  GradSet g;
  for (int i = 0; i < 500; ++i) {
    const std::vector<double> x = random_input(7, rng);
    std::vector<double> pi;
    policy_forward(policy, x, pi);
    for (double p : pi) CHECK(std::isfinite(p));
    CHECK(std::isfinite(value_forward(value, x)));
    value_loss_grad(value, x, rng.next_in(-3.0, 3.0), g);
    for (double v : g) CHECK(std::isfinite(v));
    policy_loss_grad(policy, x, static_cast<Action>(rng.next_below(5)),
                     rng.next_in(-3.0, 3.0), g);
    for (double v : g) CHECK(std::isfinite(v));
  }
}

TEST_CASE("target synchronization copies parameters bit for bit") {
  Rng rng(9);
  const Mlp src = Mlp::random_init({7, 12, 1}, rng);
  Mlp dst({7, 12, 1});

  sync_target(src, dst);
  CHECK(dst.params() == src.params());
  for (int i = 0; i < 100; ++i) {
    const std::vector<double> x = random_input(7, rng);
    CHECK(value_forward(src, x) == value_forward(dst, x));
  }
  sync_target(src, dst);  // idempotent
  CHECK(dst.params() == src.params());

  Mlp other({7, 8, 1});
  CHECK_THROWS_AS(sync_target(src, other), std::invalid_argument);
}

TEST_CASE("checkpoints round-trip exactly") {
  Rng rng(31);
  const Mlp net = Mlp::random_init({7, 16, 16, 5}, rng);
  std::stringstream buf;
  save_mlp(net, buf);
  const Mlp back = load_mlp(buf);
  CHECK(back.topology() == net.topology());
  CHECK(back.params() == net.params());

  std::stringstream junk("not a checkpoint");
  CHECK_THROWS_AS(load_mlp(junk), std::runtime_error);
}
