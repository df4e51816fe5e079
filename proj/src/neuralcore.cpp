#include "sirl/neuralcore.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace sirl {
namespace {

struct Scratch {
  // act[0] is the input copy; act[l+1] the post-activation of layer l
  // (raw for the last layer).
  std::vector<std::vector<double>> act;
  std::vector<double> delta;
  std::vector<double> delta_prev;
  std::vector<double> pi;
};

thread_local Scratch tls;

void check_input(const Mlp& net, std::span<const double> x) {
  if (static_cast<int>(x.size()) != net.input_size()) {
    throw std::invalid_argument("input size does not match network topology");
  }
  for (double v : x) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("non-finite network input");
    }
  }
}

// Fills s.act; returns the raw output vector (last element of s.act).
std::vector<double>& run_forward(const Mlp& net, std::span<const double> x,
                                 Scratch& s) {
  check_input(net, x);
  const int layers = net.layer_count();
  s.act.resize(layers + 1);
  s.act[0].assign(x.begin(), x.end());
  const std::vector<double>& p = net.params();
  for (int l = 0; l < layers; ++l) {
    const int in = net.topology()[l];
    const int out = net.topology()[l + 1];
    const double* w = p.data() + net.layer_offset(l);
    const double* b = w + static_cast<size_t>(out) * in;
    const std::vector<double>& a = s.act[l];
    std::vector<double>& z = s.act[l + 1];
    z.resize(out);
    const bool hidden = l + 1 < layers;
    for (int o = 0; o < out; ++o) {
      double acc = b[o];
      const double* row = w + static_cast<size_t>(o) * in;
      for (int i = 0; i < in; ++i) acc += row[i] * a[i];
      z[o] = hidden ? std::tanh(acc) : acc;
    }
  }
  return s.act[layers];
}

void softmax(const std::vector<double>& z, std::vector<double>& pi) {
  pi.resize(z.size());
  const double m = *std::max_element(z.begin(), z.end());
  double total = 0.0;
  for (size_t k = 0; k < z.size(); ++k) {
    pi[k] = std::exp(z[k] - m);
    total += pi[k];
  }
  for (double& v : pi) v /= total;
}

// Backpropagates s.delta (d loss / d raw output) through the net whose
// forward pass filled s.act; accumulates into g (already zero).
void run_backward(const Mlp& net, Scratch& s, GradSet& g) {
  const std::vector<double>& p = net.params();
  for (int l = net.layer_count() - 1; l >= 0; --l) {
    const int in = net.topology()[l];
    const int out = net.topology()[l + 1];
    const double* w = p.data() + net.layer_offset(l);
    double* gw = g.data() + net.layer_offset(l);
    double* gb = gw + static_cast<size_t>(out) * in;
    const std::vector<double>& a = s.act[l];
    for (int o = 0; o < out; ++o) {
      const double d = s.delta[o];
      double* grow = gw + static_cast<size_t>(o) * in;
      for (int i = 0; i < in; ++i) grow[i] += d * a[i];
      gb[o] += d;
    }
    if (l == 0) break;
    s.delta_prev.assign(in, 0.0);
    for (int o = 0; o < out; ++o) {
      const double d = s.delta[o];
      const double* row = w + static_cast<size_t>(o) * in;
      for (int i = 0; i < in; ++i) s.delta_prev[i] += row[i] * d;
    }
    // tanh' from the stored post-activation
    for (int i = 0; i < in; ++i) s.delta_prev[i] *= 1.0 - a[i] * a[i];
    std::swap(s.delta, s.delta_prev);
  }
}

}  // namespace

Mlp::Mlp(std::vector<int> topology) : topology_(std::move(topology)) {
  if (topology_.size() < 2) {
    throw std::invalid_argument("topology needs at least input and output");
  }
  for (int n : topology_) {
    if (n <= 0) throw std::invalid_argument("layer sizes must be positive");
  }
  size_t total = 0;
  offsets_.reserve(topology_.size() - 1);
  for (size_t l = 0; l + 1 < topology_.size(); ++l) {
    offsets_.push_back(total);
    total += static_cast<size_t>(topology_[l + 1]) * topology_[l] +
             topology_[l + 1];
  }
  params_.assign(total, 0.0);
}

Mlp Mlp::random_init(std::vector<int> topology, Rng& rng) {
  Mlp net(std::move(topology));
  for (int l = 0; l < net.layer_count(); ++l) {
    const int in = net.topology()[l];
    const int out = net.topology()[l + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    double* w = net.params_.data() + net.layer_offset(l);
    const size_t n = static_cast<size_t>(out) * in + out;
    for (size_t k = 0; k < n; ++k) w[k] = rng.next_in(-bound, bound);
  }
  return net;
}

void forward_raw(const Mlp& net, std::span<const double> x,
                 std::vector<double>& out) {
  out = run_forward(net, x, tls);
}

void policy_forward(const Mlp& net, std::span<const double> x,
                    std::vector<double>& pi) {
  if (net.output_size() != kActionCount) {
    throw std::invalid_argument("policy network must have 5 outputs");
  }
  softmax(run_forward(net, x, tls), pi);
}

std::vector<double> policy_forward(const Mlp& net, const LocalState& s) {
  std::vector<double> pi;
  policy_forward(net, std::span<const double>(s.v.data(), s.v.size()), pi);
  return pi;
}

double value_forward(const Mlp& net, std::span<const double> x) {
  if (net.output_size() != 1) {
    throw std::invalid_argument("value network must have 1 output");
  }
  return run_forward(net, x, tls)[0];
}

double value_forward(const Mlp& net, const LocalState& s) {
  return value_forward(net, std::span<const double>(s.v.data(), s.v.size()));
}

double value_loss_grad(const Mlp& net, std::span<const double> x,
                       double target_return, GradSet& g) {
  if (!std::isfinite(target_return)) {
    throw std::invalid_argument("non-finite target return");
  }
  if (net.output_size() != 1) {
    throw std::invalid_argument("value network must have 1 output");
  }
  Scratch& s = tls;
  const double v = run_forward(net, x, s)[0];
  const double err = target_return - v;
  g.assign(net.param_count(), 0.0);
  s.delta.assign(1, -err);  // d(0.5 err^2)/dV = -err
  run_backward(net, s, g);
  return 0.5 * err * err;
}

double policy_loss_grad(const Mlp& net, std::span<const double> x, Action a,
                        double advantage, GradSet& g) {
  if (!std::isfinite(advantage)) {
    throw std::invalid_argument("non-finite advantage");
  }
  if (net.output_size() != kActionCount) {
    throw std::invalid_argument("policy network must have 5 outputs");
  }
  Scratch& s = tls;
  const std::vector<double>& z = run_forward(net, x, s);
  softmax(z, s.pi);
  const int ai = static_cast<int>(a);
  const double pa = s.pi[ai];
  if (pa <= 0.0) {
    throw std::domain_error("selected action has zero probability");
  }
  g.assign(net.param_count(), 0.0);
  s.delta.resize(kActionCount);
  for (int k = 0; k < kActionCount; ++k) {
    s.delta[k] = advantage * (s.pi[k] - (k == ai ? 1.0 : 0.0));
  }
  run_backward(net, s, g);
  return -std::log(pa) * advantage;
}

void sync_target(const Mlp& src, Mlp& dst) {
  if (src.topology() != dst.topology()) {
    throw std::invalid_argument("target sync across different topologies");
  }
  dst.params() = src.params();
}

void save_mlp(const Mlp& net, std::ostream& os) {
  os << "mlp 1\n" << net.topology().size();
  for (int n : net.topology()) os << ' ' << n;
  os << '\n' << net.param_count() << '\n';
  char buf[64];
  for (double v : net.params()) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    os << buf;
  }
}

Mlp load_mlp(std::istream& is) {
  std::string magic;
  int version = 0;
  if (!(is >> magic >> version) || magic != "mlp" || version != 1) {
    throw std::runtime_error("unrecognized network checkpoint header");
  }
  size_t layers = 0;
  if (!(is >> layers) || layers < 2 || layers > 64) {
    throw std::runtime_error("corrupt checkpoint: bad topology size");
  }
  std::vector<int> topology(layers);
  for (int& n : topology) {
    if (!(is >> n)) throw std::runtime_error("corrupt checkpoint: topology");
  }
  size_t count = 0;
  if (!(is >> count)) {
    throw std::runtime_error("corrupt checkpoint: parameter count");
  }
  Mlp net(std::move(topology));
  if (count != net.param_count()) {
    throw std::runtime_error("corrupt checkpoint: parameter count mismatch");
  }
  for (double& v : net.params()) {
    if (!(is >> v)) throw std::runtime_error("corrupt checkpoint: parameters");
    if (!std::isfinite(v)) {
      throw std::runtime_error("corrupt checkpoint: non-finite parameter");
    }
  }
  return net;
}

}  // namespace sirl
