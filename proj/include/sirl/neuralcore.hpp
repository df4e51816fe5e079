#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "sirl/perception.hpp"
#include "sirl/rng.hpp"
#include "sirl/world.hpp"

namespace sirl {

// Per-parameter partials of a loss; flat, same length as the owning
// network's parameter vector.
using GradSet = std::vector<double>;

// Fully connected net: tanh hidden layers, raw (identity) outputs. The
// softmax for policies is applied at the loss/forward level so value heads
// can share the implementation. Parameters are stored flat, layer by layer,
// each layer as a row-major (out x in) weight block followed by its biases.
class Mlp {
 public:
  explicit Mlp(std::vector<int> topology);  // zero-initialized

  // Uniform init in [-1/sqrt(fan_in), +1/sqrt(fan_in)] per layer.
  static Mlp random_init(std::vector<int> topology, Rng& rng);

  const std::vector<int>& topology() const { return topology_; }
  int input_size() const { return topology_.front(); }
  int output_size() const { return topology_.back(); }
  int layer_count() const { return static_cast<int>(topology_.size()) - 1; }
  size_t param_count() const { return params_.size(); }

  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }

  // Offset of layer l's weight block; biases follow its weights.
  size_t layer_offset(int l) const { return offsets_[l]; }

 private:
  std::vector<int> topology_;
  std::vector<size_t> offsets_;
  std::vector<double> params_;
};

// Raw outputs (pre-softmax); scratch-buffered internally, safe to call in a
// hot loop. Throws std::invalid_argument on size mismatch or non-finite
// input.
void forward_raw(const Mlp& net, std::span<const double> x,
                 std::vector<double>& out);

// Softmax action distribution over the 5 actions.
void policy_forward(const Mlp& net, std::span<const double> x,
                    std::vector<double>& pi);
std::vector<double> policy_forward(const Mlp& net, const LocalState& s);

// Scalar state value.
double value_forward(const Mlp& net, std::span<const double> x);
double value_forward(const Mlp& net, const LocalState& s);

// loss = 0.5 * (target - V(x))^2; g receives the exact analytic gradient
// (resized and overwritten).
double value_loss_grad(const Mlp& net, std::span<const double> x,
                       double target_return, GradSet& g);

// loss = -log pi(a|x) * advantage with g exact; advantage is treated as a
// constant (no gradient flows through it). Throws std::domain_error if
// pi(a|x) is exactly zero.
double policy_loss_grad(const Mlp& net, std::span<const double> x, Action a,
                        double advantage, GradSet& g);

// Copies src parameters into dst; topologies must match exactly.
void sync_target(const Mlp& src, Mlp& dst);

// Plain-text checkpoint: versioned header, topology, then one parameter per
// line at full precision.
void save_mlp(const Mlp& net, std::ostream& os);
Mlp load_mlp(std::istream& is);

}  // namespace sirl
