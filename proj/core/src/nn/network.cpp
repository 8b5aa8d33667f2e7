#include "qinterf/nn/network.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "qinterf/random.hpp"

namespace qinterf::nn {

NetworkSpec NetworkSpec::mlp(int input, int hidden, int hidden_layers, int output) {
  NetworkSpec spec;
  spec.layer_sizes.push_back(input);
  for (int i = 0; i < hidden_layers; ++i) spec.layer_sizes.push_back(hidden);
  spec.layer_sizes.push_back(output);
  spec.validate();
  return spec;
}

void NetworkSpec::validate() const {
  if (layer_sizes.size() < 3) {
    throw std::invalid_argument("NetworkSpec: need input, at least one hidden layer, and output");
  }
  for (int width : layer_sizes) {
    if (width < 1) throw std::invalid_argument("NetworkSpec: layer width must be >= 1, got " + std::to_string(width));
  }
}

std::size_t NetworkSpec::param_count() const {
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    const auto in = static_cast<std::size_t>(layer_sizes[l]);
    const auto out = static_cast<std::size_t>(layer_sizes[l + 1]);
    total += in * out + out;
  }
  return total;
}

NetworkParams::NetworkParams(NetworkSpec spec, Eigen::VectorXd flat) : spec_(std::move(spec)), flat_(std::move(flat)) {
  spec_.validate();
  if (static_cast<std::size_t>(flat_.size()) != spec_.param_count()) {
    throw std::invalid_argument("NetworkParams: flat length " + std::to_string(flat_.size()) + " does not match spec (" +
                                std::to_string(spec_.param_count()) + ")");
  }
  std::size_t offset = 0;
  for (std::size_t l = 0; l < spec_.layer_count(); ++l) {
    offsets_.push_back(offset);
    const auto in = static_cast<std::size_t>(spec_.layer_sizes[l]);
    const auto out = static_cast<std::size_t>(spec_.layer_sizes[l + 1]);
    offset += in * out + out;
  }
}

NetworkParams NetworkParams::zeros(NetworkSpec spec) {
  const auto n = static_cast<Eigen::Index>(spec.param_count());
  return NetworkParams(std::move(spec), Eigen::VectorXd::Zero(n));
}

std::size_t NetworkParams::bias_offset(std::size_t layer) const {
  return offsets_[layer] + static_cast<std::size_t>(spec_.layer_sizes[layer]) *
                               static_cast<std::size_t>(spec_.layer_sizes[layer + 1]);
}

Eigen::Map<const Eigen::MatrixXd> NetworkParams::weights(std::size_t layer) const {
  return {flat_.data() + weight_offset(layer), spec_.layer_sizes[layer + 1], spec_.layer_sizes[layer]};
}

Eigen::Map<Eigen::MatrixXd> NetworkParams::weights(std::size_t layer) {
  return {flat_.data() + weight_offset(layer), spec_.layer_sizes[layer + 1], spec_.layer_sizes[layer]};
}

Eigen::Map<const Eigen::VectorXd> NetworkParams::bias(std::size_t layer) const {
  return {flat_.data() + bias_offset(layer), spec_.layer_sizes[layer + 1]};
}

Eigen::Map<Eigen::VectorXd> NetworkParams::bias(std::size_t layer) {
  return {flat_.data() + bias_offset(layer), spec_.layer_sizes[layer + 1]};
}

NetworkParams init_params(const NetworkSpec& spec, std::uint64_t seed) {
  NetworkParams params = NetworkParams::zeros(spec);
  Rng rng(seed);
  for (std::size_t l = 0; l < spec.layer_count(); ++l) {
    const double fan_in = spec.layer_sizes[l];
    std::normal_distribution<double> normal(0.0, std::sqrt(2.0 / fan_in));
    auto w = params.weights(l);
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = normal(rng);
    }
  }
  return params;
}

Eigen::VectorXd flatten(const NetworkParams& params) { return params.flat(); }

NetworkParams unflatten(const NetworkSpec& spec, std::span<const double> flat) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(flat.size()));
  for (std::size_t i = 0; i < flat.size(); ++i) v[static_cast<Eigen::Index>(i)] = flat[i];
  return NetworkParams(spec, std::move(v));
}

namespace {

void check_input(const NetworkParams& params, Eigen::Index rows) {
  if (rows != params.spec().input_dim()) {
    throw std::invalid_argument("forward: state dimension " + std::to_string(rows) + " does not match network input " +
                                std::to_string(params.spec().input_dim()));
  }
}

// Post-activation outputs of every layer; acts[0] is the input.
std::vector<Eigen::MatrixXd> forward_all(const NetworkParams& params, const Eigen::MatrixXd& states) {
  check_input(params, states.rows());
  const std::size_t layers = params.spec().layer_count();
  std::vector<Eigen::MatrixXd> acts;
  acts.reserve(layers + 1);
  acts.push_back(states);
  for (std::size_t l = 0; l < layers; ++l) {
    Eigen::MatrixXd z = params.weights(l) * acts.back();
    z.colwise() += params.bias(l);
    if (l + 1 < layers) z = z.cwiseMax(0.0);
    acts.push_back(std::move(z));
  }
  return acts;
}

}  // namespace

Eigen::MatrixXd forward(const NetworkParams& params, const Eigen::MatrixXd& states) {
  check_input(params, states.rows());
  const std::size_t layers = params.spec().layer_count();
  Eigen::MatrixXd a = states;
  for (std::size_t l = 0; l < layers; ++l) {
    Eigen::MatrixXd z = params.weights(l) * a;
    z.colwise() += params.bias(l);
    if (l + 1 < layers) z = z.cwiseMax(0.0);
    a = std::move(z);
  }
  return a;
}

Eigen::VectorXd forward(const NetworkParams& params, const Eigen::VectorXd& state) {
  return forward(params, Eigen::MatrixXd(state)).col(0);
}

Eigen::VectorXd selected_output_gradient(const NetworkParams& params, const Eigen::MatrixXd& states,
                                         std::span<const int> actions, std::span<const double> coeffs) {
  const auto n = static_cast<std::size_t>(states.cols());
  if (actions.size() != n || coeffs.size() != n) {
    throw std::invalid_argument("selected_output_gradient: actions/coeffs length must equal batch size");
  }
  const std::vector<Eigen::MatrixXd> acts = forward_all(params, states);
  const std::size_t layers = params.spec().layer_count();
  const int outputs = params.spec().output_dim();

  Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(outputs, states.cols());
  for (std::size_t i = 0; i < n; ++i) {
    if (actions[i] < 0 || actions[i] >= outputs) throw std::invalid_argument("selected_output_gradient: bad action");
    delta(actions[i], static_cast<Eigen::Index>(i)) = coeffs[i];
  }

  NetworkParams grad = NetworkParams::zeros(params.spec());
  for (std::size_t l = layers; l-- > 0;) {
    grad.weights(l).noalias() = delta * acts[l].transpose();
    grad.bias(l) = delta.rowwise().sum();
    if (l > 0) {
      Eigen::MatrixXd back = params.weights(l).transpose() * delta;
      delta = (acts[l].array() > 0.0).select(back, 0.0);
    }
  }
  return std::move(grad.flat());
}

Eigen::VectorXd grad_td_loss(const NetworkParams& params, const TransitionBatch& batch,
                             std::span<const double> td_errors) {
  const std::size_t n = batch.size();
  if (n == 0) throw std::invalid_argument("grad_td_loss: empty batch");
  if (td_errors.size() != n) throw std::invalid_argument("grad_td_loss: td_errors length mismatch");
  std::vector<double> coeffs(n);
  const double inv = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) coeffs[i] = td_errors[i] * inv;
  return selected_output_gradient(params, batch.states, batch.actions, coeffs);
}

Eigen::VectorXd grad_td_loss(const NetworkParams& params, std::span<const Transition> batch,
                             std::span<const double> td_errors) {
  if (batch.empty()) throw std::invalid_argument("grad_td_loss: empty batch");
  return grad_td_loss(params, make_batch(batch), td_errors);
}

}  // namespace qinterf::nn
