#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qinterf/transition.hpp"

namespace qinterf::nn {

/// Layer widths from input to output. Hidden layers use ReLU; the output
/// layer is linear and has one unit per action.
struct NetworkSpec {
  std::vector<int> layer_sizes;

  /// Input, `hidden_layers` copies of `hidden`, output.
  static NetworkSpec mlp(int input, int hidden, int hidden_layers, int output);

  /// Throws std::invalid_argument unless there is at least one hidden layer
  /// and every width is positive.
  void validate() const;

  [[nodiscard]] int input_dim() const { return layer_sizes.front(); }
  [[nodiscard]] int output_dim() const { return layer_sizes.back(); }
  [[nodiscard]] std::size_t layer_count() const { return layer_sizes.size() - 1; }
  [[nodiscard]] std::size_t param_count() const;

  friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

/// Weights and biases of an MLP stored in one flat vector. Layer l occupies
/// a column-major (out x in) weight block followed by its bias.
class NetworkParams {
 public:
  NetworkParams() = default;
  NetworkParams(NetworkSpec spec, Eigen::VectorXd flat);

  static NetworkParams zeros(NetworkSpec spec);

  [[nodiscard]] const NetworkSpec& spec() const { return spec_; }
  [[nodiscard]] const Eigen::VectorXd& flat() const { return flat_; }
  [[nodiscard]] Eigen::VectorXd& flat() { return flat_; }
  [[nodiscard]] Eigen::Index size() const { return flat_.size(); }

  [[nodiscard]] Eigen::Map<const Eigen::MatrixXd> weights(std::size_t layer) const;
  [[nodiscard]] Eigen::Map<Eigen::MatrixXd> weights(std::size_t layer);
  [[nodiscard]] Eigen::Map<const Eigen::VectorXd> bias(std::size_t layer) const;
  [[nodiscard]] Eigen::Map<Eigen::VectorXd> bias(std::size_t layer);

  [[nodiscard]] bool all_finite() const { return flat_.allFinite(); }

  friend bool operator==(const NetworkParams& a, const NetworkParams& b) {
    return a.spec_ == b.spec_ && a.flat_.size() == b.flat_.size() && a.flat_ == b.flat_;
  }

 private:
  [[nodiscard]] std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }
  [[nodiscard]] std::size_t bias_offset(std::size_t layer) const;

  NetworkSpec spec_;
  Eigen::VectorXd flat_;
  std::vector<std::size_t> offsets_;
};

/// He initialization: weights ~ N(0, 2 / fan_in), biases zero.
NetworkParams init_params(const NetworkSpec& spec, std::uint64_t seed);

Eigen::VectorXd flatten(const NetworkParams& params);
NetworkParams unflatten(const NetworkSpec& spec, std::span<const double> flat);

/// Action values for each column of `states`; returns (actions x N).
Eigen::MatrixXd forward(const NetworkParams& params, const Eigen::MatrixXd& states);
Eigen::VectorXd forward(const NetworkParams& params, const Eigen::VectorXd& state);

/// sum_i coeffs[i] * d Q(states[:, i], actions[i]) / d theta, as a flat vector.
Eigen::VectorXd selected_output_gradient(const NetworkParams& params, const Eigen::MatrixXd& states,
                                         std::span<const int> actions, std::span<const double> coeffs);

/// Semi-gradient TD direction (1/|B|) sum_i td_errors[i] * grad Q(s_i, a_i).
/// Adding a positive multiple of it to theta lowers squared TD error to first
/// order with the bootstrap held fixed.
Eigen::VectorXd grad_td_loss(const NetworkParams& params, const TransitionBatch& batch,
                             std::span<const double> td_errors);
Eigen::VectorXd grad_td_loss(const NetworkParams& params, std::span<const Transition> batch,
                             std::span<const double> td_errors);

}  // namespace qinterf::nn
