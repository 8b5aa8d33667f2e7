#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string_view>

#include "qinterf/nn/network.hpp"

namespace qinterf::nn {

enum class OptimizerKind { sgd, adam, rmsprop };

OptimizerKind parse_optimizer(std::string_view name);
std::string_view to_string(OptimizerKind kind);

// Conventional defaults; only the step size is swept.
inline constexpr double kAdamBeta1 = 0.9;
inline constexpr double kAdamBeta2 = 0.999;
inline constexpr double kAdamEps = 1e-8;
inline constexpr double kRmspropDecay = 0.99;
inline constexpr double kRmspropEps = 1e-8;

struct OptimizerState {
  OptimizerKind kind = OptimizerKind::sgd;
  double step_size = 0.0;
  Eigen::VectorXd first_moment;   // Adam only
  Eigen::VectorXd second_moment;  // Adam and RMSprop
  std::int64_t steps = 0;

  static OptimizerState make(OptimizerKind kind, double step_size, Eigen::Index param_count);
};

/// Moves `params` along the ascent `direction`:
///   SGD:     theta += alpha * d
///   Adam:    theta += alpha * m_hat / (sqrt(v_hat) + eps)
///   RMSprop: theta += alpha * d / (sqrt(v) + eps)
/// Throws DivergenceError if the direction or the result is not finite; in
/// that case neither argument is modified.
void optimizer_step(OptimizerState& opt, NetworkParams& params, const Eigen::VectorXd& direction);

}  // namespace qinterf::nn
