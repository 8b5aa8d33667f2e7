#include <cmath>
#include <numbers>

#include "qinterf/envs/env.hpp"

namespace qinterf::envs::cartpole {

namespace {

constexpr double kGravity = 9.8;
constexpr double kCartMass = 1.0;
constexpr double kPoleMass = 0.1;
constexpr double kTotalMass = kCartMass + kPoleMass;
constexpr double kHalfLength = 0.5;
constexpr double kPoleMassLength = kPoleMass * kHalfLength;
constexpr double kForce = 10.0;
constexpr double kTau = 0.02;
constexpr double kThetaLimit = 12.0 * 2.0 * std::numbers::pi / 360.0;
constexpr double kXLimit = 2.4;

Eigen::VectorXd observe(const std::array<double, 4>& p) {
  Eigen::VectorXd obs(kObsDim);
  obs << p[0], p[1], p[2], p[3];
  return obs;
}

}  // namespace

EnvState reset(Rng& rng) {
  EnvState state;
  for (double& v : state.physics) v = -kResetBound + 2.0 * kResetBound * uniform01(rng);
  state.observation = observe(state.physics);
  return state;
}

StepResult step(EnvState& state, int action) {
  auto& [x, x_dot, theta, theta_dot] = state.physics;
  const double force = action == 1 ? kForce : -kForce;
  const double cos_t = std::cos(theta);
  const double sin_t = std::sin(theta);
  const double temp = (force + kPoleMassLength * theta_dot * theta_dot * sin_t) / kTotalMass;
  const double theta_acc =
      (kGravity * sin_t - cos_t * temp) / (kHalfLength * (4.0 / 3.0 - kPoleMass * cos_t * cos_t / kTotalMass));
  const double x_acc = temp - kPoleMassLength * theta_acc * cos_t / kTotalMass;

  // Explicit Euler.
  x += kTau * x_dot;
  x_dot += kTau * x_acc;
  theta += kTau * theta_dot;
  theta_dot += kTau * theta_acc;

  StepResult result;
  result.terminal = x < -kXLimit || x > kXLimit || theta < -kThetaLimit || theta > kThetaLimit;
  result.reward = 1.0;
  state.observation = observe(state.physics);
  result.next_observation = state.observation;
  return result;
}

}  // namespace qinterf::envs::cartpole
