#include <algorithm>
#include <cmath>
#include <numbers>

#include "qinterf/envs/env.hpp"

namespace qinterf::envs::acrobot {

namespace {

using std::numbers::pi;
using Vec4 = std::array<double, 4>;

constexpr double kLink1 = 1.0;
constexpr double kMass1 = 1.0;
constexpr double kMass2 = 1.0;
constexpr double kCom1 = 0.5;
constexpr double kCom2 = 0.5;
constexpr double kMoment = 1.0;
constexpr double kGravity = 9.8;
constexpr double kDt = 0.2;
constexpr double kMaxVel1 = 4.0 * pi;
constexpr double kMaxVel2 = 9.0 * pi;
constexpr std::array<double, 3> kTorque{-1.0, 0.0, 1.0};

// Two-link equations of motion ("book" variant).
Vec4 derivatives(const Vec4& s, double torque) {
  const double theta1 = s[0];
  const double theta2 = s[1];
  const double dtheta1 = s[2];
  const double dtheta2 = s[3];
  const double d1 = kMass1 * kCom1 * kCom1 +
                    kMass2 * (kLink1 * kLink1 + kCom2 * kCom2 + 2.0 * kLink1 * kCom2 * std::cos(theta2)) + kMoment +
                    kMoment;
  const double d2 = kMass2 * (kCom2 * kCom2 + kLink1 * kCom2 * std::cos(theta2)) + kMoment;
  const double phi2 = kMass2 * kCom2 * kGravity * std::cos(theta1 + theta2 - pi / 2.0);
  const double phi1 = -kMass2 * kLink1 * kCom2 * dtheta2 * dtheta2 * std::sin(theta2) -
                      2.0 * kMass2 * kLink1 * kCom2 * dtheta2 * dtheta1 * std::sin(theta2) +
                      (kMass1 * kCom1 + kMass2 * kLink1) * kGravity * std::cos(theta1 - pi / 2.0) + phi2;
  const double ddtheta2 =
      (torque + d2 / d1 * phi1 - kMass2 * kLink1 * kCom2 * dtheta1 * dtheta1 * std::sin(theta2) - phi2) /
      (kMass2 * kCom2 * kCom2 + kMoment - d2 * d2 / d1);
  const double ddtheta1 = -(d2 * ddtheta2 + phi1) / d1;
  return {dtheta1, dtheta2, ddtheta1, ddtheta2};
}

Vec4 axpy(const Vec4& s, double h, const Vec4& k) {
  return {s[0] + h * k[0], s[1] + h * k[1], s[2] + h * k[2], s[3] + h * k[3]};
}

// One classical fourth-order Runge-Kutta step over kDt.
Vec4 rk4(const Vec4& s, double torque) {
  const Vec4 k1 = derivatives(s, torque);
  const Vec4 k2 = derivatives(axpy(s, kDt / 2.0, k1), torque);
  const Vec4 k3 = derivatives(axpy(s, kDt / 2.0, k2), torque);
  const Vec4 k4 = derivatives(axpy(s, kDt, k3), torque);
  Vec4 out{};
  for (int i = 0; i < 4; ++i) out[i] = s[i] + kDt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

double wrap(double x) {
  const double span = 2.0 * pi;
  while (x > pi) x -= span;
  while (x < -pi) x += span;
  return x;
}

Eigen::VectorXd observe(const Vec4& s) {
  Eigen::VectorXd obs(kObsDim);
  obs << std::cos(s[0]), std::sin(s[0]), std::cos(s[1]), std::sin(s[1]), s[2], s[3];
  return obs;
}

}  // namespace

EnvState reset(Rng& rng) {
  EnvState state;
  for (double& v : state.physics) v = -kResetBound + 2.0 * kResetBound * uniform01(rng);
  state.observation = observe(state.physics);
  return state;
}

EnvState from_physics(const std::array<double, 4>& physics) {
  EnvState state;
  state.physics = physics;
  state.observation = observe(physics);
  return state;
}

StepResult step(EnvState& state, int action) {
  Vec4 next = rk4(state.physics, kTorque[static_cast<std::size_t>(action)]);
  next[0] = wrap(next[0]);
  next[1] = wrap(next[1]);
  next[2] = std::clamp(next[2], -kMaxVel1, kMaxVel1);
  next[3] = std::clamp(next[3], -kMaxVel2, kMaxVel2);
  state.physics = next;

  StepResult result;
  // Tip of the second link above the bar at height one link length.
  result.terminal = -std::cos(next[0]) - std::cos(next[1] + next[0]) > 1.0;
  result.reward = result.terminal ? 0.0 : -1.0;
  state.observation = observe(next);
  result.next_observation = state.observation;
  return result;
}

}  // namespace qinterf::envs::acrobot
