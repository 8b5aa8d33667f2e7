#pragma once

#include <Eigen/Core>

#include <array>
#include <string_view>

#include "qinterf/random.hpp"

namespace qinterf::envs {

enum class EnvId { cartpole, acrobot, tworoom };

EnvId parse_env_id(std::string_view name);
std::string_view to_string(EnvId id);

struct EnvSpec {
  EnvId id = EnvId::cartpole;
  int obs_dim = 0;
  int action_count = 0;
  double gamma = 0.99;
  int max_episode_steps = 500;
  // Two-Room only: the room episodes start in (0 or 1).
  int room = 0;

  static EnvSpec make(EnvId id);
  static EnvSpec tworoom(int room);
};

struct EnvState {
  Eigen::VectorXd observation;
  // Underlying physical state. Cartpole: (x, x_dot, theta, theta_dot);
  // Acrobot: (theta1, theta2, dtheta1, dtheta2); Two-Room: (x, y, room, 0).
  std::array<double, 4> physics{};
  int steps_elapsed = 0;
};

struct StepResult {
  Eigen::VectorXd next_observation;
  double reward = 0.0;
  bool terminal = false;   // environment termination: no bootstrap
  bool truncated = false;  // time limit: bootstrap is kept
};

/// Start state. Cartpole draws each variable from U[-0.05, 0.05], Acrobot each
/// angle and velocity from U[-0.1, 0.1]; Two-Room starts at the room's fixed
/// start cell and draws nothing.
EnvState reset(const EnvSpec& spec, Rng& rng);

/// Advances `state` by one step. Dynamics are deterministic.
StepResult step(const EnvSpec& spec, EnvState& state, int action);

// Per-environment dynamics.
namespace cartpole {
inline constexpr int kObsDim = 4;
inline constexpr int kActions = 2;
inline constexpr double kResetBound = 0.05;
EnvState reset(Rng& rng);
StepResult step(EnvState& state, int action);
}  // namespace cartpole

namespace acrobot {
inline constexpr int kObsDim = 6;
inline constexpr int kActions = 3;
inline constexpr double kResetBound = 0.1;
EnvState reset(Rng& rng);
EnvState from_physics(const std::array<double, 4>& physics);
StepResult step(EnvState& state, int action);
}  // namespace acrobot

namespace tworoom {
inline constexpr int kSize = 20;
inline constexpr int kObsDim = 3;
inline constexpr int kActions = 4;
enum Action : int { up = 0, right = 1, down = 2, left = 3 };

struct Cell {
  int x = 0;
  int y = 0;
};

Cell start_cell(int room);
Cell goal_cell(int room);
EnvState make_state(int room, Cell cell);
Eigen::VectorXd observe(int room, Cell cell);
StepResult step(EnvState& state, int action);
}  // namespace tworoom

}  // namespace qinterf::envs
