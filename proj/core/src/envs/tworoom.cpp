#include <algorithm>
#include <stdexcept>

#include "qinterf/envs/env.hpp"

namespace qinterf::envs::tworoom {

namespace {
constexpr int kLast = kSize - 1;
}

// Room 0 runs from the top-left to the bottom-right corner; room 1 is mirrored.
Cell start_cell(int room) { return room == 0 ? Cell{0, 0} : Cell{kLast, kLast}; }
Cell goal_cell(int room) { return room == 0 ? Cell{kLast, kLast} : Cell{0, 0}; }

Eigen::VectorXd observe(int room, Cell cell) {
  Eigen::VectorXd obs(kObsDim);
  obs << static_cast<double>(cell.x) / kLast, static_cast<double>(cell.y) / kLast, static_cast<double>(room);
  return obs;
}

EnvState make_state(int room, Cell cell) {
  if (room != 0 && room != 1) throw std::invalid_argument("tworoom: room must be 0 or 1");
  if (cell.x < 0 || cell.x > kLast || cell.y < 0 || cell.y > kLast) throw std::invalid_argument("tworoom: cell off grid");
  EnvState state;
  state.physics = {static_cast<double>(cell.x), static_cast<double>(cell.y), static_cast<double>(room), 0.0};
  state.observation = observe(room, cell);
  return state;
}

StepResult step(EnvState& state, int action) {
  const int room = static_cast<int>(state.physics[2]);
  Cell cell{static_cast<int>(state.physics[0]), static_cast<int>(state.physics[1])};
  switch (action) {
    case up: cell.y = std::max(cell.y - 1, 0); break;
    case right: cell.x = std::min(cell.x + 1, kLast); break;
    case down: cell.y = std::min(cell.y + 1, kLast); break;
    case left: cell.x = std::max(cell.x - 1, 0); break;
    default: throw std::invalid_argument("tworoom: bad action");
  }
  state.physics[0] = cell.x;
  state.physics[1] = cell.y;
  state.observation = observe(room, cell);

  const Cell goal = goal_cell(room);
  StepResult result;
  result.reward = -1.0;
  result.terminal = cell.x == goal.x && cell.y == goal.y;
  result.next_observation = state.observation;
  return result;
}

}  // namespace qinterf::envs::tworoom
