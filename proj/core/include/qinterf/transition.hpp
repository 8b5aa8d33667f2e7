#pragma once

#include <Eigen/Core>

#include <span>
#include <vector>

namespace qinterf {

/// One environment step (s, a, r, s'). `terminal` marks true termination;
/// time-limit truncation is stored as non-terminal so the bootstrap is kept.
struct Transition {
  Eigen::VectorXd state;
  int action = 0;
  double reward = 0.0;
  Eigen::VectorXd next_state;
  bool terminal = false;
};

/// Column-major view of a set of transitions, one column per transition.
struct TransitionBatch {
  Eigen::MatrixXd states;
  Eigen::MatrixXd next_states;
  std::vector<int> actions;
  Eigen::VectorXd rewards;
  std::vector<char> terminal;

  [[nodiscard]] std::size_t size() const { return actions.size(); }
};

TransitionBatch make_batch(std::span<const Transition> transitions);
TransitionBatch make_batch(std::span<const Transition* const> transitions);

}  // namespace qinterf
