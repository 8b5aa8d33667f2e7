#pragma once

#include <Eigen/Core>

#include <cstdint>

#include "qinterf/agent/tile_coder.hpp"
#include "qinterf/envs/env.hpp"
#include "qinterf/random.hpp"
#include "qinterf/transition.hpp"

namespace qinterf::agent {

/// Linear action values over tile features: Q(s, a) = sum_{i in phi(s)} w(i, a).
class LinearQ {
 public:
  LinearQ(TileCoder coder, int actions);

  [[nodiscard]] double value(const Eigen::VectorXd& observation, int action) const;
  [[nodiscard]] Eigen::VectorXd values(const Eigen::VectorXd& observation) const;

  /// Q-learning TD error r + gamma max_a' Q(s', a') - Q(s, a); no bootstrap when terminal.
  [[nodiscard]] double td_error(const Transition& t, double gamma) const;

  [[nodiscard]] const TileCoder& coder() const { return coder_; }
  [[nodiscard]] const Eigen::MatrixXd& weights() const { return weights_; }
  [[nodiscard]] Eigen::MatrixXd& weights() { return weights_; }

 private:
  TileCoder coder_;
  Eigen::MatrixXd weights_;  // features x actions
};

/// w(i, a) += alpha * delta for every i active in s; returns delta.
double linear_q_update(LinearQ& q, const Transition& t, double alpha, double gamma);

/// Online epsilon-greedy Q-learning on tile features, one update per step.
class LinearQAgent {
 public:
  LinearQAgent(TileCoder coder, envs::EnvSpec env, double alpha, double epsilon, std::uint64_t seed);

  /// Takes one environment step and applies one update; returns the transition.
  Transition step();
  /// The two halves of step(): act in the environment, then update on `t`.
  Transition act();
  double learn(const Transition& t) { return linear_q_update(q_, t, alpha_, env_.gamma); }
  void switch_env(const envs::EnvSpec& env);

  [[nodiscard]] const LinearQ& q() const { return q_; }
  [[nodiscard]] const envs::EnvSpec& env() const { return env_; }

 private:
  LinearQ q_;
  envs::EnvSpec env_;
  double alpha_;
  double epsilon_;
  Rng env_rng_;
  Rng behavior_rng_;
  envs::EnvState state_;
};

}  // namespace qinterf::agent
