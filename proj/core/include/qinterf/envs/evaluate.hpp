#pragma once

#include <Eigen/Core>

#include <functional>
#include <vector>

#include "qinterf/envs/env.hpp"

namespace qinterf::envs {

/// Maps a (obs_dim x N) block of observations to N actions.
using BatchPolicy = std::function<std::vector<int>(const Eigen::MatrixXd&)>;

struct PolicyReturn {
  double discounted = 0.0;
  double undiscounted = 0.0;
};

/// Monte-Carlo estimate of the start-state value of `policy`: the mean over
/// `n_rollouts` episodes of sum_t gamma^t r_{t+1}. With `random_first_action`
/// the first action of every episode is uniform. Episodes end on termination
/// or at spec.max_episode_steps. Rollouts advance in lockstep so the policy is
/// queried once per time step for all live episodes.
PolicyReturn evaluate_policy(const EnvSpec& spec, const BatchPolicy& policy, int n_rollouts, double gamma,
                             bool random_first_action, Rng& rng);

}  // namespace qinterf::envs
