#pragma once

#include <Eigen/Core>

#include <span>
#include <vector>

#include "qinterf/agent/td.hpp"
#include "qinterf/nn/network.hpp"
#include "qinterf/transition.hpp"

namespace qinterf::metrics {

struct Outcome {
  double probability = 1.0;
  double reward = 0.0;
  int next_state = 0;
  bool terminal = false;
};

/// A small MDP given by its full transition table, used as ground truth for
/// expected TD errors. outcomes[s][a] lists every (r, s') with its probability.
struct EnumerableMdp {
  static constexpr std::size_t kMaxPairs = 1024;

  std::vector<Eigen::VectorXd> observations;
  int action_count = 0;
  std::vector<std::vector<std::vector<Outcome>>> outcomes;

  /// Throws std::invalid_argument on malformed tables or more than kMaxPairs
  /// state-action pairs.
  void validate() const;
  [[nodiscard]] bool deterministic() const;
};

/// Weight of one (s, a) pair under the sampling distribution d.
struct StateAction {
  int state = 0;
  int action = 0;
  double weight = 1.0;
};

/// Chain of `length` states with one-hot observations. Action 0 moves left,
/// action 1 right; entering the last state ends the episode with reward +1,
/// every other step gives 0. With `slip` > 0 a move fails (the agent stays)
/// with that probability, and the reward of each step is perturbed by
/// +/- `reward_noise` with equal probability.
EnumerableMdp chain_mdp(int length, double slip = 0.0, double reward_noise = 0.0);

/// Uniform d over every non-terminal (s, a): all states except the last.
std::vector<StateAction> uniform_chain_distribution(const EnumerableMdp& mdp);

/// E[delta(theta) | s, a] by full enumeration of (R, S').
double expected_td_error(const EnumerableMdp& mdp, const nn::NetworkParams& theta, const agent::IterationContext& ctx,
                         int state, int action, agent::TdVariant variant);

/// Exact Update Interference: max(E_d[Accuracy Change], 0) where
/// Accuracy Change = E[delta(theta_after)|s,a]^2 - E[delta(theta_before)|s,a]^2.
double exact_update_interference_oracle(const EnumerableMdp& mdp, const nn::NetworkParams& theta_before,
                                        const nn::NetworkParams& theta_after, const agent::IterationContext& ctx,
                                        std::span<const StateAction> d, agent::TdVariant variant);

/// Both sides of E[delta^2] change = (E[delta])^2 change + Var[target] change,
/// each averaged under d and left unclipped.
struct SquaredTdDecomposition {
  double expected_squared_change = 0.0;
  double accuracy_change = 0.0;
  double target_variance_change = 0.0;
};

SquaredTdDecomposition decompose_squared_td_change(const EnumerableMdp& mdp, const nn::NetworkParams& theta_before,
                                                   const nn::NetworkParams& theta_after,
                                                   const agent::IterationContext& ctx,
                                                   std::span<const StateAction> d, agent::TdVariant variant);

/// Every transition in the support of d, one per (s, a, outcome), with its
/// probability weight d(s, a) * P(r, s' | s, a) normalized to sum to one.
struct WeightedSupport {
  std::vector<Transition> transitions;
  std::vector<double> weights;
};
WeightedSupport transition_support(const EnumerableMdp& mdp, std::span<const StateAction> d);

}  // namespace qinterf::metrics
