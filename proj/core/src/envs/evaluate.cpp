#include "qinterf/envs/evaluate.hpp"

#include <stdexcept>

namespace qinterf::envs {

PolicyReturn evaluate_policy(const EnvSpec& spec, const BatchPolicy& policy, int n_rollouts, double gamma,
                             bool random_first_action, Rng& rng) {
  if (n_rollouts < 1) throw std::invalid_argument("evaluate_policy: n_rollouts must be >= 1");
  const auto n = static_cast<std::size_t>(n_rollouts);

  std::vector<EnvState> states;
  states.reserve(n);
  for (std::size_t i = 0; i < n; ++i) states.push_back(reset(spec, rng));

  std::vector<double> disc(n, 0.0);
  std::vector<double> undisc(n, 0.0);
  std::vector<double> discount(n, 1.0);
  std::vector<std::size_t> live(n);
  for (std::size_t i = 0; i < n; ++i) live[i] = i;

  bool first = true;
  while (!live.empty()) {
    std::vector<int> actions;
    if (first && random_first_action) {
      actions.resize(live.size());
      for (int& a : actions) a = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(spec.action_count)));
    } else {
      Eigen::MatrixXd obs(spec.obs_dim, static_cast<Eigen::Index>(live.size()));
      for (std::size_t j = 0; j < live.size(); ++j) obs.col(static_cast<Eigen::Index>(j)) = states[live[j]].observation;
      actions = policy(obs);
      if (actions.size() != live.size()) throw std::logic_error("evaluate_policy: policy returned wrong action count");
    }
    first = false;

    std::vector<std::size_t> still_live;
    still_live.reserve(live.size());
    for (std::size_t j = 0; j < live.size(); ++j) {
      const std::size_t i = live[j];
      const StepResult r = step(spec, states[i], actions[j]);
      disc[i] += discount[i] * r.reward;
      undisc[i] += r.reward;
      discount[i] *= gamma;
      if (!r.terminal && !r.truncated) still_live.push_back(i);
    }
    live = std::move(still_live);
  }

  PolicyReturn out;
  for (std::size_t i = 0; i < n; ++i) {
    out.discounted += disc[i];
    out.undiscounted += undisc[i];
  }
  out.discounted /= static_cast<double>(n);
  out.undiscounted /= static_cast<double>(n);
  return out;
}

}  // namespace qinterf::envs
