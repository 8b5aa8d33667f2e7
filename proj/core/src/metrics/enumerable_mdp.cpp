#include "qinterf/metrics/enumerable_mdp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qinterf::metrics {

void EnumerableMdp::validate() const {
  if (observations.empty() || action_count < 1) throw std::invalid_argument("EnumerableMdp: no states or actions");
  if (outcomes.size() != observations.size()) throw std::invalid_argument("EnumerableMdp: outcome table size");
  if (observations.size() * static_cast<std::size_t>(action_count) > kMaxPairs) {
    throw std::invalid_argument("EnumerableMdp: too many state-action pairs to enumerate");
  }
  for (const auto& per_state : outcomes) {
    if (per_state.size() != static_cast<std::size_t>(action_count)) {
      throw std::invalid_argument("EnumerableMdp: outcome table size");
    }
    for (const auto& list : per_state) {
      double total = 0.0;
      for (const Outcome& o : list) {
        if (o.next_state < 0 || static_cast<std::size_t>(o.next_state) >= observations.size() || o.probability < 0.0) {
          throw std::invalid_argument("EnumerableMdp: bad outcome");
        }
        total += o.probability;
      }
      if (!list.empty() && std::abs(total - 1.0) > 1e-12) {
        throw std::invalid_argument("EnumerableMdp: outcome probabilities must sum to 1");
      }
    }
  }
}

bool EnumerableMdp::deterministic() const {
  for (const auto& per_state : outcomes) {
    for (const auto& list : per_state) {
      if (list.size() > 1) return false;
    }
  }
  return true;
}

EnumerableMdp chain_mdp(int length, double slip, double reward_noise) {
  if (length < 2) throw std::invalid_argument("chain_mdp: need at least two states");
  EnumerableMdp mdp;
  mdp.action_count = 2;
  const auto n = static_cast<std::size_t>(length);
  mdp.observations.resize(n);
  mdp.outcomes.resize(n);
  for (int s = 0; s < length; ++s) {
    mdp.observations[static_cast<std::size_t>(s)] = Eigen::VectorXd::Unit(length, s);
    auto& per_state = mdp.outcomes[static_cast<std::size_t>(s)];
    per_state.resize(2);
    if (s == length - 1) continue;  // terminal state, never a source
    for (int a = 0; a < 2; ++a) {
      const int moved = a == 0 ? std::max(s - 1, 0) : s + 1;
      std::vector<std::pair<double, int>> moves{{1.0 - slip, moved}};
      if (slip > 0.0) moves.emplace_back(slip, s);
      for (const auto& [p_move, next] : moves) {
        const bool terminal = next == length - 1;
        const double base = terminal ? 1.0 : 0.0;
        if (reward_noise > 0.0) {
          per_state[static_cast<std::size_t>(a)].push_back({p_move * 0.5, base + reward_noise, next, terminal});
          per_state[static_cast<std::size_t>(a)].push_back({p_move * 0.5, base - reward_noise, next, terminal});
        } else {
          per_state[static_cast<std::size_t>(a)].push_back({p_move, base, next, terminal});
        }
      }
    }
  }
  mdp.validate();
  return mdp;
}

std::vector<StateAction> uniform_chain_distribution(const EnumerableMdp& mdp) {
  std::vector<StateAction> d;
  for (std::size_t s = 0; s + 1 < mdp.observations.size(); ++s) {
    for (int a = 0; a < mdp.action_count; ++a) d.push_back({static_cast<int>(s), a, 1.0});
  }
  return d;
}

namespace {

// Bootstrap targets r + gamma Q(s', pi_k(s')) of every outcome of (s, a).
std::vector<double> outcome_targets(const EnumerableMdp& mdp, const nn::NetworkParams& theta,
                                    const agent::IterationContext& ctx, int state, int action,
                                    agent::TdVariant variant) {
  const auto& list = mdp.outcomes.at(static_cast<std::size_t>(state)).at(static_cast<std::size_t>(action));
  if (list.empty()) throw std::invalid_argument("EnumerableMdp: (s, a) has no outcomes");
  std::vector<double> targets;
  targets.reserve(list.size());
  for (const Outcome& o : list) {
    double boot = 0.0;
    if (!o.terminal) {
      const Eigen::VectorXd& next = mdp.observations[static_cast<std::size_t>(o.next_state)];
      const int pi = agent::argmax_lowest(nn::forward(ctx.frozen, next));
      const nn::NetworkParams& source = variant == agent::TdVariant::target ? ctx.frozen : theta;
      boot = ctx.gamma * nn::forward(source, next)[pi];
    }
    targets.push_back(o.reward + boot);
  }
  return targets;
}

struct Moments {
  double mean_td = 0.0;
  double mean_sq_td = 0.0;
  double target_variance = 0.0;
};

Moments td_moments(const EnumerableMdp& mdp, const nn::NetworkParams& theta, const agent::IterationContext& ctx,
                   int state, int action, agent::TdVariant variant) {
  const auto& list = mdp.outcomes[static_cast<std::size_t>(state)][static_cast<std::size_t>(action)];
  const std::vector<double> targets = outcome_targets(mdp, theta, ctx, state, action, variant);
  const double q = nn::forward(theta, mdp.observations[static_cast<std::size_t>(state)])[action];
  Moments m;
  double mean_target = 0.0;
  double mean_sq_target = 0.0;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const double p = list[i].probability;
    const double delta = targets[i] - q;
    m.mean_td += p * delta;
    m.mean_sq_td += p * delta * delta;
    mean_target += p * targets[i];
    mean_sq_target += p * targets[i] * targets[i];
  }
  m.target_variance = mean_sq_target - mean_target * mean_target;
  return m;
}

double total_weight(std::span<const StateAction> d) {
  if (d.empty()) throw std::invalid_argument("oracle: empty distribution");
  double total = 0.0;
  for (const auto& sa : d) total += sa.weight;
  if (!(total > 0.0)) throw std::invalid_argument("oracle: distribution weights must be positive");
  return total;
}

}  // namespace

double expected_td_error(const EnumerableMdp& mdp, const nn::NetworkParams& theta, const agent::IterationContext& ctx,
                         int state, int action, agent::TdVariant variant) {
  mdp.validate();
  return td_moments(mdp, theta, ctx, state, action, variant).mean_td;
}

SquaredTdDecomposition decompose_squared_td_change(const EnumerableMdp& mdp, const nn::NetworkParams& theta_before,
                                                   const nn::NetworkParams& theta_after,
                                                   const agent::IterationContext& ctx,
                                                   std::span<const StateAction> d, agent::TdVariant variant) {
  mdp.validate();
  const double total = total_weight(d);
  SquaredTdDecomposition out;
  for (const StateAction& sa : d) {
    const Moments b = td_moments(mdp, theta_before, ctx, sa.state, sa.action, variant);
    const Moments a = td_moments(mdp, theta_after, ctx, sa.state, sa.action, variant);
    const double w = sa.weight / total;
    out.expected_squared_change += w * (a.mean_sq_td - b.mean_sq_td);
    out.accuracy_change += w * (a.mean_td * a.mean_td - b.mean_td * b.mean_td);
    out.target_variance_change += w * (a.target_variance - b.target_variance);
  }
  return out;
}

double exact_update_interference_oracle(const EnumerableMdp& mdp, const nn::NetworkParams& theta_before,
                                        const nn::NetworkParams& theta_after, const agent::IterationContext& ctx,
                                        std::span<const StateAction> d, agent::TdVariant variant) {
  const SquaredTdDecomposition dec = decompose_squared_td_change(mdp, theta_before, theta_after, ctx, d, variant);
  return std::max(dec.accuracy_change, 0.0);
}

WeightedSupport transition_support(const EnumerableMdp& mdp, std::span<const StateAction> d) {
  mdp.validate();
  const double total = total_weight(d);
  WeightedSupport out;
  for (const StateAction& sa : d) {
    const auto& list = mdp.outcomes.at(static_cast<std::size_t>(sa.state)).at(static_cast<std::size_t>(sa.action));
    for (const Outcome& o : list) {
      Transition t;
      t.state = mdp.observations[static_cast<std::size_t>(sa.state)];
      t.action = sa.action;
      t.reward = o.reward;
      t.next_state = mdp.observations[static_cast<std::size_t>(o.next_state)];
      t.terminal = o.terminal;
      out.transitions.push_back(std::move(t));
      out.weights.push_back(sa.weight / total * o.probability);
    }
  }
  return out;
}

}  // namespace qinterf::metrics
