#include "qinterf/agent/td.hpp"

#include <stdexcept>
#include <string>

namespace qinterf::agent {

TdVariant parse_td_variant(std::string_view name) {
  if (name == "dqi-no-target") return TdVariant::no_target;
  if (name == "dqi-target") return TdVariant::target;
  throw std::invalid_argument("unknown TD variant '" + std::string(name) + "' (expected dqi-no-target|dqi-target)");
}

std::string_view to_string(TdVariant v) { return v == TdVariant::target ? "dqi-target" : "dqi-no-target"; }

int argmax_lowest(const Eigen::Ref<const Eigen::VectorXd>& q) {
  if (q.size() == 0) throw std::invalid_argument("argmax_lowest: empty");
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < q.size(); ++i) {
    if (q[i] > q[best]) best = i;
  }
  return static_cast<int>(best);
}

std::vector<int> greedy_actions(const Eigen::MatrixXd& q) {
  std::vector<int> out(static_cast<std::size_t>(q.cols()));
  for (Eigen::Index j = 0; j < q.cols(); ++j) out[static_cast<std::size_t>(j)] = argmax_lowest(q.col(j));
  return out;
}

int GreedyPolicy::operator()(const Eigen::VectorXd& state) const { return argmax_lowest(nn::forward(params_, state)); }

std::vector<int> GreedyPolicy::operator()(const Eigen::MatrixXd& states) const {
  return greedy_actions(nn::forward(params_, states));
}

GreedyPolicy greedify(const nn::NetworkParams& params) { return GreedyPolicy(params); }

int epsilon_greedy(int greedy_action, double epsilon, int action_count, Rng& rng) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon_greedy: epsilon outside [0, 1]");
  if (uniform01(rng) < epsilon) return static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(action_count)));
  return greedy_action;
}

Eigen::VectorXd bootstrap_values(const nn::NetworkParams& theta, const IterationContext& ctx,
                                 const TransitionBatch& batch, TdVariant variant) {
  const Eigen::MatrixXd q_frozen = nn::forward(ctx.frozen, batch.next_states);
  const std::vector<int> pi = greedy_actions(q_frozen);
  Eigen::MatrixXd q_theta;
  if (variant == TdVariant::no_target) q_theta = nn::forward(theta, batch.next_states);
  const Eigen::MatrixXd& source = variant == TdVariant::target ? q_frozen : q_theta;

  Eigen::VectorXd out(static_cast<Eigen::Index>(batch.size()));
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto col = static_cast<Eigen::Index>(i);
    out[col] = batch.terminal[i] ? 0.0 : ctx.gamma * source(pi[i], col);
  }
  return out;
}

Eigen::VectorXd td_errors(const nn::NetworkParams& theta, const IterationContext& ctx, const TransitionBatch& batch,
                          TdVariant variant) {
  const Eigen::MatrixXd q = nn::forward(theta, batch.states);
  const Eigen::VectorXd boot = bootstrap_values(theta, ctx, batch, variant);
  Eigen::VectorXd delta(static_cast<Eigen::Index>(batch.size()));
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto col = static_cast<Eigen::Index>(i);
    delta[col] = batch.rewards[col] + boot[col] - q(batch.actions[i], col);
  }
  return delta;
}

double td_error(const nn::NetworkParams& theta, const IterationContext& ctx, const Transition& t, TdVariant variant) {
  return td_errors(theta, ctx, make_batch(std::span<const Transition>(&t, 1)), variant)[0];
}

Eigen::VectorXd dqi_direction(const nn::NetworkParams& theta, const IterationContext& ctx,
                              const TransitionBatch& batch, TdVariant variant) {
  const Eigen::VectorXd delta = td_errors(theta, ctx, batch, variant);
  return nn::grad_td_loss(theta, batch, std::span<const double>(delta.data(), static_cast<std::size_t>(delta.size())));
}

bool dqi_step(nn::NetworkParams& theta, nn::OptimizerState& opt, const IterationContext& ctx,
              const ReplayBuffer& buffer, std::size_t batch_size, TdVariant variant, Rng& rng) {
  if (batch_size == 0) throw std::invalid_argument("dqi_step: batch_size must be >= 1");
  if (buffer.size() < batch_size) return false;
  const TransitionBatch batch = buffer.sample(batch_size, rng);
  nn::optimizer_step(opt, theta, dqi_direction(theta, ctx, batch, variant));
  return true;
}

}  // namespace qinterf::agent
