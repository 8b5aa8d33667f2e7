#include "qinterf/online_aware/gradient_alignment.hpp"

#include <stdexcept>

namespace qinterf::online_aware {

void GAConfig::validate() const {
  if (!(lambda >= 0.0)) throw std::invalid_argument("GAConfig: lambda must be >= 0");
  if (batch_size == 0) throw std::invalid_argument("GAConfig: batch_size must be >= 1");
  if (!(hvp_scale > 0.0)) throw std::invalid_argument("GAConfig: hvp_scale must be > 0");
}

namespace {

// H v through a unit direction so the probe distance is eps regardless of |v|.
Eigen::VectorXd scaled_hvp(const nn::GradientFn& grad, const Eigen::VectorXd& theta, const Eigen::VectorXd& v,
                           double eps) {
  const double norm = v.norm();
  if (norm == 0.0) return Eigen::VectorXd::Zero(theta.size());
  return norm * nn::hvp_fd_or_throw(grad, theta, v / norm, eps);
}

}  // namespace

Eigen::VectorXd alignment_gradient(const nn::GradientFn& g1, const nn::GradientFn& g2, const Eigen::VectorXd& theta,
                                   double eps) {
  const Eigen::VectorXd v1 = g1(theta);
  const Eigen::VectorXd v2 = g2(theta);
  return scaled_hvp(g1, theta, v2, eps) + scaled_hvp(g2, theta, v1, eps);
}

Eigen::VectorXd mean_squared_td_gradient(const nn::NetworkParams& theta, const agent::IterationContext& ctx,
                                         const TransitionBatch& batch, agent::TdVariant variant) {
  return -2.0 * agent::dqi_direction(theta, ctx, batch, variant);
}

TransitionBatch concat(const TransitionBatch& b1, const TransitionBatch& b2) {
  TransitionBatch out;
  out.states.resize(b1.states.rows(), b1.states.cols() + b2.states.cols());
  out.states << b1.states, b2.states;
  out.next_states.resize(b1.next_states.rows(), b1.next_states.cols() + b2.next_states.cols());
  out.next_states << b1.next_states, b2.next_states;
  out.rewards.resize(b1.rewards.size() + b2.rewards.size());
  out.rewards << b1.rewards, b2.rewards;
  out.actions = b1.actions;
  out.actions.insert(out.actions.end(), b2.actions.begin(), b2.actions.end());
  out.terminal = b1.terminal;
  out.terminal.insert(out.terminal.end(), b2.terminal.begin(), b2.terminal.end());
  return out;
}

Eigen::VectorXd ga_direction(const nn::NetworkParams& theta, const agent::IterationContext& ctx,
                             const TransitionBatch& b1, const TransitionBatch& b2, const GAConfig& ga,
                             agent::TdVariant variant) {
  Eigen::VectorXd direction = agent::dqi_direction(theta, ctx, concat(b1, b2), variant);
  if (ga.lambda == 0.0) return direction;

  const nn::NetworkSpec& spec = theta.spec();
  auto gradient_map = [&](const TransitionBatch& batch) -> nn::GradientFn {
    return [&, spec](const Eigen::VectorXd& flat) {
      return mean_squared_td_gradient(nn::NetworkParams(spec, flat), ctx, batch, variant);
    };
  };
  const double eps = ga.hvp_scale * (1.0 + theta.flat().lpNorm<Eigen::Infinity>());
  const Eigen::VectorXd reg = alignment_gradient(gradient_map(b1), gradient_map(b2), theta.flat(), eps);
  direction += (ga.lambda / static_cast<double>(theta.size())) * reg;
  return direction;
}

bool ga_step(nn::NetworkParams& theta, nn::OptimizerState& opt, const agent::ReplayBuffer& buffer, const GAConfig& ga,
             const agent::IterationContext& ctx, agent::TdVariant variant, Rng& rng) {
  if (buffer.size() < 2 * ga.batch_size) return false;
  const TransitionBatch b1 = buffer.sample(ga.batch_size, rng);
  const TransitionBatch b2 = buffer.sample(ga.batch_size, rng);
  nn::optimizer_step(opt, theta, ga_direction(theta, ctx, b1, b2, ga, variant));
  return true;
}

}  // namespace qinterf::online_aware
