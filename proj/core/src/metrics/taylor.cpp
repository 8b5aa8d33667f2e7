#include "qinterf/metrics/taylor.hpp"

#include <array>

namespace qinterf::metrics {

Eigen::VectorXd squared_td_semi_gradient(const nn::NetworkParams& theta, const agent::IterationContext& ctx,
                                         const Transition& t, agent::TdVariant variant) {
  const double delta = agent::td_error(theta, ctx, t, variant);
  const std::array<int, 1> actions{t.action};
  const std::array<double, 1> coeffs{-2.0 * delta};
  return nn::selected_output_gradient(theta, Eigen::MatrixXd(t.state), actions, coeffs);
}

Eigen::VectorXd squared_td_gradient(const nn::NetworkParams& theta, const agent::IterationContext& ctx,
                                    const Transition& t, agent::TdVariant variant) {
  if (variant == agent::TdVariant::target || t.terminal) return squared_td_semi_gradient(theta, ctx, t, variant);
  const double delta = agent::td_error(theta, ctx, t, variant);
  const int pi = agent::argmax_lowest(nn::forward(ctx.frozen, t.next_state));
  Eigen::MatrixXd states(t.state.size(), 2);
  states.col(0) = t.state;
  states.col(1) = t.next_state;
  const std::array<int, 2> actions{t.action, pi};
  const std::array<double, 2> coeffs{-2.0 * delta, 2.0 * delta * ctx.gamma};
  return nn::selected_output_gradient(theta, states, actions, coeffs);
}

TaylorTerms taylor_alignment_check(const nn::NetworkParams& theta, const agent::IterationContext& ctx,
                                   const Transition& update, const Transition& probe, double alpha,
                                   agent::TdVariant variant) {
  const Eigen::VectorXd g_update = squared_td_semi_gradient(theta, ctx, update, variant);
  const Eigen::VectorXd g_probe = squared_td_gradient(theta, ctx, probe, variant);
  nn::NetworkParams next = theta;
  next.flat() -= alpha * g_update;
  const double before = agent::td_error(theta, ctx, probe, variant);
  const double after = agent::td_error(next, ctx, probe, variant);
  TaylorTerms out;
  out.exact_change = after * after - before * before;
  out.first_order = -alpha * g_probe.dot(g_update);
  return out;
}

}  // namespace qinterf::metrics
