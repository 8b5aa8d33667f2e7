#pragma once

#include <Eigen/Core>

#include "qinterf/agent/td.hpp"
#include "qinterf/nn/network.hpp"

namespace qinterf::metrics {

/// grad_theta delta^2 with the bootstrap held fixed: -2 delta grad Q(s, a).
Eigen::VectorXd squared_td_semi_gradient(const nn::NetworkParams& theta, const agent::IterationContext& ctx,
                                         const Transition& t, agent::TdVariant variant);

/// Full grad_theta delta^2 for fixed pi_k. Equals the semi-gradient for the
/// target variant; without a target network it also differentiates the
/// bootstrap Q_theta(s', pi_k(s')).
Eigen::VectorXd squared_td_gradient(const nn::NetworkParams& theta, const agent::IterationContext& ctx,
                                    const Transition& t, agent::TdVariant variant);

struct TaylorTerms {
  double exact_change = 0.0;  // delta^2(theta', probe) - delta^2(theta, probe)
  double first_order = 0.0;   // -alpha grad delta^2(probe) . grad delta^2(update)
};

/// Applies the single-transition step theta' = theta - alpha * grad delta^2(update)
/// and compares the exact change of the probe's squared TD error with its
/// first-order (gradient alignment) approximation.
TaylorTerms taylor_alignment_check(const nn::NetworkParams& theta, const agent::IterationContext& ctx,
                                   const Transition& update, const Transition& probe, double alpha,
                                   agent::TdVariant variant);

}  // namespace qinterf::metrics
