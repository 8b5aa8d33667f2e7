#pragma once

#include <Eigen/Core>

#include <cstddef>

#include "qinterf/agent/dqi_agent.hpp"
#include "qinterf/agent/td.hpp"
#include "qinterf/nn/hvp.hpp"
#include "qinterf/nn/optimizer.hpp"

namespace qinterf::online_aware {

struct GAConfig {
  double lambda = 0.1;
  std::size_t batch_size = 32;  // size of each of B1 and B2
  double hvp_scale = 1e-4;      // eps = hvp_scale * (1 + ||theta||_inf)

  void validate() const;
};

/// Gradient of the alignment g1(theta) . g2(theta), i.e. H1 g2 + H2 g1, with
/// both Hessian-vector products taken by central differences of the gradient
/// maps along unit directions.
Eigen::VectorXd alignment_gradient(const nn::GradientFn& g1, const nn::GradientFn& g2, const Eigen::VectorXd& theta,
                                   double eps);

/// Mean grad delta^2 over a batch with the bootstrap held fixed:
/// -2 (1/|B|) sum_i delta_i grad Q(s_i, a_i).
Eigen::VectorXd mean_squared_td_gradient(const nn::NetworkParams& theta, const agent::IterationContext& ctx,
                                         const TransitionBatch& batch, agent::TdVariant variant);

/// Ascent direction of the GA objective for batches B1 and B2:
/// the DQI direction over B1 u B2 plus (lambda / P) grad(g1 . g2).
Eigen::VectorXd ga_direction(const nn::NetworkParams& theta, const agent::IterationContext& ctx,
                             const TransitionBatch& b1, const TransitionBatch& b2, const GAConfig& ga,
                             agent::TdVariant variant);

/// Concatenation of two batches, b1's columns first.
TransitionBatch concat(const TransitionBatch& b1, const TransitionBatch& b2);

/// Draws B1 then B2 and applies one optimizer step along ga_direction.
/// Returns false while the buffer holds fewer than 2 * batch_size transitions.
bool ga_step(nn::NetworkParams& theta, nn::OptimizerState& opt, const agent::ReplayBuffer& buffer, const GAConfig& ga,
             const agent::IterationContext& ctx, agent::TdVariant variant, Rng& rng);

class GaUpdater final : public agent::Updater {
 public:
  GaUpdater(nn::OptimizerState opt, GAConfig ga) : opt_(std::move(opt)), ga_(ga) { ga_.validate(); }
  bool update(nn::NetworkParams& theta, const agent::IterationContext& ctx, const agent::ReplayBuffer& buffer,
              agent::TdVariant variant, Rng& rng) override {
    return ga_step(theta, opt_, buffer, ga_, ctx, variant, rng);
  }

 private:
  nn::OptimizerState opt_;
  GAConfig ga_;
};

}  // namespace qinterf::online_aware
