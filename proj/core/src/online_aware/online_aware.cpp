#include "qinterf/online_aware/online_aware.hpp"

#include <stdexcept>

#include "qinterf/errors.hpp"
#include "qinterf/nn/optimizer.hpp"

namespace qinterf::online_aware {

void OAConfig::validate() const {
  if (inner_updates < 0) throw std::invalid_argument("OAConfig: inner_updates must be >= 0");
  if (!(inner_step >= 0.0)) throw std::invalid_argument("OAConfig: inner_step must be >= 0");
  if (!(meta_step >= 0.0 && meta_step <= 1.0)) throw std::invalid_argument("OAConfig: meta_step must be in [0, 1]");
  if (batch_size == 0) throw std::invalid_argument("OAConfig: batch_size must be >= 1");
}

nn::NetworkParams inner_loop(const nn::NetworkParams& theta, const agent::ReplayBuffer& buffer, const OAConfig& oa,
                             const agent::IterationContext& ctx, agent::TdVariant variant, Rng& rng) {
  oa.validate();
  nn::NetworkParams inner = theta;
  nn::OptimizerState sgd = nn::OptimizerState::make(nn::OptimizerKind::sgd, oa.inner_step, theta.size());
  for (int i = 0; i < oa.inner_updates; ++i) {
    if (!agent::dqi_step(inner, sgd, ctx, buffer, oa.batch_size, variant, rng)) {
      throw std::invalid_argument("inner_loop: buffer smaller than the inner batch size");
    }
  }
  return inner;
}

nn::NetworkParams reptile_meta_step(const nn::NetworkParams& theta, const nn::NetworkParams& theta_n,
                                    double meta_step) {
  if (theta.size() != theta_n.size()) throw std::invalid_argument("reptile_meta_step: parameter length mismatch");
  nn::NetworkParams out = theta;
  out.flat() = (1.0 - meta_step) * theta.flat() + meta_step * theta_n.flat();
  return out;
}

bool oa_step(nn::NetworkParams& theta, const agent::ReplayBuffer& buffer, const OAConfig& oa,
             const agent::IterationContext& ctx, agent::TdVariant variant, Rng& rng) {
  if (buffer.size() < oa.batch_size) return false;
  const nn::NetworkParams theta_n = inner_loop(theta, buffer, oa, ctx, variant, rng);
  nn::NetworkParams next = reptile_meta_step(theta, theta_n, oa.meta_step);
  if (!next.all_finite()) throw DivergenceError("oa_step: meta update produced non-finite parameters");
  theta = std::move(next);
  return true;
}

std::size_t large_batch_size(std::size_t base_batch, int factor) {
  if (factor < 1) throw std::invalid_argument("large_batch_size: factor must be >= 1");
  return base_batch * static_cast<std::size_t>(factor);
}

}  // namespace qinterf::online_aware
