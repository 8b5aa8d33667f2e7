#pragma once

#include <cstddef>

#include "qinterf/agent/dqi_agent.hpp"
#include "qinterf/agent/replay_buffer.hpp"
#include "qinterf/agent/td.hpp"
#include "qinterf/nn/network.hpp"

namespace qinterf::online_aware {

/// How the meta-parameters move after the inner loop. Only the first-order
/// Reptile interpolation is implemented.
enum class MetaUpdate { reptile };

struct OAConfig {
  int inner_updates = 10;         // n
  double inner_step = 1e-3;       // SGD step of each inner DQI update
  double meta_step = 0.1;         // Reptile interpolation step
  std::size_t batch_size = 64;    // mini-batch of each inner update
  MetaUpdate meta_update = MetaUpdate::reptile;

  void validate() const;
};

/// n sequential SGD DQI updates of a copy of theta, each on its own
/// mini-batch drawn from `buffer`. The context and buffer are not touched.
nn::NetworkParams inner_loop(const nn::NetworkParams& theta, const agent::ReplayBuffer& buffer, const OAConfig& oa,
                             const agent::IterationContext& ctx, agent::TdVariant variant, Rng& rng);

/// (1 - meta_step) * theta + meta_step * theta_n; exact at meta_step 0 and 1.
nn::NetworkParams reptile_meta_step(const nn::NetworkParams& theta, const nn::NetworkParams& theta_n,
                                    double meta_step);

/// One online-aware update: theta <- reptile_meta_step(theta, inner_loop(theta)).
/// Returns false while the buffer holds fewer than batch_size transitions.
bool oa_step(nn::NetworkParams& theta, const agent::ReplayBuffer& buffer, const OAConfig& oa,
             const agent::IterationContext& ctx, agent::TdVariant variant, Rng& rng);

class OaUpdater final : public agent::Updater {
 public:
  explicit OaUpdater(OAConfig oa) : oa_(oa) { oa_.validate(); }
  bool update(nn::NetworkParams& theta, const agent::IterationContext& ctx, const agent::ReplayBuffer& buffer,
              agent::TdVariant variant, Rng& rng) override {
    return oa_step(theta, buffer, oa_, ctx, variant, rng);
  }

 private:
  OAConfig oa_;
};

/// Batch size of the Large baseline: plain DQI with `factor` times the data.
std::size_t large_batch_size(std::size_t base_batch, int factor);

}  // namespace qinterf::online_aware
