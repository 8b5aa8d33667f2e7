#pragma once

#include <Eigen/Core>

#include <optional>
#include <span>
#include <vector>

#include "qinterf/agent/td.hpp"
#include "qinterf/metrics/eval_buffer.hpp"
#include "qinterf/nn/network.hpp"

namespace qinterf::metrics {

/// max(mean_i(after_i^2 - before_i^2), 0) for paired TD errors of one batch.
double update_interference(std::span<const double> td_before, std::span<const double> td_after);

/// Squared-TD-error Update Interference of the step theta_before ->
/// theta_after over `eval_batch`, with TD errors of the given variant under
/// the same iteration context.
double update_interference(const nn::NetworkParams& theta_before, const nn::NetworkParams& theta_after,
                           const agent::IterationContext& ctx, const TransitionBatch& eval_batch,
                           agent::TdVariant variant);

/// Mean of the per-step Update Interference values of one iteration.
double iteration_interference(std::span<const double> per_step);

/// Update Interference over an EvalBuffer, measured at every update.
///
/// The bootstrap policy pi_k(s') (and, for the target variant, the bootstrap
/// value) of every buffered transition is computed once per iteration. The TD
/// errors at theta_after are kept and reused as the "before" errors of the
/// next measurement when the parameters match exactly, so in steady state a
/// measurement costs one forward pass over the buffer.
class InterferenceMeter {
 public:
  InterferenceMeter(const EvalBuffer& buffer, agent::TdVariant variant) : buffer_(&buffer), variant_(variant) {}

  void begin_iteration(const agent::IterationContext& ctx);
  /// Call after the buffer wrote to `slot`.
  void slot_changed(std::size_t slot);

  /// Update Interference of theta_before -> theta_after over the buffer.
  double measure(const nn::NetworkParams& theta_before, const nn::NetworkParams& theta_after);

  /// TD errors of every buffered transition at `theta` (uncached reference path).
  [[nodiscard]] Eigen::VectorXd td_errors(const nn::NetworkParams& theta);

 private:
  void sync();
  Eigen::VectorXd errors_at(const nn::NetworkParams& theta, std::span<const std::size_t> columns) const;

  const EvalBuffer* buffer_;
  agent::TdVariant variant_;
  std::optional<agent::IterationContext> ctx_;

  // Per-slot caches, valid for the current iteration.
  Eigen::MatrixXd states_;
  Eigen::MatrixXd next_states_;
  Eigen::VectorXd rewards_;
  std::vector<int> actions_;
  std::vector<char> terminal_;
  std::vector<int> boot_action_;
  Eigen::VectorXd boot_value_;  // target variant: gamma * Q_k(s', pi_k(s')), 0 if terminal
  std::vector<std::size_t> dirty_;

  // TD errors at cached_params_ for all slots; slots in dirty_ are stale.
  Eigen::VectorXd cached_errors_;
  Eigen::VectorXd cached_params_;
  bool cache_valid_ = false;
};

}  // namespace qinterf::metrics
