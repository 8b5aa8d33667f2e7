#include "qinterf/metrics/interference.hpp"

#include <algorithm>
#include <stdexcept>

namespace qinterf::metrics {

double update_interference(std::span<const double> td_before, std::span<const double> td_after) {
  if (td_before.empty()) throw std::invalid_argument("update_interference: empty batch");
  if (td_before.size() != td_after.size()) throw std::invalid_argument("update_interference: size mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < td_before.size(); ++i) {
    sum += td_after[i] * td_after[i] - td_before[i] * td_before[i];
  }
  return std::max(sum / static_cast<double>(td_before.size()), 0.0);
}

double update_interference(const nn::NetworkParams& theta_before, const nn::NetworkParams& theta_after,
                           const agent::IterationContext& ctx, const TransitionBatch& eval_batch,
                           agent::TdVariant variant) {
  if (eval_batch.size() == 0) throw std::invalid_argument("update_interference: empty batch");
  const Eigen::VectorXd before = agent::td_errors(theta_before, ctx, eval_batch, variant);
  const Eigen::VectorXd after = agent::td_errors(theta_after, ctx, eval_batch, variant);
  return update_interference(std::span<const double>(before.data(), static_cast<std::size_t>(before.size())),
                             std::span<const double>(after.data(), static_cast<std::size_t>(after.size())));
}

double iteration_interference(std::span<const double> per_step) {
  if (per_step.empty()) throw std::invalid_argument("iteration_interference: no measured steps");
  double sum = 0.0;
  for (double v : per_step) sum += v;
  return sum / static_cast<double>(per_step.size());
}

void InterferenceMeter::begin_iteration(const agent::IterationContext& ctx) {
  ctx_ = ctx;
  const auto& items = buffer_->items();
  const auto n = static_cast<Eigen::Index>(items.size());
  const Eigen::Index dim = items.empty() ? 0 : items.front().state.size();
  states_.resize(dim, n);
  next_states_.resize(dim, n);
  rewards_.resize(n);
  actions_.resize(items.size());
  terminal_.resize(items.size());
  for (Eigen::Index j = 0; j < n; ++j) {
    const Transition& t = items[static_cast<std::size_t>(j)];
    states_.col(j) = t.state;
    next_states_.col(j) = t.next_state;
    rewards_[j] = t.reward;
    actions_[static_cast<std::size_t>(j)] = t.action;
    terminal_[static_cast<std::size_t>(j)] = t.terminal ? 1 : 0;
  }
  boot_action_.assign(items.size(), 0);
  boot_value_ = Eigen::VectorXd::Zero(n);
  if (n > 0) {
    const Eigen::MatrixXd q_frozen = nn::forward(ctx.frozen, next_states_);
    boot_action_ = agent::greedy_actions(q_frozen);
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto s = static_cast<std::size_t>(j);
      boot_value_[j] = terminal_[s] ? 0.0 : ctx.gamma * q_frozen(boot_action_[s], j);
    }
  }
  dirty_.clear();
  cache_valid_ = false;
}

void InterferenceMeter::slot_changed(std::size_t slot) {
  if (!ctx_) throw std::logic_error("InterferenceMeter: begin_iteration not called");
  const Transition& t = buffer_->items().at(slot);
  const auto col = static_cast<Eigen::Index>(slot);
  if (col >= states_.cols()) {
    if (col != states_.cols()) throw std::logic_error("InterferenceMeter: slots must be appended in order");
    if (states_.rows() == 0) {
      states_.resize(t.state.size(), 0);
      next_states_.resize(t.state.size(), 0);
    }
    states_.conservativeResize(Eigen::NoChange, col + 1);
    next_states_.conservativeResize(Eigen::NoChange, col + 1);
    rewards_.conservativeResize(col + 1);
    boot_value_.conservativeResize(col + 1);
    actions_.push_back(0);
    terminal_.push_back(0);
    boot_action_.push_back(0);
  }
  states_.col(col) = t.state;
  next_states_.col(col) = t.next_state;
  rewards_[col] = t.reward;
  actions_[slot] = t.action;
  terminal_[slot] = t.terminal ? 1 : 0;
  const Eigen::VectorXd q_frozen = nn::forward(ctx_->frozen, t.next_state);
  boot_action_[slot] = agent::argmax_lowest(q_frozen);
  boot_value_[col] = t.terminal ? 0.0 : ctx_->gamma * q_frozen[boot_action_[slot]];
  dirty_.push_back(slot);
}

Eigen::VectorXd InterferenceMeter::errors_at(const nn::NetworkParams& theta,
                                             std::span<const std::size_t> columns) const {
  const auto n = static_cast<Eigen::Index>(columns.size());
  const bool bootstrap_from_theta = variant_ == agent::TdVariant::no_target;
  Eigen::MatrixXd inputs(states_.rows(), bootstrap_from_theta ? 2 * n : n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto c = static_cast<Eigen::Index>(columns[static_cast<std::size_t>(j)]);
    inputs.col(j) = states_.col(c);
    if (bootstrap_from_theta) inputs.col(n + j) = next_states_.col(c);
  }
  const Eigen::MatrixXd q = nn::forward(theta, inputs);
  Eigen::VectorXd delta(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const std::size_t s = columns[static_cast<std::size_t>(j)];
    const auto c = static_cast<Eigen::Index>(s);
    double boot = boot_value_[c];
    if (bootstrap_from_theta) boot = terminal_[s] ? 0.0 : ctx_->gamma * q(boot_action_[s], n + j);
    delta[j] = rewards_[c] + boot - q(actions_[s], j);
  }
  return delta;
}

void InterferenceMeter::sync() {
  if (!ctx_) throw std::logic_error("InterferenceMeter: begin_iteration not called");
  if (states_.cols() != static_cast<Eigen::Index>(buffer_->size())) {
    throw std::logic_error("InterferenceMeter: buffer changed without slot_changed");
  }
}

Eigen::VectorXd InterferenceMeter::td_errors(const nn::NetworkParams& theta) {
  sync();
  return agent::td_errors(theta, *ctx_, make_batch(std::span<const Transition>(buffer_->items())), variant_);
}

double InterferenceMeter::measure(const nn::NetworkParams& theta_before, const nn::NetworkParams& theta_after) {
  sync();
  const std::size_t n = buffer_->size();
  if (n == 0) throw std::invalid_argument("InterferenceMeter: empty evaluation buffer");
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;

  Eigen::VectorXd before;
  if (cache_valid_ && cached_params_.size() == theta_before.flat().size() && cached_params_ == theta_before.flat()) {
    before = cached_errors_;
    before.conservativeResize(static_cast<Eigen::Index>(n));
    std::sort(dirty_.begin(), dirty_.end());
    dirty_.erase(std::unique(dirty_.begin(), dirty_.end()), dirty_.end());
    if (!dirty_.empty()) {
      const Eigen::VectorXd fresh = errors_at(theta_before, dirty_);
      for (std::size_t j = 0; j < dirty_.size(); ++j) {
        before[static_cast<Eigen::Index>(dirty_[j])] = fresh[static_cast<Eigen::Index>(j)];
      }
    }
  } else {
    before = errors_at(theta_before, all);
  }
  Eigen::VectorXd after = errors_at(theta_after, all);

  const double value =
      update_interference(std::span<const double>(before.data(), n), std::span<const double>(after.data(), n));
  cached_errors_ = std::move(after);
  cached_params_ = theta_after.flat();
  cache_valid_ = true;
  dirty_.clear();
  return value;
}

}  // namespace qinterf::metrics
