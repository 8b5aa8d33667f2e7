#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "qinterf/agent/replay_buffer.hpp"
#include "qinterf/agent/td.hpp"
#include "qinterf/envs/env.hpp"
#include "qinterf/nn/network.hpp"
#include "qinterf/nn/optimizer.hpp"

namespace qinterf::agent {

/// The single network update performed after each environment step.
class Updater {
 public:
  virtual ~Updater() = default;
  /// Returns false if the update was skipped (buffer still warming up).
  virtual bool update(nn::NetworkParams& theta, const IterationContext& ctx, const ReplayBuffer& buffer,
                      TdVariant variant, Rng& rng) = 0;
};

/// Plain DQI: one optimizer step on a sampled mini-batch.
class DqiUpdater final : public Updater {
 public:
  DqiUpdater(nn::OptimizerState opt, std::size_t batch_size) : opt_(std::move(opt)), batch_size_(batch_size) {}
  bool update(nn::NetworkParams& theta, const IterationContext& ctx, const ReplayBuffer& buffer, TdVariant variant,
              Rng& rng) override;
  [[nodiscard]] const nn::OptimizerState& optimizer() const { return opt_; }

 private:
  nn::OptimizerState opt_;
  std::size_t batch_size_;
};

/// Hooks for instrumentation; called synchronously from run_iteration.
class StepObserver {
 public:
  virtual ~StepObserver() = default;
  virtual void on_iteration_start(const IterationContext&) {}
  virtual void on_transition(const Transition&) {}
  virtual void on_update(const nn::NetworkParams& /*before*/, const nn::NetworkParams& /*after*/,
                         const IterationContext&) {}
};

struct AgentConfig {
  envs::EnvSpec env;
  nn::NetworkSpec network;
  TdVariant variant = TdVariant::target;
  std::size_t replay_capacity = 10000;
  double epsilon = 0.1;
  int steps_per_iteration = 200;
};

struct IterationStats {
  int transitions = 0;
  int update_attempts = 0;
  int updates = 0;
  int episodes_finished = 0;
};

/// Deep Q-iteration. Each iteration snapshots theta into Q_k, then runs
/// steps_per_iteration environment steps acting epsilon-greedily in Q_k, with
/// one update per step.
class DqiAgent {
 public:
  DqiAgent(AgentConfig config, std::unique_ptr<Updater> updater, std::uint64_t seed);

  /// Throws DivergenceError if an update produces non-finite values.
  IterationStats run_iteration(StepObserver* observer = nullptr);

  /// Moves the agent into a different environment (e.g. the other room);
  /// the current episode is abandoned. The replay buffer is kept unless
  /// `clear_replay` is set.
  void switch_env(const envs::EnvSpec& env, bool clear_replay = false);

  [[nodiscard]] const nn::NetworkParams& params() const { return params_; }
  [[nodiscard]] nn::NetworkParams& params() { return params_; }
  [[nodiscard]] const IterationContext& context() const { return ctx_; }
  [[nodiscard]] const ReplayBuffer& replay() const { return replay_; }
  [[nodiscard]] const AgentConfig& config() const { return config_; }
  [[nodiscard]] int iterations_done() const { return iterations_done_; }
  [[nodiscard]] std::int64_t total_steps() const { return total_steps_; }

 private:
  AgentConfig config_;
  std::unique_ptr<Updater> updater_;
  nn::NetworkParams params_;
  IterationContext ctx_;
  ReplayBuffer replay_;
  Rng env_rng_;
  Rng replay_rng_;
  Rng behavior_rng_;
  envs::EnvState env_state_;
  int iterations_done_ = 0;
  std::int64_t total_steps_ = 0;
};

}  // namespace qinterf::agent
