#include "qinterf/agent/dqi_agent.hpp"

#include <stdexcept>

namespace qinterf::agent {

bool DqiUpdater::update(nn::NetworkParams& theta, const IterationContext& ctx, const ReplayBuffer& buffer,
                        TdVariant variant, Rng& rng) {
  return dqi_step(theta, opt_, ctx, buffer, batch_size_, variant, rng);
}

DqiAgent::DqiAgent(AgentConfig config, std::unique_ptr<Updater> updater, std::uint64_t seed)
    : config_(std::move(config)),
      updater_(std::move(updater)),
      replay_(config_.replay_capacity),
      env_rng_(make_rng(seed, Stream::env)),
      replay_rng_(make_rng(seed, Stream::replay)),
      behavior_rng_(make_rng(seed, Stream::behavior)) {
  if (!updater_) throw std::invalid_argument("DqiAgent: updater required");
  if (config_.steps_per_iteration < 1) throw std::invalid_argument("DqiAgent: steps_per_iteration must be >= 1");
  if (config_.network.input_dim() != config_.env.obs_dim || config_.network.output_dim() != config_.env.action_count) {
    throw std::invalid_argument("DqiAgent: network shape does not match the environment");
  }
  params_ = nn::init_params(config_.network, derive_seed(seed, Stream::init));
  ctx_.frozen = params_;
  ctx_.gamma = config_.env.gamma;
  ctx_.epsilon = config_.epsilon;
  ctx_.steps_per_iteration = config_.steps_per_iteration;
  env_state_ = envs::reset(config_.env, env_rng_);
}

void DqiAgent::switch_env(const envs::EnvSpec& env, bool clear_replay) {
  if (env.obs_dim != config_.env.obs_dim || env.action_count != config_.env.action_count) {
    throw std::invalid_argument("switch_env: incompatible environment");
  }
  config_.env = env;
  env_state_ = envs::reset(config_.env, env_rng_);
  if (clear_replay) replay_.clear();
}

IterationStats DqiAgent::run_iteration(StepObserver* observer) {
  ctx_.iteration = iterations_done_;
  ctx_.frozen = params_;
  if (observer) observer->on_iteration_start(ctx_);

  IterationStats stats;
  nn::NetworkParams before;
  for (int t = 0; t < config_.steps_per_iteration; ++t) {
    const int greedy = argmax_lowest(nn::forward(ctx_.frozen, env_state_.observation));
    const int action = epsilon_greedy(greedy, ctx_.epsilon, config_.env.action_count, behavior_rng_);

    Transition tr;
    tr.state = env_state_.observation;
    tr.action = action;
    const envs::StepResult r = envs::step(config_.env, env_state_, action);
    tr.reward = r.reward;
    tr.next_state = r.next_observation;
    tr.terminal = r.terminal;
    if (observer) observer->on_transition(tr);
    replay_.add(std::move(tr));
    ++stats.transitions;
    ++total_steps_;

    if (observer) before = params_;
    ++stats.update_attempts;
    if (updater_->update(params_, ctx_, replay_, config_.variant, replay_rng_)) {
      ++stats.updates;
      if (observer) observer->on_update(before, params_, ctx_);
    }

    if (r.terminal || r.truncated) {
      ++stats.episodes_finished;
      env_state_ = envs::reset(config_.env, env_rng_);
    }
  }
  ++iterations_done_;
  return stats;
}

}  // namespace qinterf::agent
