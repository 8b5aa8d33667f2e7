#include "qinterf/agent/linear_q.hpp"

#include <stdexcept>

#include "qinterf/agent/td.hpp"

namespace qinterf::agent {

LinearQ::LinearQ(TileCoder coder, int actions)
    : coder_(coder), weights_(Eigen::MatrixXd::Zero(coder.feature_count(), actions)) {
  if (actions < 1) throw std::invalid_argument("LinearQ: need at least one action");
}

double LinearQ::value(const Eigen::VectorXd& observation, int action) const {
  double q = 0.0;
  for (int i : coder_.active(observation)) q += weights_(i, action);
  return q;
}

Eigen::VectorXd LinearQ::values(const Eigen::VectorXd& observation) const {
  Eigen::VectorXd q = Eigen::VectorXd::Zero(weights_.cols());
  for (int i : coder_.active(observation)) q += weights_.row(i).transpose();
  return q;
}

double LinearQ::td_error(const Transition& t, double gamma) const {
  const double boot = t.terminal ? 0.0 : gamma * values(t.next_state).maxCoeff();
  return t.reward + boot - value(t.state, t.action);
}

double linear_q_update(LinearQ& q, const Transition& t, double alpha, double gamma) {
  if (!(alpha > 0.0)) throw std::invalid_argument("linear_q_update: alpha must be > 0");
  const double delta = q.td_error(t, gamma);
  for (int i : q.coder().active(t.state)) q.weights()(i, t.action) += alpha * delta;
  return delta;
}

LinearQAgent::LinearQAgent(TileCoder coder, envs::EnvSpec env, double alpha, double epsilon, std::uint64_t seed)
    : q_(coder, env.action_count),
      env_(env),
      alpha_(alpha),
      epsilon_(epsilon),
      env_rng_(make_rng(seed, Stream::env)),
      behavior_rng_(make_rng(seed, Stream::behavior)) {
  if (env.id != envs::EnvId::tworoom) throw std::invalid_argument("LinearQAgent: tile coder only covers Two-Room");
  state_ = envs::reset(env_, env_rng_);
}

void LinearQAgent::switch_env(const envs::EnvSpec& env) {
  env_ = env;
  state_ = envs::reset(env_, env_rng_);
}

Transition LinearQAgent::step() {
  Transition t = act();
  learn(t);
  return t;
}

Transition LinearQAgent::act() {
  const int greedy = argmax_lowest(q_.values(state_.observation));
  const int action = epsilon_greedy(greedy, epsilon_, env_.action_count, behavior_rng_);
  Transition t;
  t.state = state_.observation;
  t.action = action;
  const envs::StepResult r = envs::step(env_, state_, action);
  t.reward = r.reward;
  t.next_state = r.next_observation;
  t.terminal = r.terminal;
  if (r.terminal || r.truncated) state_ = envs::reset(env_, env_rng_);
  return t;
}

}  // namespace qinterf::agent
