#pragma once

#include <Eigen/Core>

#include <span>
#include <string_view>
#include <vector>

#include "qinterf/agent/replay_buffer.hpp"
#include "qinterf/nn/network.hpp"
#include "qinterf/nn/optimizer.hpp"
#include "qinterf/random.hpp"
#include "qinterf/transition.hpp"

namespace qinterf::agent {

/// Where the bootstrap value Q(s', pi_k(s')) comes from.
enum class TdVariant {
  no_target,  // the live parameters theta_t
  target,     // the frozen iteration network Q_k
};

TdVariant parse_td_variant(std::string_view name);  // "dqi-no-target" | "dqi-target"
std::string_view to_string(TdVariant v);

/// State of one Deep Q-iteration: the frozen network Q_k that defines the
/// greedy target policy pi_k and the epsilon-greedy behavior. Nothing in it
/// changes until the next iteration starts.
struct IterationContext {
  int iteration = 0;
  nn::NetworkParams frozen;
  double gamma = 0.99;
  double epsilon = 0.1;
  int steps_per_iteration = 1;
};

/// Index of the largest entry; ties go to the lowest index.
int argmax_lowest(const Eigen::Ref<const Eigen::VectorXd>& q);
/// Column-wise argmax_lowest.
std::vector<int> greedy_actions(const Eigen::MatrixXd& q);

/// Greedy policy of a parameter snapshot.
class GreedyPolicy {
 public:
  explicit GreedyPolicy(nn::NetworkParams params) : params_(std::move(params)) {}
  [[nodiscard]] int operator()(const Eigen::VectorXd& state) const;
  [[nodiscard]] std::vector<int> operator()(const Eigen::MatrixXd& states) const;
  [[nodiscard]] const nn::NetworkParams& params() const { return params_; }

 private:
  nn::NetworkParams params_;
};

GreedyPolicy greedify(const nn::NetworkParams& params);

/// Uniform action with probability epsilon, otherwise `greedy_action`.
/// Always draws one uniform; draws the random action only when exploring.
int epsilon_greedy(int greedy_action, double epsilon, int action_count, Rng& rng);

/// Bootstrap term gamma * Q(s', pi_k(s')) for each transition; zero when
/// terminal. pi_k is greedy in ctx.frozen; the value comes from `theta` or
/// ctx.frozen depending on the variant.
Eigen::VectorXd bootstrap_values(const nn::NetworkParams& theta, const IterationContext& ctx,
                                 const TransitionBatch& batch, TdVariant variant);

/// Sampled TD errors r + gamma Q(s', pi_k(s')) - Q_theta(s, a).
Eigen::VectorXd td_errors(const nn::NetworkParams& theta, const IterationContext& ctx, const TransitionBatch& batch,
                          TdVariant variant);
double td_error(const nn::NetworkParams& theta, const IterationContext& ctx, const Transition& t, TdVariant variant);

/// (1/|B|) sum_i delta_i grad Q_theta(s_i, a_i), the DQI ascent direction.
Eigen::VectorXd dqi_direction(const nn::NetworkParams& theta, const IterationContext& ctx,
                              const TransitionBatch& batch, TdVariant variant);

/// One DQI mini-batch update. Returns false (and draws nothing) while the
/// buffer holds fewer than `batch_size` transitions.
bool dqi_step(nn::NetworkParams& theta, nn::OptimizerState& opt, const IterationContext& ctx,
              const ReplayBuffer& buffer, std::size_t batch_size, TdVariant variant, Rng& rng);

}  // namespace qinterf::agent
