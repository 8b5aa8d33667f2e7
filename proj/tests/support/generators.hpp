#pragma once

// Hand-rolled random instance generators shared by unit and acceptance tests.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "qinterf/agent/replay_buffer.hpp"
#include "qinterf/agent/td.hpp"
#include "qinterf/nn/network.hpp"
#include "qinterf/random.hpp"
#include "qinterf/transition.hpp"

namespace qinterf::testing {

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

inline int uniform_int(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

inline Eigen::VectorXd random_vector(Rng& rng, int n, double scale = 1.0) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = uniform(rng, -scale, scale);
  return v;
}

inline nn::NetworkSpec random_spec(Rng& rng, int hidden) {
  return nn::NetworkSpec::mlp(uniform_int(rng, 2, 6), hidden, uniform_int(rng, 1, 3), uniform_int(rng, 2, 4));
}

inline Transition random_transition(Rng& rng, int obs_dim, int actions, double terminal_prob = 0.2) {
  Transition t;
  t.state = random_vector(rng, obs_dim);
  t.action = uniform_int(rng, 0, actions - 1);
  t.reward = uniform(rng, -1.0, 1.0);
  t.next_state = random_vector(rng, obs_dim);
  t.terminal = uniform01(rng) < terminal_prob;
  return t;
}

inline std::vector<Transition> random_transitions(Rng& rng, const nn::NetworkSpec& spec, int n) {
  std::vector<Transition> out;
  for (int i = 0; i < n; ++i) out.push_back(random_transition(rng, spec.input_dim(), spec.output_dim()));
  return out;
}

inline agent::IterationContext random_context(Rng& rng, const nn::NetworkSpec& spec) {
  agent::IterationContext ctx;
  ctx.iteration = 3;
  ctx.frozen = nn::init_params(spec, rng());
  ctx.gamma = 0.99;
  ctx.epsilon = 0.1;
  ctx.steps_per_iteration = 10;
  return ctx;
}

inline agent::ReplayBuffer filled_buffer(Rng& rng, const nn::NetworkSpec& spec, std::size_t capacity, int n) {
  agent::ReplayBuffer buffer(capacity);
  for (const auto& t : random_transitions(rng, spec, n)) buffer.add(t);
  return buffer;
}

/// Central finite-difference gradient of f at x.
inline Eigen::VectorXd numeric_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                        const Eigen::VectorXd& x, double h) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double up = f(probe);
    probe[i] = x[i] - h;
    const double down = f(probe);
    probe[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

/// Largest componentwise relative error |a - b| / max(|a|, |b|, floor).
inline double max_relative_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double floor) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double denom = std::max({std::abs(a[i]), std::abs(b[i]), floor});
    worst = std::max(worst, std::abs(a[i] - b[i]) / denom);
  }
  return worst;
}

}  // namespace qinterf::testing
