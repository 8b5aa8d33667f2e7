#include "qinterf/transition.hpp"

#include <stdexcept>

namespace qinterf {

namespace {

template <typename Get>
TransitionBatch gather(std::size_t n, Get&& get) {
  if (n == 0) throw std::invalid_argument("make_batch: empty batch");
  const Eigen::Index dim = get(0).state.size();
  TransitionBatch batch;
  batch.states.resize(dim, static_cast<Eigen::Index>(n));
  batch.next_states.resize(dim, static_cast<Eigen::Index>(n));
  batch.actions.resize(n);
  batch.rewards.resize(static_cast<Eigen::Index>(n));
  batch.terminal.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Transition& t = get(i);
    if (t.state.size() != dim || t.next_state.size() != dim) {
      throw std::invalid_argument("make_batch: inconsistent state dimensions");
    }
    const auto col = static_cast<Eigen::Index>(i);
    batch.states.col(col) = t.state;
    batch.next_states.col(col) = t.next_state;
    batch.actions[i] = t.action;
    batch.rewards[col] = t.reward;
    batch.terminal[i] = t.terminal ? 1 : 0;
  }
  return batch;
}

}  // namespace

TransitionBatch make_batch(std::span<const Transition> transitions) {
  return gather(transitions.size(), [&](std::size_t i) -> const Transition& { return transitions[i]; });
}

TransitionBatch make_batch(std::span<const Transition* const> transitions) {
  return gather(transitions.size(), [&](std::size_t i) -> const Transition& { return *transitions[i]; });
}

}  // namespace qinterf
