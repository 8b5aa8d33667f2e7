#pragma once

#include <cstddef>
#include <vector>

#include "qinterf/random.hpp"
#include "qinterf/transition.hpp"

namespace qinterf::agent {

/// Fixed-capacity FIFO of transitions; once full, each add evicts the oldest.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void add(Transition t);
  void clear();

  [[nodiscard]] std::size_t size() const { return items_.size(); }
  [[nodiscard]] std::size_t capacity() const { return capacity_; }
  [[nodiscard]] bool empty() const { return items_.empty(); }

  /// i-th transition in insertion order (0 = oldest retained).
  [[nodiscard]] const Transition& at(std::size_t i) const;

  /// `n` transitions drawn uniformly with replacement, in draw order.
  [[nodiscard]] TransitionBatch sample(std::size_t n, Rng& rng) const;

 private:
  std::size_t capacity_;
  std::vector<Transition> items_;
  std::size_t head_ = 0;  // slot of the oldest item once full
};

}  // namespace qinterf::agent
