#include "qinterf/agent/replay_buffer.hpp"

#include <stdexcept>

namespace qinterf::agent {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("ReplayBuffer: capacity must be >= 1");
  items_.reserve(capacity);
}

void ReplayBuffer::add(Transition t) {
  if (items_.size() < capacity_) {
    items_.push_back(std::move(t));
    return;
  }
  items_[head_] = std::move(t);
  head_ = (head_ + 1) % capacity_;
}

void ReplayBuffer::clear() {
  items_.clear();
  head_ = 0;
}

const Transition& ReplayBuffer::at(std::size_t i) const {
  if (i >= items_.size()) throw std::out_of_range("ReplayBuffer::at");
  return items_[(head_ + i) % items_.size()];
}

TransitionBatch ReplayBuffer::sample(std::size_t n, Rng& rng) const {
  if (n == 0 || items_.empty()) throw std::invalid_argument("ReplayBuffer::sample: nothing to sample");
  std::vector<const Transition*> picks(n);
  for (auto& p : picks) p = &items_[uniform_index(rng, items_.size())];
  return make_batch(std::span<const Transition* const>(picks));
}

}  // namespace qinterf::agent
