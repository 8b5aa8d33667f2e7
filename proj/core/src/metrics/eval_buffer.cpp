#include "qinterf/metrics/eval_buffer.hpp"

#include <stdexcept>

namespace qinterf::metrics {

EvalBuffer::EvalBuffer(std::size_t capacity, std::uint64_t seed) : capacity_(capacity), rng_(seed) {
  if (capacity == 0) throw std::invalid_argument("EvalBuffer: capacity must be >= 1");
  items_.reserve(capacity);
}

std::optional<std::size_t> EvalBuffer::insert(const Transition& t) {
  ++seen_;
  if (items_.size() < capacity_) {
    items_.push_back(t);
    return items_.size() - 1;
  }
  const std::uint64_t j = uniform_index(rng_, seen_);
  if (j < capacity_) {
    items_[j] = t;
    return static_cast<std::size_t>(j);
  }
  return std::nullopt;
}

}  // namespace qinterf::metrics
