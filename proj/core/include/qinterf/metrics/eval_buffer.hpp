#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qinterf/random.hpp"
#include "qinterf/transition.hpp"

namespace qinterf::metrics {

/// Reservoir sample (Algorithm R) of every transition offered so far. After
/// N >= capacity insertions each item is retained with probability capacity/N.
class EvalBuffer {
 public:
  EvalBuffer(std::size_t capacity, std::uint64_t seed);

  /// Offers `t`; returns the slot it was written to, or nullopt if rejected.
  std::optional<std::size_t> insert(const Transition& t);

  [[nodiscard]] std::size_t size() const { return items_.size(); }
  [[nodiscard]] std::size_t capacity() const { return capacity_; }
  [[nodiscard]] std::uint64_t seen() const { return seen_; }
  [[nodiscard]] const std::vector<Transition>& items() const { return items_; }

 private:
  std::size_t capacity_;
  std::vector<Transition> items_;
  std::uint64_t seen_ = 0;
  Rng rng_;
};

}  // namespace qinterf::metrics
