#pragma once

#include <stdexcept>
#include <string>

namespace qinterf {

// Raised when parameters, gradients or update directions stop being finite.
// Experiment runs catch it and record a "diverged" status.
class DivergenceError : public std::runtime_error {
 public:
  explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qinterf
