#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qinterf::metrics {

inline constexpr double kTailLevel = 0.9;

/// Nearest-rank percentile: the ceil(p * n)-th smallest value (1-based,
/// clamped to [1, n]). p must lie in (0, 1).
double nearest_rank_percentile(std::span<const double> values, double p);

/// Expected tail loss E[X | X >= percentile_p(X)]: the mean of every value at
/// or above the nearest-rank p-percentile.
double tail_expectation(std::span<const double> values, double p = kTailLevel);

/// max(history) - current. Negative when the current policy is the best so far.
double iteration_degradation(std::span<const double> history, double current);

/// Tail expectation over the last `window` per-iteration values. Throws
/// std::invalid_argument if the series is shorter than the window.
double interference_across_iterations(std::span<const double> iteration_values, std::size_t window,
                                      double p = kTailLevel);

/// Evaluated performance after each iteration with its running best and
/// per-iteration degradation. The first recorded value is the initial
/// policy's performance and has no degradation of its own.
class PerformanceSeries {
 public:
  /// Records a performance value; returns its iteration degradation, or 0 for
  /// the first value.
  double record(double performance);

  [[nodiscard]] const std::vector<double>& performance() const { return performance_; }
  [[nodiscard]] const std::vector<double>& running_best() const { return best_; }
  [[nodiscard]] const std::vector<double>& degradation() const { return degradation_; }

 private:
  std::vector<double> performance_;
  std::vector<double> best_;
  std::vector<double> degradation_;
};

}  // namespace qinterf::metrics
