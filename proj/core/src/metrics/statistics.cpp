#include "qinterf/metrics/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qinterf::metrics {

double nearest_rank_percentile(std::span<const double> values, double p) {
  if (values.empty()) throw std::invalid_argument("percentile: empty input");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("percentile: p must be in (0, 1)");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  // The relative slack keeps products like 0.9 * 200 from rounding up a rank.
  auto rank = static_cast<std::size_t>(std::ceil(p * n - 1e-9 * n));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

double tail_expectation(std::span<const double> values, double p) {
  const double threshold = nearest_rank_percentile(values, p);
  double sum = 0.0;
  std::size_t count = 0;
  for (double v : values) {
    if (v >= threshold) {
      sum += v;
      ++count;
    }
  }
  return sum / static_cast<double>(count);
}

double iteration_degradation(std::span<const double> history, double current) {
  if (history.empty()) throw std::invalid_argument("iteration_degradation: empty history");
  return *std::max_element(history.begin(), history.end()) - current;
}

double interference_across_iterations(std::span<const double> iteration_values, std::size_t window, double p) {
  if (window == 0) throw std::invalid_argument("interference_across_iterations: window must be >= 1");
  if (window > iteration_values.size()) {
    throw std::invalid_argument("interference_across_iterations: window exceeds series length");
  }
  return tail_expectation(iteration_values.last(window), p);
}

double PerformanceSeries::record(double performance) {
  double degradation = 0.0;
  if (!performance_.empty()) {
    degradation = iteration_degradation(performance_, performance);
    degradation_.push_back(degradation);
  }
  performance_.push_back(performance);
  best_.push_back(best_.empty() ? performance : std::max(best_.back(), performance));
  return degradation;
}

}  // namespace qinterf::metrics
