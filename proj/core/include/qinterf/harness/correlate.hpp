#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qinterf::harness {

/// Pearson correlation; nullopt when either side has zero variance or fewer
/// than two points.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);
/// 1-based ranks; tied values share the average of their ranks.
std::vector<double> average_ranks(std::span<const double> values);
/// Pearson correlation of the average-tie ranks.
std::optional<double> spearman(std::span<const double> x, std::span<const double> y);

struct Correlation {
  std::optional<double> pearson;
  std::optional<double> spearman;
  std::size_t n = 0;
};

/// Correlates two columns of a summary CSV over rows whose values are both
/// finite. Rows with a status other than "ok" are skipped unless
/// `include_diverged`. Throws std::invalid_argument with fewer than 3 pairs.
Correlation correlate_csv(const std::string& path, const std::string& x_column, const std::string& y_column,
                          bool include_diverged = false);

}  // namespace qinterf::harness
