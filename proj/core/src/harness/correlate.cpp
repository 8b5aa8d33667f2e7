#include "qinterf/harness/correlate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qinterf/harness/csv.hpp"
#include "qinterf/harness/experiment.hpp"

namespace qinterf::harness {

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
  const std::size_t n = x.size();
  if (n < 2) return std::nullopt;
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

std::optional<double> spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("spearman: length mismatch");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

Correlation correlate_csv(const std::string& path, const std::string& x_column, const std::string& y_column,
                          bool include_diverged) {
  const CsvTable table = read_csv(path);
  const auto xs = table.numbers(x_column);
  const auto ys = table.numbers(y_column);
  const bool has_status = table.has_column("status");
  const std::size_t status = has_status ? table.column("status") : 0;
  std::vector<double> x, y;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (has_status && !include_diverged && table.rows[i][status] != kStatusOk) continue;
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) continue;
    x.push_back(xs[i]);
    y.push_back(ys[i]);
  }
  if (x.size() < 3) throw std::invalid_argument("correlate: need at least 3 finite pairs, have " + std::to_string(x.size()));
  return {pearson(x, y), spearman(x, y), x.size()};
}

}  // namespace qinterf::harness
