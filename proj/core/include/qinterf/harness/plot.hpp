#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qinterf/harness/csv.hpp"

namespace qinterf::harness {

enum class PlotKind {
  scatter,  // summary CSV: interference across iterations vs degradation
  curves,   // iteration CSV: return per iteration, raw and moving average
  per_run,  // iteration CSV: return and iteration interference per run
  tworoom,  // Two-Room CSV: room-1 return over training steps
};

PlotKind parse_plot_kind(std::string_view name);

inline constexpr int kMovingAverageWindow = 10;
/// Interference above this is drawn at the clip value in scatter plots.
inline constexpr double kScatterInterferenceClip = 1.0;

/// Trailing moving average; the first window-1 points average what is available.
std::vector<double> moving_average(const std::vector<double>& values, int window);

/// Renders a standalone SVG from one or more tables of the same schema.
/// Throws std::invalid_argument when a required column is missing or there is
/// nothing to plot.
std::string render_plot(PlotKind kind, const std::vector<CsvTable>& inputs);

/// Reads the inputs, renders, and only then writes `out_path`.
void emit_plot(PlotKind kind, const std::vector<std::string>& in_paths, const std::string& out_path);

}  // namespace qinterf::harness
