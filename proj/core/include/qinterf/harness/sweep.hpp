#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qinterf/harness/config.hpp"
#include "qinterf/harness/experiment.hpp"

namespace qinterf::harness {

/// A base config plus axes; runs are the Cartesian product of the axes
/// (first axis varies slowest) times the seeds.
struct GridSpec {
  std::string base_json = "{}";  // flat config object
  std::vector<std::pair<std::string, std::vector<std::string>>> axes;  // key -> JSON-encoded values

  /// Every config of the grid for seeds 0..seeds-1 (added to the base seed),
  /// in grid order with the seed varying fastest. Throws on an empty axis or
  /// an invalid combination.
  [[nodiscard]] std::vector<ExperimentConfig> expand(int seeds) const;
};

/// {"base": {...}, "axes": {"key": [v1, v2], ...}}; axes keep file order.
GridSpec parse_grid(std::string_view json_text);
GridSpec load_grid(const std::string& path);

/// Desk-scale correlation grid: hidden {64, 256} x buffer {1000, 10000}, M 200,
/// 150 iterations summarized over the last 75, DQI with target network on
/// Cartpole.
GridSpec desk_correlation_grid();
/// buffer {1000, 5000, 10000} x M {100, 200, 400} x hidden {64, 128, 256, 512}.
GridSpec paper_scale_grid(const std::string& env = "cartpole", const std::string& variant = "dqi-target");

struct SweepOutcome {
  std::vector<ExperimentConfig> configs;  // grid order
  std::vector<RunSummary> summaries;      // parallel to configs
};

using RunFinished = std::function<void(std::size_t index, const ExperimentConfig&, const RunSummary&)>;

/// Runs every config on at most `jobs` worker threads, each run writing to
/// <out_dir>/<run_id>/. A run that throws is recorded with status "error" and
/// the sweep continues. Writes <out_dir>/summary.csv in grid order once all
/// runs finish.
SweepOutcome run_sweep(const std::vector<ExperimentConfig>& configs, int jobs, const std::filesystem::path& out_dir,
                       const RunFinished& on_finished = {});

}  // namespace qinterf::harness
