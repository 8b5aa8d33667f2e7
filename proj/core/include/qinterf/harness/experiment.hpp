#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qinterf/harness/config.hpp"

namespace qinterf::harness {

inline constexpr const char* kStatusOk = "ok";
inline constexpr const char* kStatusDiverged = "diverged";
inline constexpr const char* kStatusError = "error";

/// One row of the per-iteration CSV. `iter` counts from 1; the values are
/// measured after the iteration's last update.
struct IterationRecord {
  int iter = 0;
  double return_disc = 0.0;
  double return_undisc = 0.0;
  double iter_interference = 0.0;
  double iter_degradation = 0.0;
  std::string status = kStatusOk;
};

struct RunSummary {
  double interference_across_iters = 0.0;
  double degradation = 0.0;
  double mean_return = 0.0;  // discounted, over the same window
  std::string status = kStatusOk;
};

struct RunResult {
  ExperimentConfig config;
  std::string run_id;
  double initial_return_disc = 0.0;
  long long env_steps = 0;
  std::vector<IterationRecord> records;
  RunSummary summary;
};

const std::vector<std::string>& iteration_csv_header();
/// run_id, interference_across_iters, degradation, mean_return, status, then
/// every config field in canonical (sorted) order.
std::vector<std::string> summary_csv_header();
std::vector<std::string> summary_csv_row(const ExperimentConfig& config, const RunSummary& summary);
std::vector<std::string> iteration_csv_row(const ExperimentConfig& config, const std::string& id,
                                           const IterationRecord& r);

/// Summary scalars over the last min(window, #ok) records with status ok:
/// tail expectations of iteration interference and degradation, and the mean
/// discounted return. Scalars are NaN when no iteration completed.
RunSummary summarize(std::span<const IterationRecord> records, int window);

using IterationCallback = std::function<void(const IterationRecord&)>;

/// The instrumented training loop. Each iteration runs M environment steps
/// with one update per step, measures Update Interference over a reservoir of
/// the run's transitions at every interference_stride-th update, then
/// evaluates the greedy policy. Divergence ends the run with status
/// "diverged". With `out_dir`, writes <out_dir>/<run_id>/{config.json,
/// iterations.csv, summary.csv}, appending iteration rows as they finish.
RunResult run_experiment(const ExperimentConfig& config, const std::optional<std::filesystem::path>& out_dir = {},
                         const IterationCallback& on_iteration = {});

/// Result of re-deriving summary scalars from per-iteration CSVs.
struct VerifyReport {
  std::size_t runs_checked = 0;
  std::vector<std::string> problems;
  [[nodiscard]] bool ok() const { return runs_checked > 0 && problems.empty(); }
};

/// Accepts a run directory (iterations.csv + config.json + summary.csv) or a
/// sweep directory (summary.csv naming run subdirectories). Every summary
/// scalar must match its recomputation exactly.
VerifyReport verify(const std::filesystem::path& dir);

}  // namespace qinterf::harness
