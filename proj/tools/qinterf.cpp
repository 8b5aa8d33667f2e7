#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qinterf/harness/config.hpp"
#include "qinterf/harness/correlate.hpp"
#include "qinterf/harness/experiment.hpp"
#include "qinterf/harness/plot.hpp"
#include "qinterf/harness/runtime.hpp"
#include "qinterf/harness/sweep.hpp"
#include "qinterf/harness/tworoom_experiment.hpp"

namespace fs = std::filesystem;
using namespace qinterf::harness;

namespace {

std::string show(const std::optional<double>& v) {
  if (!v) return "undefined";
  return format_double(*v);
}

int cmd_run(const std::string& config_path, const std::optional<std::uint64_t>& seed, const std::string& out,
            bool quiet) {
  ExperimentConfig config = load_config(config_path);
  if (seed) config.seed = *seed;
  const RunResult r = run_experiment(config, fs::path(out), [&](const IterationRecord& rec) {
    if (!quiet) {
      std::printf("iter %d return %.3f interference %.6g degradation %.3f %s\n", rec.iter, rec.return_disc,
                  rec.iter_interference, rec.iter_degradation, rec.status.c_str());
    }
  });
  std::printf("run %s status %s interference_across_iters %s degradation %s mean_return %s\n", r.run_id.c_str(),
              r.summary.status.c_str(), format_double(r.summary.interference_across_iters).c_str(),
              format_double(r.summary.degradation).c_str(), format_double(r.summary.mean_return).c_str());
  std::printf("output %s\n", (fs::path(out) / r.run_id).string().c_str());
  return 0;
}

int cmd_sweep(const std::string& grid_path, bool paper_scale, int seeds, int jobs, const std::string& out) {
  GridSpec grid;
  if (!grid_path.empty()) {
    grid = load_grid(grid_path);
  } else {
    grid = paper_scale ? paper_scale_grid() : desk_correlation_grid();
  }
  const auto configs = grid.expand(seeds);
  std::printf("sweep of %zu runs on %d jobs\n", configs.size(), jobs);
  run_sweep(configs, jobs, fs::path(out), [&](std::size_t i, const ExperimentConfig& c, const RunSummary& s) {
    std::printf("[%zu/%zu] %s %s interference %s degradation %s\n", i + 1, configs.size(), run_id(c).c_str(),
                s.status.c_str(), format_double(s.interference_across_iters).c_str(),
                format_double(s.degradation).c_str());
    std::fflush(stdout);
  });
  std::printf("summary %s\n", (fs::path(out) / "summary.csv").string().c_str());
  return 0;
}

int cmd_tworoom(const TwoRoomConfig& config, const std::string& out) {
  const TwoRoomResult r = run_tworoom(config, fs::path(out));
  const ForgettingSummary f = summarize_forgetting(r, config.steps);
  std::printf("agent %s seed %llu switch at %lld: pre-switch return %.3f, lowest after %.3f, max interference %s\n",
              config.agent.c_str(), static_cast<unsigned long long>(config.seed), r.switch_step, f.pre_switch_return,
              f.min_post_return, format_double(f.max_post_interference).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  qinterf::harness::tune_allocator();
  CLI::App app{"Measure interference and degradation in value-based RL"};
  app.require_subcommand(1);

  std::string config_path, out, grid_path, in_x = "interference_across_iters", in_y = "degradation", kind, plot_out;
  std::vector<std::string> inputs;
  std::optional<std::uint64_t> seed;
  int seeds = 5, jobs = 1;
  bool paper_scale = false, quiet = false, include_diverged = false;
  TwoRoomConfig tworoom;

  auto* run = app.add_subcommand("run", "Train one agent and record per-iteration metrics");
  run->add_option("--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Overrides the config seed");
  run->add_option("--out", out, "Output directory")->required();
  run->add_flag("--quiet", quiet, "Only print the summary");

  auto* sweep = app.add_subcommand("sweep", "Run a grid of configs times seeds");
  sweep->add_option("--grid", grid_path, "Grid JSON {base, axes}; defaults to the desk-scale preset")
      ->check(CLI::ExistingFile);
  sweep->add_option("--seeds", seeds, "Seeds per grid point")->check(CLI::PositiveNumber);
  sweep->add_option("--jobs", jobs, "Concurrent runs")->check(CLI::PositiveNumber);
  sweep->add_option("--out", out, "Output directory")->required();
  sweep->add_flag("--paper-scale", paper_scale, "Use the 3x3x4 buffer/M/hidden grid");

  auto* tr = app.add_subcommand("tworoom", "Two-Room forgetting experiment");
  tr->add_option("--agent", tworoom.agent, "dqi-target | tilecode-linear")
      ->required()
      ->check(CLI::IsMember({"dqi-target", "tilecode-linear"}));
  tr->add_option("--steps", tworoom.steps, "Total training steps")->check(CLI::PositiveNumber);
  tr->add_option("--seed", tworoom.seed, "Seed");
  tr->add_option("--eval-every", tworoom.eval_every, "Steps between room-1 evaluations")->check(CLI::PositiveNumber);
  tr->add_option("--out", out, "Output directory")->required();

  auto* corr = app.add_subcommand("correlate", "Pearson and Spearman correlation of two summary columns");
  corr->add_option("--in", config_path, "Summary CSV")->required()->check(CLI::ExistingFile);
  corr->add_option("--x", in_x, "Column");
  corr->add_option("--y", in_y, "Column");
  corr->add_flag("--include-diverged", include_diverged, "Keep runs whose status is not ok");

  auto* plot = app.add_subcommand("plot", "Render an SVG figure");
  plot->add_option("--kind", kind, "scatter | curves | per_run | tworoom")
      ->required()
      ->check(CLI::IsMember({"scatter", "curves", "per_run", "tworoom"}));
  plot->add_option("--in", inputs, "Input CSV (repeatable)")->required()->check(CLI::ExistingFile);
  plot->add_option("--out", plot_out, "Output SVG")->required();

  auto* ver = app.add_subcommand("verify", "Recompute summary scalars from per-iteration CSVs");
  ver->add_option("--run", config_path, "Run or sweep directory")->required()->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, seed, out, quiet);
    if (*sweep) return cmd_sweep(grid_path, paper_scale, seeds, jobs, out);
    if (*tr) return cmd_tworoom(tworoom, out);
    if (*corr) {
      const Correlation c = correlate_csv(config_path, in_x, in_y, include_diverged);
      std::printf("n %zu pearson %s spearman %s\n", c.n, show(c.pearson).c_str(), show(c.spearman).c_str());
      return 0;
    }
    if (*plot) {
      emit_plot(parse_plot_kind(kind), inputs, plot_out);
      std::printf("wrote %s\n", plot_out.c_str());
      return 0;
    }
    if (*ver) {
      const VerifyReport report = verify(fs::path(config_path));
      for (const auto& p : report.problems) std::fprintf(stderr, "mismatch: %s\n", p.c_str());
      std::printf("verified %zu runs: %s\n", report.runs_checked, report.ok() ? "ok" : "FAILED");
      return report.ok() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
