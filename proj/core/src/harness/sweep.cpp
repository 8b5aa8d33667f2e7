#include "qinterf/harness/sweep.hpp"

#include <atomic>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "qinterf/harness/csv.hpp"

namespace qinterf::harness {

namespace fs = std::filesystem;
using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::vector<ExperimentConfig> GridSpec::expand(int seeds) const {
  if (seeds < 1) throw std::invalid_argument("grid: seeds must be >= 1");
  const json base = json::parse(base_json);
  if (!base.is_object()) throw std::invalid_argument("grid: base must be an object");
  const std::uint64_t base_seed = parse_config(base_json).seed;
  std::size_t combos = 1;
  for (const auto& [key, values] : axes) {
    if (values.empty()) throw std::invalid_argument("grid: axis '" + key + "' is empty");
    combos *= values.size();
  }
  std::vector<ExperimentConfig> out;
  out.reserve(combos * static_cast<std::size_t>(seeds));
  for (std::size_t c = 0; c < combos; ++c) {
    json j = base;
    std::size_t rest = c;
    for (auto axis = axes.rbegin(); axis != axes.rend(); ++axis) {
      j[axis->first] = json::parse(axis->second[rest % axis->second.size()]);
      rest /= axis->second.size();
    }
    for (int s = 0; s < seeds; ++s) {
      j["seed"] = base_seed + static_cast<std::uint64_t>(s);
      out.push_back(parse_config(j.dump()));
    }
  }
  return out;
}

GridSpec parse_grid(std::string_view json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const ordered_json::parse_error& e) {
    throw std::invalid_argument(std::string("grid: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("grid: expected an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "base" && key != "axes") throw std::invalid_argument("grid: unknown key '" + key + "'");
  }
  GridSpec g;
  if (j.contains("base")) g.base_json = j["base"].dump();
  if (j.contains("axes")) {
    if (!j["axes"].is_object()) throw std::invalid_argument("grid: axes must be an object");
    for (const auto& [key, values] : j["axes"].items()) {
      if (!values.is_array()) throw std::invalid_argument("grid: axis '" + key + "' must be an array");
      std::vector<std::string> encoded;
      for (const auto& v : values) encoded.push_back(v.dump());
      g.axes.emplace_back(key, std::move(encoded));
    }
  }
  (void)g.expand(1);
  return g;
}

GridSpec load_grid(const std::string& path) { return parse_grid(read_file(path)); }

GridSpec desk_correlation_grid() {
  GridSpec g;
  g.base_json = R"({"env":"cartpole","variant":"dqi-target","algorithm":"dqi","M":200,"iterations":150,"window":75})";
  g.axes = {{"hidden", {"64", "256"}}, {"buffer", {"1000", "10000"}}};
  return g;
}

GridSpec paper_scale_grid(const std::string& env, const std::string& variant) {
  GridSpec g;
  json base = {{"env", env}, {"variant", variant}, {"algorithm", "dqi"}, {"iterations", 400}, {"window", 200}};
  g.base_json = base.dump();
  g.axes = {{"buffer", {"1000", "5000", "10000"}}, {"M", {"100", "200", "400"}}, {"hidden", {"64", "128", "256", "512"}}};
  return g;
}

SweepOutcome run_sweep(const std::vector<ExperimentConfig>& configs, int jobs, const fs::path& out_dir,
                       const RunFinished& on_finished) {
  if (configs.empty()) throw std::invalid_argument("sweep: empty grid");
  if (jobs < 1) throw std::invalid_argument("sweep: jobs must be >= 1");
  fs::create_directories(out_dir);

  SweepOutcome outcome;
  outcome.configs = configs;
  outcome.summaries.resize(configs.size());
  std::atomic<std::size_t> next{0};
  std::mutex report_mutex;

  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      RunSummary summary;
      try {
        summary = run_experiment(configs[i], out_dir).summary;
      } catch (const std::exception&) {
        summary.interference_across_iters = summary.degradation = summary.mean_return =
            std::numeric_limits<double>::quiet_NaN();
        summary.status = kStatusError;
      }
      outcome.summaries[i] = summary;
      if (on_finished) {
        std::lock_guard lock(report_mutex);
        on_finished(i, configs[i], summary);
      }
    }
  };
  const std::size_t workers = std::min(static_cast<std::size_t>(jobs), configs.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  CsvWriter summary((out_dir / "summary.csv").string(), summary_csv_header());
  for (std::size_t i = 0; i < configs.size(); ++i) summary.write_row(summary_csv_row(configs[i], outcome.summaries[i]));
  return outcome;
}

}  // namespace qinterf::harness
