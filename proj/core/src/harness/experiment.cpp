#include "qinterf/harness/experiment.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <numeric>

#include "json.hpp"
#include "qinterf/agent/dqi_agent.hpp"
#include "qinterf/envs/evaluate.hpp"
#include "qinterf/errors.hpp"
#include "qinterf/harness/csv.hpp"
#include "qinterf/metrics/eval_buffer.hpp"
#include "qinterf/metrics/interference.hpp"
#include "qinterf/metrics/statistics.hpp"
#include "qinterf/online_aware/gradient_alignment.hpp"
#include "qinterf/online_aware/online_aware.hpp"

namespace qinterf::harness {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<std::string>& iteration_csv_header() {
  static const std::vector<std::string> header = {
      "run_id", "seed", "env", "variant", "hidden", "buffer", "M", "iter",
      "return_disc", "return_undisc", "iter_interference", "iter_degradation", "status"};
  return header;
}

namespace {

std::string json_field(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return format_double(v.get<double>());
  return v.dump();
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

std::vector<std::string> summary_csv_header() {
  std::vector<std::string> header = {"run_id", "interference_across_iters", "degradation", "mean_return", "status"};
  const json j = json::parse(to_json(ExperimentConfig{}));
  for (const auto& [key, value] : j.items()) header.push_back(key);
  return header;
}

std::vector<std::string> summary_csv_row(const ExperimentConfig& config, const RunSummary& summary) {
  std::vector<std::string> row = {run_id(config), format_double(summary.interference_across_iters),
                                  format_double(summary.degradation), format_double(summary.mean_return),
                                  summary.status};
  const json j = json::parse(to_json(config));
  for (const auto& [key, value] : j.items()) row.push_back(json_field(value));
  return row;
}

std::vector<std::string> iteration_csv_row(const ExperimentConfig& config, const std::string& id,
                                           const IterationRecord& r) {
  return {id,
          std::to_string(config.seed),
          config.env,
          config.variant_label(),
          std::to_string(config.hidden),
          std::to_string(config.buffer),
          std::to_string(config.M),
          std::to_string(r.iter),
          format_double(r.return_disc),
          format_double(r.return_undisc),
          format_double(r.iter_interference),
          format_double(r.iter_degradation),
          r.status};
}

RunSummary summarize(std::span<const IterationRecord> records, int window) {
  RunSummary s;
  std::vector<const IterationRecord*> ok;
  for (const auto& r : records) {
    if (r.status == kStatusOk) {
      ok.push_back(&r);
    } else {
      s.status = r.status;
    }
  }
  if (ok.empty()) {
    s.interference_across_iters = s.degradation = s.mean_return = kNaN;
    return s;
  }
  const std::size_t w = std::min(ok.size(), static_cast<std::size_t>(window));
  std::vector<double> interference;
  std::vector<double> degradation;
  double total = 0.0;
  for (std::size_t i = ok.size() - w; i < ok.size(); ++i) {
    interference.push_back(ok[i]->iter_interference);
    degradation.push_back(ok[i]->iter_degradation);
    total += ok[i]->return_disc;
  }
  s.interference_across_iters = metrics::interference_across_iterations(interference, w);
  s.degradation = metrics::tail_expectation(degradation);
  s.mean_return = total / static_cast<double>(w);
  return s;
}

namespace {

std::unique_ptr<agent::Updater> make_updater(const ExperimentConfig& c, std::size_t param_count) {
  const nn::OptimizerKind kind = nn::parse_optimizer(c.optimizer);
  switch (c.algo()) {
    case Algorithm::dqi:
    case Algorithm::large:
      return std::make_unique<agent::DqiUpdater>(nn::OptimizerState::make(kind, c.step_size, param_count),
                                                 c.effective_batch());
    case Algorithm::oa: {
      online_aware::OAConfig oa;
      oa.inner_updates = c.oa_inner_updates;
      oa.inner_step = c.oa_inner_step;
      oa.meta_step = c.oa_meta_step;
      oa.batch_size = static_cast<std::size_t>(c.batch);
      return std::make_unique<online_aware::OaUpdater>(oa);
    }
    case Algorithm::ga: {
      online_aware::GAConfig ga;
      ga.lambda = c.ga_lambda;
      ga.batch_size = static_cast<std::size_t>(c.batch / 2);
      return std::make_unique<online_aware::GaUpdater>(nn::OptimizerState::make(kind, c.step_size, param_count), ga);
    }
  }
  throw std::logic_error("unhandled algorithm");
}

// Feeds every transition to the reservoir and measures each (strided) update.
class InterferenceObserver final : public agent::StepObserver {
 public:
  InterferenceObserver(std::size_t capacity, std::uint64_t seed, agent::TdVariant variant, int stride)
      : buffer_(capacity, derive_seed(seed, Stream::reservoir)), meter_(buffer_, variant), stride_(stride) {}

  void on_iteration_start(const agent::IterationContext& ctx) override {
    meter_.begin_iteration(ctx);
    values_.clear();
  }
  void on_transition(const Transition& t) override {
    if (auto slot = buffer_.insert(t)) meter_.slot_changed(*slot);
  }
  void on_update(const nn::NetworkParams& before, const nn::NetworkParams& after,
                 const agent::IterationContext&) override {
    if (updates_++ % stride_ == 0) values_.push_back(meter_.measure(before, after));
  }

  // Iterations without any update (replay warm-up) have no interference.
  [[nodiscard]] double iteration_value() const {
    return values_.empty() ? 0.0 : metrics::iteration_interference(values_);
  }

 private:
  metrics::EvalBuffer buffer_;
  metrics::InterferenceMeter meter_;
  int stride_;
  long long updates_ = 0;
  std::vector<double> values_;
};

envs::PolicyReturn evaluate(const ExperimentConfig& c, const envs::EnvSpec& env, const nn::NetworkParams& theta,
                            Rng& rng) {
  const agent::GreedyPolicy policy(theta);
  return envs::evaluate_policy(
      env, [&](const Eigen::MatrixXd& obs) { return policy(obs); }, c.eval_rollouts, c.gamma, true, rng);
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config, const std::optional<fs::path>& out_dir,
                         const IterationCallback& on_iteration) {
  config.validate();
  RunResult result;
  result.config = config;
  result.run_id = run_id(config);

  std::unique_ptr<CsvWriter> csv;
  fs::path run_dir;
  if (out_dir) {
    run_dir = *out_dir / result.run_id;
    fs::create_directories(run_dir);
    write_file((run_dir / "config.json").string(), to_json(config) + "\n");
    csv = std::make_unique<CsvWriter>((run_dir / "iterations.csv").string(), iteration_csv_header());
  }

  const envs::EnvSpec env = config.env_spec();
  agent::AgentConfig ac;
  ac.env = env;
  ac.network = nn::NetworkSpec::mlp(env.obs_dim, config.hidden, config.hidden_layers, env.action_count);
  ac.variant = config.td_variant();
  ac.replay_capacity = static_cast<std::size_t>(config.buffer);
  ac.epsilon = config.epsilon;
  ac.steps_per_iteration = config.M;
  agent::DqiAgent agent(ac, make_updater(config, ac.network.param_count()), config.seed);
  InterferenceObserver observer(static_cast<std::size_t>(config.eval_buffer), config.seed, ac.variant,
                                config.interference_stride);
  Rng eval_rng = make_rng(config.seed, Stream::evaluation);

  metrics::PerformanceSeries performance;
  result.initial_return_disc = evaluate(config, env, agent.params(), eval_rng).discounted;
  performance.record(result.initial_return_disc);

  for (int k = 1; k <= config.iterations; ++k) {
    IterationRecord rec;
    rec.iter = k;
    try {
      agent.run_iteration(&observer);
      const envs::PolicyReturn ret = evaluate(config, env, agent.params(), eval_rng);
      if (!std::isfinite(ret.discounted) || !std::isfinite(observer.iteration_value())) {
        throw DivergenceError("non-finite evaluation or interference");
      }
      rec.return_disc = ret.discounted;
      rec.return_undisc = ret.undiscounted;
      rec.iter_interference = observer.iteration_value();
      rec.iter_degradation = performance.record(ret.discounted);
    } catch (const DivergenceError&) {
      rec.return_disc = rec.return_undisc = rec.iter_interference = rec.iter_degradation = kNaN;
      rec.status = kStatusDiverged;
    }
    if (csv) csv->write_row(iteration_csv_row(config, result.run_id, rec));
    if (on_iteration) on_iteration(rec);
    result.records.push_back(rec);
    if (rec.status != kStatusOk) break;
  }

  result.env_steps = agent.total_steps();
  result.summary = summarize(result.records, config.window);
  if (out_dir) {
    CsvWriter summary((run_dir / "summary.csv").string(), summary_csv_header());
    summary.write_row(summary_csv_row(config, result.summary));
  }
  return result;
}

namespace {

std::vector<IterationRecord> load_records(const CsvTable& t) {
  std::vector<IterationRecord> out;
  const std::size_t iter = t.column("iter"), rd = t.column("return_disc"), ru = t.column("return_undisc"),
                    ii = t.column("iter_interference"), id = t.column("iter_degradation"), st = t.column("status");
  for (const auto& row : t.rows) {
    IterationRecord r;
    r.iter = std::stoi(row[iter]);
    r.return_disc = parse_double(row[rd]);
    r.return_undisc = parse_double(row[ru]);
    r.iter_interference = parse_double(row[ii]);
    r.iter_degradation = parse_double(row[id]);
    r.status = row[st];
    out.push_back(std::move(r));
  }
  return out;
}

void check_row(const std::vector<std::string>& expected, const CsvTable& table, std::size_t row,
               const std::string& where, VerifyReport& report) {
  const std::vector<std::string> header = summary_csv_header();
  for (const char* col : {"run_id", "interference_across_iters", "degradation", "mean_return", "status"}) {
    const std::size_t c = table.column(col);
    const std::size_t e = static_cast<std::size_t>(std::find(header.begin(), header.end(), col) - header.begin());
    if (table.rows[row][c] != expected[e]) {
      report.problems.push_back(where + ": " + col + " is " + table.rows[row][c] + ", recomputed " + expected[e]);
    }
  }
}

// Recomputes the summary row of one run directory; records problems.
std::optional<std::vector<std::string>> verify_run_dir(const fs::path& dir, VerifyReport& report) {
  const std::string where = dir.string();
  try {
    const ExperimentConfig config = load_config((dir / "config.json").string());
    const CsvTable iterations = read_csv((dir / "iterations.csv").string());
    if (iterations.header != iteration_csv_header()) {
      report.problems.push_back(where + ": iterations.csv header does not match the schema");
      return std::nullopt;
    }
    const std::string id = run_id(config);
    for (const auto& row : iterations.rows) {
      if (row[0] != id) {
        report.problems.push_back(where + ": row run_id " + row[0] + " does not match config hash " + id);
        return std::nullopt;
      }
    }
    const auto records = load_records(iterations);
    const bool complete =
        static_cast<int>(records.size()) == config.iterations || (!records.empty() && records.back().status != kStatusOk);
    if (!complete) report.problems.push_back(where + ": run is incomplete");
    const std::vector<std::string> expected = summary_csv_row(config, summarize(records, config.window));
    const CsvTable summary = read_csv((dir / "summary.csv").string());
    if (summary.rows.size() != 1) {
      report.problems.push_back(where + ": summary.csv must hold exactly one row");
    } else {
      check_row(expected, summary, 0, where + "/summary.csv", report);
    }
    ++report.runs_checked;
    return expected;
  } catch (const std::exception& e) {
    report.problems.push_back(where + ": " + e.what());
    return std::nullopt;
  }
}

}  // namespace

VerifyReport verify(const fs::path& dir) {
  VerifyReport report;
  if (fs::exists(dir / "iterations.csv")) {
    verify_run_dir(dir, report);
    return report;
  }
  const fs::path summary_path = dir / "summary.csv";
  if (!fs::exists(summary_path)) {
    report.problems.push_back(dir.string() + ": neither a run directory nor a sweep directory");
    return report;
  }
  try {
    const CsvTable summary = read_csv(summary_path.string());
    const std::size_t id_col = summary.column("run_id");
    const std::size_t status_col = summary.column("status");
    for (std::size_t r = 0; r < summary.rows.size(); ++r) {
      if (summary.rows[r][status_col] == kStatusError) continue;
      const std::string& id = summary.rows[r][id_col];
      if (auto expected = verify_run_dir(dir / id, report)) {
        check_row(*expected, summary, r, summary_path.string() + " row " + id, report);
      }
    }
  } catch (const std::exception& e) {
    report.problems.push_back(summary_path.string() + ": " + e.what());
  }
  return report;
}

}  // namespace qinterf::harness
