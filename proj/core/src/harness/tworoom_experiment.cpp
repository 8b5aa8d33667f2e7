#include "qinterf/harness/tworoom_experiment.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "qinterf/agent/dqi_agent.hpp"
#include "qinterf/agent/linear_q.hpp"
#include "qinterf/envs/evaluate.hpp"
#include "qinterf/harness/csv.hpp"
#include "qinterf/metrics/eval_buffer.hpp"
#include "qinterf/metrics/interference.hpp"

namespace qinterf::harness {

namespace fs = std::filesystem;

long long TwoRoomConfig::switch_step() const {
  const long long third = steps / 3;
  if (agent == "dqi-target") return third - third % M;
  return third;
}

void TwoRoomConfig::validate() const {
  if (agent != "dqi-target" && agent != "tilecode-linear") {
    throw std::invalid_argument("tworoom: agent must be dqi-target or tilecode-linear");
  }
  if (steps < 3) throw std::invalid_argument("tworoom: steps must be >= 3");
  if (eval_every < 1) throw std::invalid_argument("tworoom: eval_every must be >= 1");
  if (M < 1 || batch < 1 || buffer < 1 || hidden < 1 || hidden_layers < 1 || eval_buffer < 1) {
    throw std::invalid_argument("tworoom: sizes must be >= 1");
  }
  if (!(linear_step > 0.0) || step_size < 0.0) throw std::invalid_argument("tworoom: step sizes must be positive");
  if (epsilon < 0.0 || epsilon > 1.0) throw std::invalid_argument("tworoom: epsilon must be in [0, 1]");
}

const std::vector<std::string>& tworoom_csv_header() {
  static const std::vector<std::string> header = {"step",
                                                  "agent",
                                                  "seed",
                                                  "active_room",
                                                  "room1_return_undisc",
                                                  "room1_return_disc",
                                                  "room1_interference"};
  return header;
}

namespace {

const envs::EnvSpec kRoom1 = envs::EnvSpec::tworoom(0);
const envs::EnvSpec kRoom2 = envs::EnvSpec::tworoom(1);

// Room 1 is deterministic from a fixed start, so one greedy rollout is exact.
envs::PolicyReturn room1_return(const envs::BatchPolicy& policy, Rng& rng) {
  return envs::evaluate_policy(kRoom1, policy, 1, kRoom1.gamma, false, rng);
}

double mean_or_zero(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return metrics::iteration_interference(v);
}

class Recorder {
 public:
  Recorder(const TwoRoomConfig& c, const std::optional<fs::path>& out_dir) : config_(c) {
    if (out_dir) {
      fs::create_directories(*out_dir);
      const fs::path path = *out_dir / ("tworoom-" + c.agent + "-seed" + std::to_string(c.seed) + ".csv");
      csv_ = std::make_unique<CsvWriter>(path.string(), tworoom_csv_header());
    }
  }

  void record(TwoRoomResult& result, const TwoRoomRecord& r) {
    result.records.push_back(r);
    if (csv_) {
      csv_->write_row(std::vector<std::string>{
          std::to_string(r.step), config_.agent, std::to_string(config_.seed), std::to_string(r.active_room),
          format_double(r.room1_return_undisc), format_double(r.room1_return_disc),
          format_double(r.room1_interference)});
    }
  }

 private:
  const TwoRoomConfig& config_;
  std::unique_ptr<CsvWriter> csv_;
};

// Collects room-1 transitions and measures every update against them.
class Room1Observer final : public agent::StepObserver {
 public:
  Room1Observer(std::size_t capacity, std::uint64_t seed)
      : buffer_(capacity, derive_seed(seed, Stream::reservoir)), meter_(buffer_, agent::TdVariant::target) {}

  bool collecting = true;

  void on_iteration_start(const agent::IterationContext& ctx) override { meter_.begin_iteration(ctx); }
  void on_transition(const Transition& t) override {
    if (!collecting) return;
    if (auto slot = buffer_.insert(t)) meter_.slot_changed(*slot);
  }
  void on_update(const nn::NetworkParams& before, const nn::NetworkParams& after,
                 const agent::IterationContext&) override {
    if (buffer_.size() > 0) values.push_back(meter_.measure(before, after));
  }

  std::vector<double> values;

 private:
  metrics::EvalBuffer buffer_;
  metrics::InterferenceMeter meter_;
};

TwoRoomResult run_dqi(const TwoRoomConfig& c, const std::optional<fs::path>& out_dir) {
  TwoRoomResult result{c, c.switch_step(), {}};
  Recorder recorder(c, out_dir);
  agent::AgentConfig ac;
  ac.env = kRoom1;
  ac.network = nn::NetworkSpec::mlp(kRoom1.obs_dim, c.hidden, c.hidden_layers, kRoom1.action_count);
  ac.variant = agent::TdVariant::target;
  ac.replay_capacity = static_cast<std::size_t>(c.buffer);
  ac.epsilon = c.epsilon;
  ac.steps_per_iteration = c.M;
  const std::size_t p = ac.network.param_count();
  agent::DqiAgent dqi(ac,
                      std::make_unique<agent::DqiUpdater>(nn::OptimizerState::make(nn::OptimizerKind::adam, c.step_size, p),
                                                          static_cast<std::size_t>(c.batch)),
                      c.seed);
  Room1Observer observer(static_cast<std::size_t>(c.eval_buffer), c.seed);
  Rng eval_rng = make_rng(c.seed, Stream::evaluation);

  auto evaluate = [&](int room) {
    const agent::GreedyPolicy policy(dqi.params());
    const auto ret = room1_return([&](const Eigen::MatrixXd& obs) { return policy(obs); }, eval_rng);
    recorder.record(result, {dqi.total_steps(), room, ret.undiscounted, ret.discounted, mean_or_zero(observer.values)});
    observer.values.clear();
  };

  int room = 0;
  evaluate(room);
  long long next_eval = c.eval_every;
  while (dqi.total_steps() < c.steps) {
    if (room == 0 && dqi.total_steps() >= result.switch_step) {
      room = 1;
      observer.collecting = false;
      dqi.switch_env(kRoom2);
    }
    dqi.run_iteration(&observer);
    if (dqi.total_steps() >= next_eval || dqi.total_steps() >= c.steps) {
      evaluate(room);
      while (next_eval <= dqi.total_steps()) next_eval += c.eval_every;
    }
  }
  return result;
}

TwoRoomResult run_linear(const TwoRoomConfig& c, const std::optional<fs::path>& out_dir) {
  TwoRoomResult result{c, c.switch_step(), {}};
  Recorder recorder(c, out_dir);
  agent::LinearQAgent linear(agent::TileCoder(c.tilings, c.tiles_per_dim), kRoom1, c.linear_step, c.epsilon, c.seed);
  metrics::EvalBuffer buffer(static_cast<std::size_t>(c.eval_buffer), derive_seed(c.seed, Stream::reservoir));
  Rng eval_rng = make_rng(c.seed, Stream::evaluation);
  const double gamma = kRoom1.gamma;

  // TD errors of the room-1 reservoir at the current weights.
  std::vector<double> errors;
  auto refresh = [&](std::size_t i) { errors[i] = linear.q().td_error(buffer.items()[i], gamma); };
  std::vector<double> values;

  auto evaluate = [&](long long step, int room) {
    const auto& q = linear.q();
    const auto policy = [&](const Eigen::MatrixXd& obs) {
      std::vector<int> actions;
      for (Eigen::Index j = 0; j < obs.cols(); ++j) actions.push_back(agent::argmax_lowest(q.values(obs.col(j))));
      return actions;
    };
    const auto ret = room1_return(policy, eval_rng);
    recorder.record(result, {step, room, ret.undiscounted, ret.discounted, mean_or_zero(values)});
    values.clear();
  };

  int room = 0;
  evaluate(0, room);
  for (long long s = 0; s < c.steps; ++s) {
    if (room == 0 && s == result.switch_step) {
      room = 1;
      linear.switch_env(kRoom2);
    }
    const Transition t = linear.act();
    if (room == 0) {
      if (auto slot = buffer.insert(t)) {
        if (*slot == errors.size()) errors.push_back(0.0);
        refresh(*slot);
      }
    }
    const std::vector<double> before = errors;
    linear.learn(t);
    for (std::size_t i = 0; i < errors.size(); ++i) refresh(i);
    if (!errors.empty()) values.push_back(metrics::update_interference(before, errors));
    if ((s + 1) % c.eval_every == 0 || s + 1 == c.steps) evaluate(s + 1, room);
  }
  return result;
}

}  // namespace

TwoRoomResult run_tworoom(const TwoRoomConfig& config, const std::optional<fs::path>& out_dir) {
  config.validate();
  if (config.agent == "dqi-target") return run_dqi(config, out_dir);
  return run_linear(config, out_dir);
}

ForgettingSummary summarize_forgetting(const TwoRoomResult& result, long long horizon) {
  ForgettingSummary s;
  const TwoRoomRecord* pre = nullptr;
  for (const auto& r : result.records) {
    if (r.step <= result.switch_step) pre = &r;
  }
  if (pre == nullptr) throw std::invalid_argument("tworoom: no evaluation before the switch");
  s.pre_switch_return = pre->room1_return_undisc;
  s.min_post_return = s.pre_switch_return;
  const double scale = std::max(std::abs(s.pre_switch_return), 1.0);
  for (const auto& r : result.records) {
    if (r.step <= result.switch_step) continue;
    if (r.step <= result.switch_step + horizon) s.min_post_return = std::min(s.min_post_return, r.room1_return_undisc);
    s.max_post_deviation = std::max(s.max_post_deviation, std::abs(r.room1_return_undisc - s.pre_switch_return) / scale);
    s.max_post_interference = std::max(s.max_post_interference, r.room1_interference);
  }
  return s;
}

}  // namespace qinterf::harness
