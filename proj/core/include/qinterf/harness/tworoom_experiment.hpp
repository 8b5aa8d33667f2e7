#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace qinterf::harness {

/// Train in room 1, teleport to room 2 after a third of the steps, and track
/// the greedy policy's return in room 1 throughout.
struct TwoRoomConfig {
  std::string agent = "dqi-target";  // dqi-target | tilecode-linear
  long long steps = 60000;
  long long eval_every = 1000;
  std::uint64_t seed = 0;
  // DQI agent
  int hidden = 64;
  int hidden_layers = 2;
  int M = 25;
  int batch = 64;
  int buffer = 10000;
  double step_size = 3e-3;  // Adam
  // tile-coded linear Q-learning
  int tilings = 8;
  int tiles_per_dim = 5;
  double linear_step = 1.0 / 8;  // per active feature
  // shared
  double epsilon = 0.3;
  int eval_buffer = 1000;

  /// Step at which the agent moves to room 2: steps / 3, rounded down to a
  /// whole iteration for the DQI agent.
  [[nodiscard]] long long switch_step() const;
  void validate() const;
};

/// One evaluation point. Interference is the mean Update Interference on the
/// room-1 reservoir over the updates since the previous point.
struct TwoRoomRecord {
  long long step = 0;
  int active_room = 0;  // 0 = room 1, 1 = room 2
  double room1_return_undisc = 0.0;
  double room1_return_disc = 0.0;
  double room1_interference = 0.0;
};

struct TwoRoomResult {
  TwoRoomConfig config;
  long long switch_step = 0;
  std::vector<TwoRoomRecord> records;
};

const std::vector<std::string>& tworoom_csv_header();

/// Writes <out_dir>/tworoom-<agent>-seed<seed>.csv incrementally when given.
TwoRoomResult run_tworoom(const TwoRoomConfig& config, const std::optional<std::filesystem::path>& out_dir = {});

/// Forgetting statistics of one run.
struct ForgettingSummary {
  double pre_switch_return = 0.0;    // last evaluation at or before the switch
  double min_post_return = 0.0;      // within `horizon` steps after the switch
  double max_post_deviation = 0.0;   // max |post - pre| / |pre| over every post-switch point
  double max_post_interference = 0.0;
};

ForgettingSummary summarize_forgetting(const TwoRoomResult& result, long long horizon);

}  // namespace qinterf::harness
