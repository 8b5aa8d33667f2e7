#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "qinterf/agent/td.hpp"
#include "qinterf/envs/env.hpp"
#include "qinterf/nn/optimizer.hpp"

namespace qinterf::harness {

enum class Algorithm { dqi, oa, ga, large };

Algorithm parse_algorithm(std::string_view name);
std::string_view to_string(Algorithm a);

/// Everything that determines one run. Serialized as a flat JSON object whose
/// keys are exactly the field names below; unknown keys are rejected.
struct ExperimentConfig {
  std::string env = "cartpole";
  std::string variant = "dqi-target";  // dqi-no-target | dqi-target
  std::string algorithm = "dqi";       // dqi | oa | ga | large
  int hidden = 64;
  int hidden_layers = 2;
  int buffer = 10000;  // replay capacity
  int M = 200;         // environment steps per iteration
  int iterations = 400;
  int batch = 64;
  std::string optimizer = "adam";
  double step_size = 3e-4;
  double epsilon = 0.1;
  double gamma = 0.99;
  int max_episode_steps = 500;
  int eval_rollouts = 50;
  int eval_buffer = 1000;
  int interference_stride = 1;  // measure Update Interference every k-th update
  int window = 200;             // summary over the last `window` iterations
  std::uint64_t seed = 0;
  // online-aware
  int oa_inner_updates = 10;
  double oa_inner_step = 1e-3;
  double oa_meta_step = 0.1;
  // gradient alignment; B1 and B2 each hold batch / 2 transitions
  double ga_lambda = 0.1;
  // large batch
  int large_factor = 10;

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;

  [[nodiscard]] envs::EnvSpec env_spec() const;
  [[nodiscard]] agent::TdVariant td_variant() const { return agent::parse_td_variant(variant); }
  [[nodiscard]] Algorithm algo() const { return parse_algorithm(algorithm); }
  /// Variant column of the per-iteration CSV: the TD variant, prefixed by the
  /// algorithm when it is not plain DQI (e.g. "oa+dqi-no-target").
  [[nodiscard]] std::string variant_label() const;
  /// Mini-batch actually used per update (the Large factor applied).
  [[nodiscard]] std::size_t effective_batch() const;
};

/// Parses a flat JSON object. Missing keys keep their defaults.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::string& path);
/// Canonical JSON (sorted keys, every field present).
std::string to_json(const ExperimentConfig& config);
/// 16 hex digits of FNV-1a 64 over to_json(config).
std::string run_id(const ExperimentConfig& config);

/// Large baseline: the same run with `factor` times the batch.
ExperimentConfig large_batch_config(ExperimentConfig base, int factor);

}  // namespace qinterf::harness
