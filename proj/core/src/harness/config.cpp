#include "qinterf/harness/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "qinterf/online_aware/online_aware.hpp"

namespace qinterf::harness {

using nlohmann::json;

Algorithm parse_algorithm(std::string_view name) {
  if (name == "dqi") return Algorithm::dqi;
  if (name == "oa") return Algorithm::oa;
  if (name == "ga") return Algorithm::ga;
  if (name == "large") return Algorithm::large;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "' (expected dqi|oa|ga|large)");
}

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::dqi: return "dqi";
    case Algorithm::oa: return "oa";
    case Algorithm::ga: return "ga";
    case Algorithm::large: return "large";
  }
  return "?";
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("config: " + what);
}

// Field table shared by parsing and serialization.
template <typename Visitor>
void visit_fields(ExperimentConfig& c, Visitor&& v) {
  v("env", c.env);
  v("variant", c.variant);
  v("algorithm", c.algorithm);
  v("hidden", c.hidden);
  v("hidden_layers", c.hidden_layers);
  v("buffer", c.buffer);
  v("M", c.M);
  v("iterations", c.iterations);
  v("batch", c.batch);
  v("optimizer", c.optimizer);
  v("step_size", c.step_size);
  v("epsilon", c.epsilon);
  v("gamma", c.gamma);
  v("max_episode_steps", c.max_episode_steps);
  v("eval_rollouts", c.eval_rollouts);
  v("eval_buffer", c.eval_buffer);
  v("interference_stride", c.interference_stride);
  v("window", c.window);
  v("seed", c.seed);
  v("oa_inner_updates", c.oa_inner_updates);
  v("oa_inner_step", c.oa_inner_step);
  v("oa_meta_step", c.oa_meta_step);
  v("ga_lambda", c.ga_lambda);
  v("large_factor", c.large_factor);
}

}  // namespace

void ExperimentConfig::validate() const {
  const envs::EnvId id = envs::parse_env_id(env);
  require(id != envs::EnvId::tworoom, "tworoom runs use the tworoom subcommand");
  (void)agent::parse_td_variant(variant);
  const Algorithm a = parse_algorithm(algorithm);
  (void)nn::parse_optimizer(optimizer);
  require(hidden >= 1 && hidden_layers >= 1, "hidden and hidden_layers must be >= 1");
  require(buffer >= 1, "buffer must be >= 1");
  require(M >= 1, "M must be >= 1");
  require(iterations >= 1, "iterations must be >= 1");
  require(batch >= 1, "batch must be >= 1");
  require(step_size >= 0.0, "step_size must be >= 0");
  require(epsilon >= 0.0 && epsilon <= 1.0, "epsilon must be in [0, 1]");
  require(gamma >= 0.0 && gamma < 1.0, "gamma must be in [0, 1)");
  require(max_episode_steps >= 1, "max_episode_steps must be >= 1");
  require(eval_rollouts >= 1, "eval_rollouts must be >= 1");
  require(eval_buffer >= 1, "eval_buffer must be >= 1");
  require(interference_stride >= 1, "interference_stride must be >= 1");
  require(window >= 1, "window must be >= 1");
  if (a == Algorithm::oa) {
    require(oa_inner_updates >= 0, "oa_inner_updates must be >= 0");
    require(oa_inner_step >= 0.0, "oa_inner_step must be >= 0");
    require(oa_meta_step >= 0.0 && oa_meta_step <= 1.0, "oa_meta_step must be in [0, 1]");
  }
  if (a == Algorithm::ga) {
    require(ga_lambda >= 0.0, "ga_lambda must be >= 0");
    require(batch % 2 == 0, "ga splits the batch into two halves; batch must be even");
  }
  if (a == Algorithm::large) require(large_factor >= 1, "large_factor must be >= 1");
}

envs::EnvSpec ExperimentConfig::env_spec() const {
  envs::EnvSpec spec = envs::EnvSpec::make(envs::parse_env_id(env));
  spec.gamma = gamma;
  spec.max_episode_steps = max_episode_steps;
  return spec;
}

std::string ExperimentConfig::variant_label() const {
  if (algorithm == "dqi") return variant;
  return algorithm + "+" + variant;
}

std::size_t ExperimentConfig::effective_batch() const {
  if (algorithm == "large") return online_aware::large_batch_size(static_cast<std::size_t>(batch), large_factor);
  return static_cast<std::size_t>(batch);
}

ExperimentConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: malformed JSON: ") + e.what());
  }
  require(j.is_object(), "expected a JSON object");
  ExperimentConfig c;
  std::size_t matched = 0;
  visit_fields(c, [&](const char* key, auto& field) {
    auto it = j.find(key);
    if (it == j.end()) return;
    ++matched;
    try {
      it->get_to(field);
    } catch (const json::exception&) {
      throw std::invalid_argument(std::string("config: wrong type for key '") + key + "'");
    }
  });
  if (matched != j.size()) {
    ExperimentConfig probe;
    for (const auto& [key, value] : j.items()) {
      bool known = false;
      visit_fields(probe, [&](const char* k, auto&) { known = known || key == k; });
      require(known, "unknown key '" + key + "'");
    }
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_json(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  json j = json::object();
  visit_fields(c, [&](const char* key, auto& field) { j[key] = field; });
  return j.dump();
}

std::string run_id(const ExperimentConfig& config) {
  const std::string text = to_json(config);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ExperimentConfig large_batch_config(ExperimentConfig base, int factor) {
  base.algorithm = "large";
  base.large_factor = factor;
  return base;
}

}  // namespace qinterf::harness
