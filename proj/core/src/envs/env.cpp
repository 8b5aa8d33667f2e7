#include "qinterf/envs/env.hpp"

#include <stdexcept>
#include <string>

namespace qinterf::envs {

EnvId parse_env_id(std::string_view name) {
  if (name == "cartpole") return EnvId::cartpole;
  if (name == "acrobot") return EnvId::acrobot;
  if (name == "tworoom") return EnvId::tworoom;
  throw std::invalid_argument("unknown environment '" + std::string(name) + "' (expected cartpole|acrobot|tworoom)");
}

std::string_view to_string(EnvId id) {
  switch (id) {
    case EnvId::cartpole: return "cartpole";
    case EnvId::acrobot: return "acrobot";
    case EnvId::tworoom: return "tworoom";
  }
  return "?";
}

EnvSpec EnvSpec::make(EnvId id) {
  EnvSpec spec;
  spec.id = id;
  switch (id) {
    case EnvId::cartpole:
      spec.obs_dim = cartpole::kObsDim;
      spec.action_count = cartpole::kActions;
      break;
    case EnvId::acrobot:
      spec.obs_dim = acrobot::kObsDim;
      spec.action_count = acrobot::kActions;
      break;
    case EnvId::tworoom:
      spec.obs_dim = tworoom::kObsDim;
      spec.action_count = tworoom::kActions;
      break;
  }
  return spec;
}

EnvSpec EnvSpec::tworoom(int room) {
  if (room != 0 && room != 1) throw std::invalid_argument("tworoom: room must be 0 or 1");
  EnvSpec spec = make(EnvId::tworoom);
  spec.room = room;
  return spec;
}

EnvState reset(const EnvSpec& spec, Rng& rng) {
  switch (spec.id) {
    case EnvId::cartpole: return cartpole::reset(rng);
    case EnvId::acrobot: return acrobot::reset(rng);
    case EnvId::tworoom: return tworoom::make_state(spec.room, tworoom::start_cell(spec.room));
  }
  throw std::logic_error("reset: unhandled environment");
}

StepResult step(const EnvSpec& spec, EnvState& state, int action) {
  if (action < 0 || action >= spec.action_count) {
    throw std::invalid_argument("step: action " + std::to_string(action) + " outside [0, " +
                                std::to_string(spec.action_count) + ")");
  }
  StepResult result;
  switch (spec.id) {
    case EnvId::cartpole: result = cartpole::step(state, action); break;
    case EnvId::acrobot: result = acrobot::step(state, action); break;
    case EnvId::tworoom: result = tworoom::step(state, action); break;
  }
  ++state.steps_elapsed;
  if (!result.terminal && state.steps_elapsed >= spec.max_episode_steps) result.truncated = true;
  return result;
}

}  // namespace qinterf::envs
