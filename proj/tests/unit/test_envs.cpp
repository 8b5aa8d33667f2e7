#include "doctest.h"

#include <cmath>

#include "qinterf/envs/env.hpp"
#include "qinterf/envs/evaluate.hpp"

using namespace qinterf;
using namespace qinterf::envs;

TEST_CASE("env ids") {
  CHECK(parse_env_id("acrobot") == EnvId::acrobot);
  CHECK(to_string(EnvId::tworoom) == "tworoom");
  CHECK_THROWS_AS(parse_env_id("pendulum"), std::invalid_argument);
  const EnvSpec a = EnvSpec::make(EnvId::acrobot);
  CHECK(a.obs_dim == 6);
  CHECK(a.action_count == 3);
  CHECK(a.gamma == 0.99);
  CHECK(a.max_episode_steps == 500);
}

TEST_CASE("cartpole Euler step matches the reference dynamics") {
  EnvState s;
  s.physics = {0.01, -0.02, 0.03, 0.04};
  const StepResult r = cartpole::step(s, 1);
  CHECK(s.physics[0] == doctest::Approx(0.009600000000000001).epsilon(1e-14));
  CHECK(s.physics[1] == doctest::Approx(0.17467919574755525).epsilon(1e-14));
  CHECK(s.physics[2] == doctest::Approx(0.030799999999999998).epsilon(1e-14));
  CHECK(s.physics[3] == doctest::Approx(-0.24306871796000815).epsilon(1e-14));
  CHECK(r.reward == 1.0);
  CHECK_FALSE(r.terminal);
}

TEST_CASE("cartpole terminates past the angle limit") {
  EnvState s;
  s.physics = {0.0, 0.0, 0.25, 1.0};
  CHECK(cartpole::step(s, 0).terminal);
}

TEST_CASE("acrobot RK4 step matches the reference dynamics") {
  EnvState s = acrobot::from_physics({0.1, -0.2, 0.3, -0.4});
  const StepResult r = acrobot::step(s, 2);
  CHECK(s.physics[0] == doctest::Approx(0.1282116312891261).epsilon(1e-13));
  CHECK(s.physics[1] == doctest::Approx(-0.211840321026976).epsilon(1e-13));
  CHECK(s.physics[2] == doctest::Approx(-0.023484731535001357).epsilon(1e-12));
  CHECK(s.physics[3] == doctest::Approx(0.28679521459777013).epsilon(1e-12));
  CHECK(r.reward == -1.0);
  CHECK_FALSE(r.terminal);
  CHECK(r.next_observation.size() == 6);
  CHECK(r.next_observation[0] == doctest::Approx(std::cos(s.physics[0])));
}

TEST_CASE("acrobot goal is terminal with zero reward") {
  // Both links pointing up: tip height 2 > 1.
  EnvState s = acrobot::from_physics({3.1, 0.0, 0.0, 0.0});
  const StepResult r = acrobot::step(s, 1);
  CHECK(r.terminal);
  CHECK(r.reward == 0.0);
}

TEST_CASE("resets stay inside their bounds") {
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    for (double v : reset(EnvSpec::make(EnvId::cartpole), rng).physics) CHECK(std::abs(v) <= 0.05);
    for (double v : reset(EnvSpec::make(EnvId::acrobot), rng).physics) CHECK(std::abs(v) <= 0.1);
  }
}

TEST_CASE("two-room start, moves and goal") {
  Rng rng(0);
  EnvState s = reset(EnvSpec::tworoom(0), rng);
  CHECK(s.observation[0] == 0.0);
  CHECK(s.observation[1] == 0.0);
  CHECK(s.observation[2] == 0.0);

  StepResult r = tworoom::step(s, tworoom::right);
  CHECK(s.physics[0] == 1.0);
  CHECK(s.physics[1] == 0.0);
  CHECK(r.reward == -1.0);
  CHECK_FALSE(r.terminal);

  tworoom::step(s, tworoom::left);
  tworoom::step(s, tworoom::left);  // off-grid: no-op
  CHECK(s.physics[0] == 0.0);

  EnvState near = tworoom::make_state(0, {19, 18});
  r = tworoom::step(near, tworoom::down);
  CHECK(r.terminal);
  CHECK(r.reward == -1.0);
}

TEST_CASE("two-room rooms are mirrored and distinguishable") {
  const tworoom::Cell s1 = tworoom::start_cell(0), s2 = tworoom::start_cell(1);
  const tworoom::Cell g1 = tworoom::goal_cell(0), g2 = tworoom::goal_cell(1);
  CHECK(s2.x == g1.x);
  CHECK(s2.y == g1.y);
  CHECK(g2.x == s1.x);
  CHECK(g2.y == s1.y);
  CHECK(tworoom::observe(0, {4, 7}) != tworoom::observe(1, {4, 7}));
  CHECK(tworoom::observe(1, {19, 19})[0] == 1.0);
}

TEST_CASE("time limit truncates without terminating") {
  EnvSpec spec = EnvSpec::make(EnvId::acrobot);
  spec.max_episode_steps = 3;
  Rng rng(2);
  EnvState s = reset(spec, rng);
  StepResult r;
  for (int i = 0; i < 3; ++i) r = step(spec, s, 1);
  CHECK(r.truncated);
  CHECK_FALSE(r.terminal);
  CHECK_THROWS_AS(step(spec, s, 3), std::invalid_argument);
}

TEST_CASE("shortest two-room path return") {
  // Alternate right/down from (0,0): 38 moves to reach (19,19).
  const BatchPolicy policy = [](const Eigen::MatrixXd& obs) {
    std::vector<int> actions;
    for (Eigen::Index j = 0; j < obs.cols(); ++j) actions.push_back(obs(0, j) <= obs(1, j) ? tworoom::right : tworoom::down);
    return actions;
  };
  Rng rng(0);
  const PolicyReturn r = evaluate_policy(EnvSpec::tworoom(0), policy, 3, 0.99, false, rng);
  CHECK(r.undiscounted == -38.0);
  CHECK(r.discounted == doctest::Approx(-31.744540498961264).epsilon(1e-13));
}

TEST_CASE("evaluation of an always-left cartpole policy is short") {
  const BatchPolicy left = [](const Eigen::MatrixXd& obs) { return std::vector<int>(static_cast<std::size_t>(obs.cols()), 0); };
  Rng rng(4);
  const PolicyReturn r = evaluate_policy(EnvSpec::make(EnvId::cartpole), left, 20, 0.99, true, rng);
  CHECK(r.undiscounted > 5.0);
  CHECK(r.undiscounted < 20.0);
  CHECK(r.discounted < r.undiscounted);
}

TEST_CASE("evaluation respects the episode cap") {
  EnvSpec spec = EnvSpec::tworoom(0);
  spec.max_episode_steps = 50;
  const BatchPolicy stuck = [](const Eigen::MatrixXd& obs) { return std::vector<int>(static_cast<std::size_t>(obs.cols()), tworoom::up); };
  Rng rng(0);
  CHECK(evaluate_policy(spec, stuck, 2, 0.99, false, rng).undiscounted == -50.0);
}
