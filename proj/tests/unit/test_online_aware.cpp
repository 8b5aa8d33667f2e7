#include "doctest.h"

#include "generators.hpp"
#include "qinterf/agent/dqi_agent.hpp"
#include "qinterf/online_aware/gradient_alignment.hpp"
#include "qinterf/online_aware/online_aware.hpp"

using namespace qinterf;
using namespace qinterf::online_aware;
namespace gen = qinterf::testing;

namespace {

struct Fixture {
  Rng rng{41};
  nn::NetworkSpec spec = nn::NetworkSpec::mlp(4, 16, 2, 3);
  agent::IterationContext ctx = gen::random_context(rng, spec);
  nn::NetworkParams theta = nn::init_params(spec, 8);
  agent::ReplayBuffer buffer = gen::filled_buffer(rng, spec, 200, 150);
};

OAConfig oa_config(int n, double inner, double meta, std::size_t batch = 16) {
  OAConfig c;
  c.inner_updates = n;
  c.inner_step = inner;
  c.meta_step = meta;
  c.batch_size = batch;
  return c;
}

}  // namespace

TEST_CASE("inner loop with no updates or a zero step leaves theta alone") {
  Fixture f;
  Rng r(1);
  CHECK(inner_loop(f.theta, f.buffer, oa_config(0, 1e-2, 1.0), f.ctx, agent::TdVariant::no_target, r) == f.theta);
  CHECK(inner_loop(f.theta, f.buffer, oa_config(5, 0.0, 1.0), f.ctx, agent::TdVariant::no_target, r) == f.theta);
}

TEST_CASE("one inner update equals one SGD DQI step") {
  Fixture f;
  for (auto variant : {agent::TdVariant::target, agent::TdVariant::no_target}) {
    Rng ra(5), rb(5);
    const nn::NetworkParams via_oa = inner_loop(f.theta, f.buffer, oa_config(1, 1e-2, 1.0), f.ctx, variant, ra);
    nn::NetworkParams via_dqi = f.theta;
    auto opt = nn::OptimizerState::make(nn::OptimizerKind::sgd, 1e-2, f.theta.size());
    agent::dqi_step(via_dqi, opt, f.ctx, f.buffer, 16, variant, rb);
    CHECK((via_oa.flat() - via_dqi.flat()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("oa_step with n = 1 and meta step 1 is bit-identical to an SGD DQI step") {
  Fixture f;
  nn::NetworkParams a = f.theta, b = f.theta;
  Rng ra(9), rb(9);
  auto opt = nn::OptimizerState::make(nn::OptimizerKind::sgd, 3e-3, f.theta.size());
  for (int step = 0; step < 5; ++step) {
    CHECK(oa_step(a, f.buffer, oa_config(1, 3e-3, 1.0), f.ctx, agent::TdVariant::no_target, ra));
    CHECK(agent::dqi_step(b, opt, f.ctx, f.buffer, 16, agent::TdVariant::no_target, rb));
  }
  CHECK(a == b);
}

TEST_CASE("reptile meta step interpolates exactly at the ends") {
  const auto spec = nn::NetworkSpec::mlp(2, 3, 1, 2);
  const nn::NetworkParams zero = nn::NetworkParams::zeros(spec);
  nn::NetworkParams two = zero;
  two.flat().setConstant(2.0);
  CHECK(reptile_meta_step(zero, two, 0.5).flat().isConstant(1.0, 0.0));
  Rng rng(3);
  const auto a = nn::init_params(spec, 1), b = nn::init_params(spec, 2);
  CHECK(reptile_meta_step(a, b, 1.0) == b);
  CHECK(reptile_meta_step(a, b, 0.0) == a);
}

TEST_CASE("reptile meta step commutes with a common shift") {
  Rng rng(12);
  const auto spec = nn::NetworkSpec::mlp(3, 5, 1, 2);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = nn::init_params(spec, rng()), b = nn::init_params(spec, rng());
    const double alpha = gen::uniform(rng, 0.0, 1.0);
    const Eigen::VectorXd c = gen::random_vector(rng, static_cast<int>(a.size()), 3.0);
    nn::NetworkParams as = a, bs = b;
    as.flat() += c;
    bs.flat() += c;
    const Eigen::VectorXd shifted = reptile_meta_step(as, bs, alpha).flat();
    const Eigen::VectorXd expected = reptile_meta_step(a, b, alpha).flat() + c;
    CHECK((shifted - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("oa_step is a no-op when every TD error is zero") {
  const auto spec = nn::NetworkSpec::mlp(3, 4, 1, 2);
  nn::NetworkParams theta = nn::NetworkParams::zeros(spec);
  agent::IterationContext ctx;
  ctx.frozen = theta;
  agent::ReplayBuffer buffer(50);
  Rng rng(2);
  for (int i = 0; i < 50; ++i) {
    Transition t = gen::random_transition(rng, 3, 2);
    t.reward = 0.0;
    buffer.add(t);
  }
  const nn::NetworkParams before = theta;
  CHECK(oa_step(theta, buffer, oa_config(5, 0.1, 0.5), ctx, agent::TdVariant::no_target, rng));
  CHECK(theta == before);
}

TEST_CASE("OA leaves the buffer and the context untouched and waits for data") {
  Fixture f;
  const agent::IterationContext ctx_copy = f.ctx;
  std::vector<double> rewards;
  for (std::size_t i = 0; i < f.buffer.size(); ++i) rewards.push_back(f.buffer.at(i).reward);
  nn::NetworkParams theta = f.theta;
  Rng rng(4);
  oa_step(theta, f.buffer, oa_config(3, 1e-2, 0.3), f.ctx, agent::TdVariant::target, rng);
  CHECK(f.ctx.frozen == ctx_copy.frozen);
  CHECK(f.ctx.iteration == ctx_copy.iteration);
  for (std::size_t i = 0; i < f.buffer.size(); ++i) CHECK(f.buffer.at(i).reward == rewards[i]);

  agent::ReplayBuffer tiny = gen::filled_buffer(f.rng, f.spec, 10, 5);
  nn::NetworkParams t2 = f.theta;
  CHECK_FALSE(oa_step(t2, tiny, oa_config(3, 1e-2, 0.3), f.ctx, agent::TdVariant::target, rng));
  CHECK(t2 == f.theta);
  CHECK_THROWS_AS(inner_loop(f.theta, tiny, oa_config(3, 1e-2, 0.3), f.ctx, agent::TdVariant::target, rng),
                  std::invalid_argument);
}

TEST_CASE("OA config validation") {
  CHECK_THROWS_AS(oa_config(-1, 1e-3, 0.1).validate(), std::invalid_argument);
  CHECK_THROWS_AS(oa_config(1, 1e-3, 1.5).validate(), std::invalid_argument);
  CHECK_THROWS_AS(oa_config(1, 1e-3, 0.1, 0).validate(), std::invalid_argument);
}

TEST_CASE("alignment gradient matches H1 g2 + H2 g1 on quadratics") {
  Rng rng(19);
  const int n = 7;
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXd h1(n, n), h2(n, n);
    for (int i = 0; i < n; ++i) {
      h1.col(i) = gen::random_vector(rng, n);
      h2.col(i) = gen::random_vector(rng, n);
    }
    h1 = (h1 + h1.transpose()).eval();
    h2 = (h2 + h2.transpose()).eval();
    const Eigen::VectorXd c1 = gen::random_vector(rng, n), c2 = gen::random_vector(rng, n);
    const nn::GradientFn g1 = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return h1 * x + c1; };
    const nn::GradientFn g2 = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return h2 * x + c2; };
    const Eigen::VectorXd theta = gen::random_vector(rng, n, 2.0);
    const Eigen::VectorXd analytic = h1 * g2(theta) + h2 * g1(theta);
    const Eigen::VectorXd fd = alignment_gradient(g1, g2, theta, 1e-4 * (1.0 + theta.cwiseAbs().maxCoeff()));
    CHECK((fd - analytic).cwiseAbs().maxCoeff() < 1e-6);
    const Eigen::VectorXd swapped = alignment_gradient(g2, g1, theta, 1e-4 * (1.0 + theta.cwiseAbs().maxCoeff()));
    CHECK((fd - swapped).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("GA regularizer value is symmetric in the two batches") {
  Fixture f;
  Rng rng(6);
  const TransitionBatch b1 = f.buffer.sample(8, rng), b2 = f.buffer.sample(8, rng);
  const Eigen::VectorXd g1 = mean_squared_td_gradient(f.theta, f.ctx, b1, agent::TdVariant::no_target);
  const Eigen::VectorXd g2 = mean_squared_td_gradient(f.theta, f.ctx, b2, agent::TdVariant::no_target);
  CHECK(g1.dot(g2) == doctest::Approx(g2.dot(g1)).epsilon(1e-14));
  GAConfig ga;
  ga.lambda = 1.0;
  ga.batch_size = 8;
  const Eigen::VectorXd d12 = ga_direction(f.theta, f.ctx, b1, b2, ga, agent::TdVariant::target);
  const Eigen::VectorXd d21 = ga_direction(f.theta, f.ctx, b2, b1, ga, agent::TdVariant::target);
  CHECK((d12 - d21).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("mean squared TD gradient is -2 times the DQI direction") {
  Fixture f;
  Rng rng(7);
  const TransitionBatch b = f.buffer.sample(10, rng);
  const Eigen::VectorXd g = mean_squared_td_gradient(f.theta, f.ctx, b, agent::TdVariant::target);
  const Eigen::VectorXd d = agent::dqi_direction(f.theta, f.ctx, b, agent::TdVariant::target);
  CHECK((g + 2.0 * d).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("GA with lambda 0 reproduces DQI bit for bit") {
  Fixture f;
  for (auto kind : {nn::OptimizerKind::sgd, nn::OptimizerKind::adam}) {
    nn::NetworkParams a = f.theta, b = f.theta;
    auto opt_a = nn::OptimizerState::make(kind, 1e-3, f.theta.size());
    auto opt_b = opt_a;
    GAConfig ga;
    ga.lambda = 0.0;
    ga.batch_size = 16;
    Rng ra(13), rb(13);
    for (int step = 0; step < 5; ++step) {
      CHECK(ga_step(a, opt_a, f.buffer, ga, f.ctx, agent::TdVariant::no_target, ra));
      CHECK(agent::dqi_step(b, opt_b, f.ctx, f.buffer, 32, agent::TdVariant::no_target, rb));
    }
    CHECK(a == b);
  }
}

TEST_CASE("GA with lambda > 0 moves differently from DQI") {
  Fixture f;
  nn::NetworkParams a = f.theta, b = f.theta;
  auto opt_a = nn::OptimizerState::make(nn::OptimizerKind::sgd, 1e-2, f.theta.size());
  auto opt_b = opt_a;
  GAConfig ga;
  ga.lambda = 10.0;
  ga.batch_size = 16;
  Rng ra(13), rb(13);
  ga_step(a, opt_a, f.buffer, ga, f.ctx, agent::TdVariant::no_target, ra);
  agent::dqi_step(b, opt_b, f.ctx, f.buffer, 32, agent::TdVariant::no_target, rb);
  CHECK_FALSE(a == b);
}

TEST_CASE("large batch sizes") {
  CHECK(large_batch_size(64, 10) == 640);
  CHECK(large_batch_size(64, 40) == 2560);
  CHECK(large_batch_size(64, 1) == 64);
  CHECK_THROWS_AS(large_batch_size(64, 0), std::invalid_argument);
}
