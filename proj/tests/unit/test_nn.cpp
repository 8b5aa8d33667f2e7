#include "doctest.h"

#include <cmath>

#include "generators.hpp"
#include "qinterf/errors.hpp"
#include "qinterf/nn/hvp.hpp"
#include "qinterf/nn/network.hpp"
#include "qinterf/nn/optimizer.hpp"

using namespace qinterf;
using namespace qinterf::nn;
using qinterf::testing::uniform_int;

namespace {

// 2 -> 2 -> 1 network with hand-picked weights.
NetworkParams tiny_network() {
  Eigen::VectorXd flat(9);
  flat << 1, 0.5, -1, 2,  // W1, column-major
      0, -1,              // b1
      1, -2,              // W2
      0.5;                // b2
  return NetworkParams(NetworkSpec{{2, 2, 1}}, flat);
}

}  // namespace

TEST_CASE("parameter count of the cartpole network") {
  CHECK(NetworkSpec::mlp(4, 64, 2, 2).param_count() == 4610);
  CHECK(NetworkSpec::mlp(6, 128, 2, 3).param_count() == 6 * 128 + 128 + 128 * 128 + 128 + 128 * 3 + 3);
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(NetworkSpec({{4, 2}}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(NetworkSpec({{4, 0, 2}}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(NetworkParams(NetworkSpec::mlp(2, 3, 1, 2), Eigen::VectorXd::Zero(5)), std::invalid_argument);
}

TEST_CASE("forward on a hand-computed network") {
  Eigen::VectorXd x(2);
  x << 1, 2;
  CHECK(forward(tiny_network(), x)[0] == doctest::Approx(-6.5).epsilon(1e-15));
}

TEST_CASE("output gradient on a hand-computed network") {
  Eigen::MatrixXd x(2, 1);
  x << 1, 2;
  const std::vector<int> actions{0};
  const std::vector<double> coeffs{1.0};
  Eigen::VectorXd expected(9);
  expected << 0, -2, 0, -4, 0, -2, 0, 3.5, 1;
  const Eigen::VectorXd g = selected_output_gradient(tiny_network(), x, actions, coeffs);
  CHECK((g - expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("init is seeded, He-scaled and has zero biases") {
  const auto spec = NetworkSpec::mlp(50, 200, 2, 3);
  const NetworkParams a = init_params(spec, 7);
  CHECK(a == init_params(spec, 7));
  CHECK_FALSE(a == init_params(spec, 8));
  for (std::size_t l = 0; l < spec.layer_count(); ++l) {
    CHECK(a.bias(l).isZero(0.0));
    const auto w = a.weights(l);
    const double var = w.array().square().mean();
    const double expected = 2.0 / spec.layer_sizes[l];
    // sample variance of n normals: relative sd sqrt(2/n)
    CHECK(std::abs(var / expected - 1.0) < 5.0 * std::sqrt(2.0 / static_cast<double>(w.size())));
  }
}

TEST_CASE("flatten and unflatten round trip") {
  const auto spec = NetworkSpec::mlp(3, 5, 2, 2);
  const NetworkParams p = init_params(spec, 1);
  const Eigen::VectorXd flat = flatten(p);
  CHECK(unflatten(spec, std::span<const double>(flat.data(), static_cast<std::size_t>(flat.size()))) == p);
}

TEST_CASE("batched forward equals per-state forward") {
  Rng rng(5);
  const auto spec = qinterf::testing::random_spec(rng, 16);
  const NetworkParams p = init_params(spec, 3);
  Eigen::MatrixXd states(spec.input_dim(), 7);
  for (int j = 0; j < 7; ++j) states.col(j) = qinterf::testing::random_vector(rng, spec.input_dim());
  const Eigen::MatrixXd q = forward(p, states);
  for (int j = 0; j < 7; ++j) CHECK((q.col(j) - forward(p, Eigen::VectorXd(states.col(j)))).norm() < 1e-12);
}

TEST_CASE("TD-loss gradient matches finite differences") {
  Rng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const auto spec = qinterf::testing::random_spec(rng, trial % 2 == 0 ? 8 : 32);
    const NetworkParams theta = init_params(spec, rng());
    const auto batch = qinterf::testing::random_transitions(rng, spec, uniform_int(rng, 1, 8));
    // Fixed regression targets make the loss a plain function of theta.
    std::vector<double> targets;
    for (std::size_t i = 0; i < batch.size(); ++i) targets.push_back(qinterf::testing::uniform(rng, -2, 2));
    auto loss = [&](const Eigen::VectorXd& flat) {
      const NetworkParams p(spec, flat);
      double total = 0.0;
      for (std::size_t i = 0; i < batch.size(); ++i) {
        const double d = targets[i] - forward(p, batch[i].state)[batch[i].action];
        total += 0.5 * d * d;
      }
      return total / static_cast<double>(batch.size());
    };
    std::vector<double> deltas;
    for (std::size_t i = 0; i < batch.size(); ++i) deltas.push_back(targets[i] - forward(theta, batch[i].state)[batch[i].action]);
    const Eigen::VectorXd analytic = grad_td_loss(theta, batch, deltas);
    const Eigen::VectorXd numeric = -qinterf::testing::numeric_gradient(loss, theta.flat(), 1e-6);
    CHECK(qinterf::testing::max_relative_error(analytic, numeric, 1e-7) < 1e-4);
  }
}

TEST_CASE("SGD step") {
  auto p = NetworkParams::zeros(NetworkSpec::mlp(1, 1, 1, 1));
  auto opt = OptimizerState::make(OptimizerKind::sgd, 0.5, p.size());
  const Eigen::VectorXd d = Eigen::VectorXd::Ones(p.size());
  optimizer_step(opt, p, d);
  CHECK(p.flat().isConstant(0.5, 0.0));
}

TEST_CASE("Adam and RMSprop follow their update rules") {
  Rng rng(3);
  const auto spec = NetworkSpec::mlp(2, 3, 1, 2);
  for (OptimizerKind kind : {OptimizerKind::adam, OptimizerKind::rmsprop}) {
    NetworkParams p = init_params(spec, 2);
    auto opt = OptimizerState::make(kind, 1e-2, p.size());
    // Scalar reference implementation.
    std::vector<double> theta(p.flat().data(), p.flat().data() + p.size());
    std::vector<double> m(theta.size(), 0.0), v(theta.size(), 0.0);
    for (int t = 1; t <= 4; ++t) {
      const Eigen::VectorXd d = qinterf::testing::random_vector(rng, static_cast<int>(p.size()));
      optimizer_step(opt, p, d);
      for (std::size_t i = 0; i < theta.size(); ++i) {
        const double g = d[static_cast<Eigen::Index>(i)];
        if (kind == OptimizerKind::adam) {
          m[i] = 0.9 * m[i] + 0.1 * g;
          v[i] = 0.999 * v[i] + 0.001 * g * g;
          const double mh = m[i] / (1.0 - std::pow(0.9, t));
          const double vh = v[i] / (1.0 - std::pow(0.999, t));
          theta[i] += 1e-2 * mh / (std::sqrt(vh) + 1e-8);
        } else {
          v[i] = 0.99 * v[i] + 0.01 * g * g;
          theta[i] += 1e-2 * g / (std::sqrt(v[i]) + 1e-8);
        }
      }
    }
    for (std::size_t i = 0; i < theta.size(); ++i) {
      CHECK(p.flat()[static_cast<Eigen::Index>(i)] == doctest::Approx(theta[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("optimizer rejects non-finite directions without side effects") {
  auto p = NetworkParams::zeros(NetworkSpec::mlp(1, 1, 1, 1));
  auto opt = OptimizerState::make(OptimizerKind::adam, 0.1, p.size());
  Eigen::VectorXd d = Eigen::VectorXd::Ones(p.size());
  d[0] = std::nan("");
  const NetworkParams before = p;
  CHECK_THROWS_AS(optimizer_step(opt, p, d), DivergenceError);
  CHECK(p == before);
  CHECK(opt.steps == 0);
  CHECK(opt.first_moment.isZero(0.0));
}

TEST_CASE("optimizer names") {
  CHECK(parse_optimizer("adam") == OptimizerKind::adam);
  CHECK(to_string(parse_optimizer("rmsprop")) == "rmsprop");
  CHECK_THROWS_AS(parse_optimizer("lbfgs"), std::invalid_argument);
}

TEST_CASE("finite-difference HVP on a quadratic") {
  Rng rng(9);
  const int n = 6;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) a.col(i) = qinterf::testing::random_vector(rng, n);
  a = (a + a.transpose()).eval();
  const GradientFn grad = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return a * x; };
  const Eigen::VectorXd theta = qinterf::testing::random_vector(rng, n);
  const Eigen::VectorXd v = qinterf::testing::random_vector(rng, n);
  const auto hv = hvp_fd(grad, theta, v, 1e-3);
  REQUIRE(hv.has_value());
  CHECK((*hv - a * v).norm() < 1e-9);
  CHECK_THROWS_AS(hvp_fd(grad, theta, v, 0.0), std::invalid_argument);
}

TEST_CASE("HVP failure is reported") {
  const GradientFn bad = [](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return Eigen::VectorXd::Constant(x.size(), std::nan(""));
  };
  const Eigen::VectorXd x = Eigen::VectorXd::Ones(3);
  CHECK_FALSE(hvp_fd(bad, x, x, 1e-4).has_value());
  CHECK_THROWS_AS(hvp_fd_or_throw(bad, x, x, 1e-4), DivergenceError);
}
