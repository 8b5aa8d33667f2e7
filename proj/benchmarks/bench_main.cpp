#include <benchmark/benchmark.h>

#include <vector>

#include "qinterf/envs/env.hpp"
#include "qinterf/metrics/interference.hpp"
#include "qinterf/nn/network.hpp"
#include "qinterf/random.hpp"

namespace {

using namespace qinterf;

Eigen::MatrixXd random_states(int dim, int n, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd s(dim, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < dim; ++i) s(i, j) = 2.0 * uniform01(rng) - 1.0;
  return s;
}

void BM_Forward(benchmark::State& state) {
  const int hidden = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  const auto params = nn::init_params(nn::NetworkSpec::mlp(4, hidden, 2, 2), 1);
  const auto states = random_states(4, n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(nn::forward(params, states));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_Forward)->Args({64, 64})->Args({256, 64})->Args({64, 1000})->Args({256, 1000});

void BM_TdGradient(benchmark::State& state) {
  const int hidden = static_cast<int>(state.range(0));
  const int n = 64;
  const auto params = nn::init_params(nn::NetworkSpec::mlp(4, hidden, 2, 2), 1);
  const auto states = random_states(4, n, 3);
  std::vector<int> actions(n);
  std::vector<double> coeffs(n);
  for (int i = 0; i < n; ++i) {
    actions[i] = i % 2;
    coeffs[i] = 0.01 * (i - n / 2);
  }
  for (auto _ : state) benchmark::DoNotOptimize(nn::selected_output_gradient(params, states, actions, coeffs));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_TdGradient)->Arg(64)->Arg(256);

void BM_UpdateInterferenceErrors(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> before(n), after(n);
  Rng rng(4);
  for (std::size_t i = 0; i < n; ++i) {
    before[i] = uniform01(rng);
    after[i] = uniform01(rng);
  }
  for (auto _ : state) benchmark::DoNotOptimize(metrics::update_interference(before, after));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_UpdateInterferenceErrors)->Arg(1000)->Arg(10000);

void BM_EnvStep(benchmark::State& state) {
  const auto spec = envs::EnvSpec::make(static_cast<envs::EnvId>(state.range(0)));
  Rng rng(5);
  auto s = envs::reset(spec, rng);
  int a = 0;
  for (auto _ : state) {
    auto r = envs::step(spec, s, a);
    a = (a + 1) % spec.action_count;
    if (r.terminal || r.truncated) s = envs::reset(spec, rng);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_EnvStep)
    ->Arg(static_cast<int>(envs::EnvId::cartpole))
    ->Arg(static_cast<int>(envs::EnvId::acrobot))
    ->Arg(static_cast<int>(envs::EnvId::tworoom));

}  // namespace

BENCHMARK_MAIN();
