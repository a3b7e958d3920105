#include <benchmark/benchmark.h>

#include <vector>

#include "pinnls/collocation.hpp"
#include "pinnls/gals.hpp"
#include "pinnls/network.hpp"
#include "pinnls/problem.hpp"

using namespace pinnls;

namespace {

ShallowNetwork bench_network(std::size_t d, std::size_t width) {
  return ShallowNetwork::random(d, width, Activation(ActivationKind::Tanh), 1, InitOptions{});
}

void BM_Forward(benchmark::State& state) {
  const auto net = bench_network(2, static_cast<std::size_t>(state.range(0)));
  const std::vector<double> x{0.3, 0.7};
  for (auto _ : state) benchmark::DoNotOptimize(net.forward(x));
}
BENCHMARK(BM_Forward)->RangeMultiplier(4)->Range(4, 256);

void BM_SecondDerivative(benchmark::State& state) {
  const auto net = bench_network(2, static_cast<std::size_t>(state.range(0)));
  const std::vector<double> x{0.3, 0.7};
  const auto alpha = MultiIndex::second(2, 0, 0);
  for (auto _ : state) benchmark::DoNotOptimize(net.derivative(x, alpha));
}
BENCHMARK(BM_SecondDerivative)->RangeMultiplier(4)->Range(4, 256);

void BM_LossGradient(benchmark::State& state) {
  const auto problem = builtin_problem("poisson1d-sin");
  const auto net = bench_network(1, 16);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto pts = sample(problem.domain(), n, n / 4 + 2, 3);
  for (auto _ : state) benchmark::DoNotOptimize(loss_gradient(problem, net, pts));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}
BENCHMARK(BM_LossGradient)->RangeMultiplier(4)->Range(64, 4096);

void BM_GalsQuadrature(benchmark::State& state) {
  const auto problem = builtin_problem("poisson2d-sin");
  const auto basis = LinearBasis::legendre(problem.domain(), static_cast<std::size_t>(state.range(0)));
  const auto nodes = quadrature_nodes(problem.domain(), 32);
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble_and_solve(problem, basis, nodes, GalsMode::Quadrature));
  }
}
BENCHMARK(BM_GalsQuadrature)->DenseRange(2, 6, 2);

}  // namespace

BENCHMARK_MAIN();
