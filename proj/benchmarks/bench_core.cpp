#include <benchmark/benchmark.h>

#include <numbers>
#include <random>

#include "gllb/galerkin.hpp"

using namespace gllb;

namespace {

BoxDomain domain_for(int dim, int n) {
  std::vector<double> lengths(dim, std::numbers::pi);
  return BoxDomain(lengths, std::vector<int>(dim, 2 * n));
}

SpectralField random_field(const BoxDomain& d, int n) {
  SpectralField f(d, std::vector<int>(d.dim(), n));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (double& c : f.coeffs()) c = 0.1 * g(rng);
  return f;
}

void BM_Synthesize(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0)), n = static_cast<int>(state.range(1));
  const auto f = random_field(domain_for(dim, n), n);
  for (auto _ : state) benchmark::DoNotOptimize(synthesize(f));
}

void BM_Analyze(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0)), n = static_cast<int>(state.range(1));
  const auto g = synthesize(random_field(domain_for(dim, n), n));
  const std::vector<int> trunc(dim, n);
  for (auto _ : state) benchmark::DoNotOptimize(analyze(g, trunc));
}

void BM_Rhs(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0)), n = static_cast<int>(state.range(1));
  const BoxDomain d = domain_for(dim, n);
  const GalerkinSystem sys(d, std::vector<int>(dim, n), GLLBParams{1, 1, 1, 1},
                           Potential::quadratic(1.0));
  const auto f = random_field(d, n);
  for (auto _ : state) benchmark::DoNotOptimize(sys.rhs(f));
}

void BM_StepRk4(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0)), n = static_cast<int>(state.range(1));
  const BoxDomain d = domain_for(dim, n);
  const GalerkinSystem sys(d, std::vector<int>(dim, n), GLLBParams{1, 1, 1, 1},
                           Potential::quadratic(1.0));
  const auto f = random_field(d, n);
  for (auto _ : state) benchmark::DoNotOptimize(sys.step(f, 1e-4, Stepper::kIfRk4));
}

#define GLLB_SIZES Args({1, 64})->Args({1, 256})->Args({2, 32})->Args({2, 64})->Args({3, 16})

BENCHMARK(BM_Synthesize)->GLLB_SIZES;
BENCHMARK(BM_Analyze)->GLLB_SIZES;
BENCHMARK(BM_Rhs)->GLLB_SIZES;
BENCHMARK(BM_StepRk4)->GLLB_SIZES;

}  // namespace

BENCHMARK_MAIN();
