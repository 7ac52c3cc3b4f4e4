#include <benchmark/benchmark.h>

#include <vector>

#include "macrospin/classical.hpp"
#include "macrospin/elliptic.hpp"
#include "macrospin/exact_dynamics.hpp"

using namespace macrospin;

namespace {

ModelParams params_for(int two_s, double j_over_delta) {
  return ModelParams{j_over_delta, 1.0, SpinSize(two_s), Frame::Quantum};
}

void BM_BuildHamiltonian(benchmark::State& state) {
  const auto p = params_for(static_cast<int>(state.range(0)), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(build_hamiltonian(p));
}
BENCHMARK(BM_BuildHamiltonian)->Arg(20)->Arg(40)->Arg(100);

void BM_Eigensolve(benchmark::State& state) {
  const auto h = build_hamiltonian(params_for(static_cast<int>(state.range(0)), 1.0));
  for (auto _ : state) benchmark::DoNotOptimize(eigensolve(h));
}
BENCHMARK(BM_Eigensolve)->Arg(4)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_EvolveSample(benchmark::State& state) {
  const auto p = params_for(static_cast<int>(state.range(0)), 1.0);
  const auto spectrum = eigensolve(build_hamiltonian(p));
  const auto psi0 = build_coherent_state(p.spin);
  std::vector<double> t(100);
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = 0.1 * static_cast<double>(k);
  for (auto _ : state) benchmark::DoNotOptimize(evolve_at(spectrum, psi0, t));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(t.size()));
}
BENCHMARK(BM_EvolveSample)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_EllipticK(benchmark::State& state) {
  double k = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(complete_elliptic_k(k));
    k = k < 0.99 ? k + 1e-3 : 0.1;
  }
}
BENCHMARK(BM_EllipticK);

void BM_JacobiElliptic(benchmark::State& state) {
  double u = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(jacobi_elliptic(u, 0.7));
    u += 0.01;
  }
}
BENCHMARK(BM_JacobiElliptic);

void BM_ClassicalContrast(benchmark::State& state) {
  const auto p = ModelParams{2.0, 1.0, SpinSize(20), Frame::Classical};
  std::vector<double> t(1000);
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = 0.05 * static_cast<double>(k);
  for (auto _ : state) benchmark::DoNotOptimize(classical_contrast(p, t));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(t.size()));
}
BENCHMARK(BM_ClassicalContrast);

}  // namespace

BENCHMARK_MAIN();
