#include <benchmark/benchmark.h>

#include "usc_rabi/dynamics.hpp"
#include "usc_rabi/effective.hpp"
#include "usc_rabi/model.hpp"

using namespace usc_rabi;

namespace {

SystemConfig two_photon(int n_max) {
  SystemConfig cfg;
  cfg.resonator.n_max = n_max;
  cfg.qubit = tuned_to(cfg.qubit, 7.976197);
  cfg.dissipation.kappa = 1.8e-4;
  cfg.dissipation.gamma = 1.8e-4;
  return cfg;
}

EvolutionProblem problem(int n_max, double t_end) {
  const SystemConfig cfg = two_photon(n_max);
  EvolutionProblem p;
  p.basis = dressed_basis(build_rabi_hamiltonian(cfg));
  p.jumps = jump_set(p.basis, cfg.dissipation.kappa, cfg.dissipation.gamma, 0.0);
  p.rho0 = ground_state_density(p.basis);
  PulseSpec pulse;
  pulse.area = 3.141592653589793;
  pulse.center_freq = p.basis.transition(2);
  pulse.tau = 3.0;
  pulse.t0 = 15.0;
  p.drive = Drive{pulse, 0};
  p.t_grid = linspace(0.0, t_end, 50);
  return p;
}

void BM_HermitianEig(benchmark::State& st) {
  const Operator h = build_rabi_hamiltonian(two_photon(static_cast<int>(st.range(0))));
  for (auto _ : st) benchmark::DoNotOptimize(hermitian_eig(h));
}
BENCHMARK(BM_HermitianEig)->Arg(8)->Arg(16)->Arg(32);

// Reference form, one projector pair per jump.
void BM_LindbladRhsBare(benchmark::State& st) {
  const EvolutionProblem p = problem(static_cast<int>(st.range(0)), 1.0);
  for (auto _ : st) benchmark::DoNotOptimize(lindblad_rhs(p.rho0, 15.0, p));
}
BENCHMARK(BM_LindbladRhsBare)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_LindbladRhsDressed(benchmark::State& st) {
  const EvolutionProblem p = problem(static_cast<int>(st.range(0)), 1.0);
  const Matrix rho = p.basis.to_dressed(p.rho0);
  for (auto _ : st) benchmark::DoNotOptimize(lindblad_rhs_dressed(rho, 15.0, p));
}
BENCHMARK(BM_LindbladRhsDressed)->Arg(8)->Arg(16);

void BM_EvolveShort(benchmark::State& st) {
  const EvolutionProblem p = problem(10, 30.0);
  for (auto _ : st) benchmark::DoNotOptimize(evolve(p));
}
BENCHMARK(BM_EvolveShort)->Unit(benchmark::kMillisecond);

void BM_MinimumSplitting(benchmark::State& st) {
  const SystemConfig cfg = two_photon(static_cast<int>(st.range(0)));
  for (auto _ : st)
    benchmark::DoNotOptimize(minimum_splitting(cfg, 2, cfg.ghz_to_natural(7.2), cfg.ghz_to_natural(8.8)));
}
BENCHMARK(BM_MinimumSplitting)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
