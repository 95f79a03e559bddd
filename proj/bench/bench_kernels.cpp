// Serial reference kernels against the OpenMP ones, plus a full step.
#include <benchmark/benchmark.h>

#include <vector>

#include "mtkink/chain_dynamics.hpp"
#include "mtkink/chain_kernels.hpp"
#include "mtkink/units_params.hpp"

using namespace mtkink;

namespace {

chain::ChainState kink_state(std::size_t n) {
  const auto p = units::load_preset("paper");
  chain::InitialCondition ic;
  ic.n_grid = n;
  return chain::make_initial_state(p, ic);
}

template <auto Force>
void BM_force(benchmark::State& st) {
  const auto s = kink_state(static_cast<std::size_t>(st.range(0)));
  const auto c = chain::force_coeffs(s);
  std::vector<double> f(s.size());
  for (auto _ : st) {
    Force(s.u, f, c);
    benchmark::DoNotOptimize(f.data());
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <auto Energy>
void BM_energy(benchmark::State& st) {
  const auto s = kink_state(static_cast<std::size_t>(st.range(0)));
  const auto c = chain::force_coeffs(s);
  const auto e = chain::energy_coeffs(s);
  for (auto _ : st) benchmark::DoNotOptimize(Energy(s.u, s.u_dot, c, e));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_step(benchmark::State& st) {
  auto s = kink_state(static_cast<std::size_t>(st.range(0)));
  chain::Stepper stepper(s, st.range(1) != 0);
  const double dt = chain::auto_dt(s);
  for (auto _ : st) stepper.step(s, dt);
  st.SetItemsProcessed(st.iterations() * st.range(0));
  st.SetLabel(st.range(1) ? "omp" : "serial");
}

}  // namespace

BENCHMARK(BM_force<chain::kernels::serial::conservative_force>)->Range(1 << 10, 1 << 16);
BENCHMARK(BM_force<chain::kernels::omp::conservative_force>)->Range(1 << 10, 1 << 16);
BENCHMARK(BM_energy<chain::kernels::serial::total_energy>)->Range(1 << 10, 1 << 16);
BENCHMARK(BM_energy<chain::kernels::omp::total_energy>)->Range(1 << 10, 1 << 16);
BENCHMARK(BM_step)->ArgsProduct({{1 << 11, 1 << 14}, {0, 1}});

BENCHMARK_MAIN();
