#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "rovib/basis.hpp"
#include "rovib/classical.hpp"
#include "rovib/evolution.hpp"
#include "rovib/interaction.hpp"
#include "rovib/observables.hpp"
#include "rovib/params.hpp"

namespace {

rovib::ModelParameters driven_geo(double W) {
  auto p = rovib::geo_preset();
  p.W = W;
  return p;
}

void BM_classical_rhs(benchmark::State& state) {
  const auto params = driven_geo(1.03);
  rovib::classical::State s{2.0, 0.7, 0.3, 1.1};
  for (auto _ : state) {
    auto d = rovib::classical::eom_rhs(s, params);
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(BM_classical_rhs);

void BM_classical_integrate(benchmark::State& state) {
  const auto params = driven_geo(0.048);
  const rovib::classical::State init{1.0, 0.0, 0.0, 1.0};
  for (auto _ : state) {
    auto traj = rovib::classical::integrate(init, params, 50.0, {1e-10, 1e-12});
    benchmark::DoNotOptimize(traj.samples.back().state.n);
  }
}
BENCHMARK(BM_classical_integrate);

void BM_coupling_apply(benchmark::State& state) {
  const auto params = driven_geo(1.03);
  const auto basis = rovib::quantum::Basis::build(3, 3, params);
  const rovib::quantum::CouplingTable table(basis, params);
  std::vector<std::complex<double>> d(basis.size(), {0.0, 0.0});
  d[0] = 1.0;
  std::vector<std::complex<double>> out(basis.size());
  double tau = 0.0;
  for (auto _ : state) {
    table.apply(tau, d, out);
    tau += 0.01;
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_coupling_apply);

void BM_interaction_matrix(benchmark::State& state) {
  const auto params = driven_geo(1.03);
  const auto basis = rovib::quantum::Basis::build(3, 3, params);
  for (auto _ : state) {
    auto m = rovib::quantum::interaction_matrix(basis, params, 1.7);
    benchmark::DoNotOptimize(m.entries.data().data());
  }
}
BENCHMARK(BM_interaction_matrix);

void BM_observe(benchmark::State& state) {
  const auto params = driven_geo(1.03);
  const auto basis = rovib::quantum::Basis::build(3, 3, params);
  const auto d = rovib::quantum::poisson_like_initial_state(basis);
  for (auto _ : state) {
    auto sample = rovib::quantum::observe(basis, d, 0.0);
    benchmark::DoNotOptimize(sample.n_mean);
  }
}
BENCHMARK(BM_observe);

}  // namespace

BENCHMARK_MAIN();
