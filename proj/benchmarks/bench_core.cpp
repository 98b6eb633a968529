#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "kirchhoff/bounds.hpp"
#include "kirchhoff/comparison.hpp"
#include "kirchhoff/dynamics.hpp"

using namespace kirchhoff;

namespace {

State decaying_data(std::size_t n) {
  ModeVector u(n), v(n);
  for (std::size_t k = 0; k < n; ++k) u[k] = 0.3 / std::pow(double(k + 1), 2.5);
  return State{0.0, u, v};
}

void BM_EvolveKirchhoff(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const Spectrum spec = Spectrum::linear(n);
  const Nonlinearity nl = Nonlinearity::affine(1.0, 1.0);
  const State init = decaying_data(n);
  for (auto _ : st) benchmark::DoNotOptimize(evolve_kirchhoff(spec, nl, init, 20.0, 1e-9));
}
BENCHMARK(BM_EvolveKirchhoff)->Arg(4)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_Interpolate(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  std::vector<double> a(n), lambdas(n);
  for (std::size_t k = 0; k < n; ++k) {
    a[k] = std::exp(-double(k));
    lambdas[k] = double(k + 1);
  }
  const Weight w = Weight::linear(1.0);
  (void)interpolation_constant(w, 2.0);
  for (auto _ : st) benchmark::DoNotOptimize(interpolate(a, lambdas, 2.0, w));
}
BENCHMARK(BM_Interpolate)->Arg(8)->Arg(64);

void BM_VerifySupersolution(benchmark::State& st) {
  const GrowthEnvelope env = st.range(0) == 0 ? GrowthEnvelope::analytic(0.5, 0.5, 1.0, 2.0)
                                              : GrowthEnvelope::quasi_analytic(0.5, 0.5, 10.0, 2.0);
  for (auto _ : st) benchmark::DoNotOptimize(verify_supersolution(env, 3.0, 1000));
}
BENCHMARK(BM_VerifySupersolution)->Arg(0)->Arg(1);

void BM_IntegrateComparison(benchmark::State& st) {
  const GrowthEnvelope env = GrowthEnvelope::analytic(0.5, 0.5, 1.0, 2.0);
  for (auto _ : st) benchmark::DoNotOptimize(integrate_comparison(env, 3.0, 1e-9));
}
BENCHMARK(BM_IntegrateComparison);

}  // namespace

BENCHMARK_MAIN();
