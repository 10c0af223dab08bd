#include <benchmark/benchmark.h>

#include "ckrlie/model.hpp"
#include "ckrlie/ode.hpp"
#include "ckrlie/symmetry.hpp"

namespace {

using namespace ckrlie;

model::CkrCoefficients oscillator() {
  return model::build_case1({1.0, expr::parse("x^2/2"), 0.5, {}}, {}, {0.0, 1.0, 101});
}

model::CkrCoefficients variable_mass() {
  return model::build_case2(expr::parse("x^2"), 1.5, {expr::parse("1 + 0.5*x^2")}, {-0.25, -0.5, -0.25},
                            {0.0, 1.0, 101});
}

// range(0): number of RK4 steps on [0, 1]
void BM_IntegrateCkrRk4(benchmark::State& state) {
  const auto c = oscillator();
  ode::IntegratorConfig cfg;
  cfg.step = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ode::integrate_ckr(c, 0.0, {1.0, 0.2}, 1.0, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_IntegrateCkrRk4)->Arg(1000)->Arg(10000);

void BM_IntegrateCkrRk45(benchmark::State& state) {
  const auto c = variable_mass();
  ode::IntegratorConfig cfg;
  cfg.method = ode::Method::kRk45;
  cfg.abs_tol = cfg.rel_tol = 1e-10;
  for (auto _ : state) benchmark::DoNotOptimize(ode::integrate_ckr(c, 0.0, {1.0, 0.2}, 1.0, cfg));
}
BENCHMARK(BM_IntegrateCkrRk45);

void BM_SolveLambda(benchmark::State& state) {
  const auto c = variable_mass();
  ode::IntegratorConfig cfg;
  cfg.step = 1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(symmetry::solve_lambda_exponential(c, 1.0, {0.1, -0.2, 0.3}, 0.0, 1.0, cfg));
  }
}
BENCHMARK(BM_SolveLambda);

}  // namespace
