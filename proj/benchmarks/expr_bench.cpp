#include <benchmark/benchmark.h>

#include "ckrlie/expr.hpp"

namespace {

using ckrlie::expr::Expr;

const char* const kSource = "sqrt(1 + x^2) * exp(-x^2/2) + sin(3*x)/(2 + cos(x))";

void BM_Parse(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(ckrlie::expr::parse(kSource));
}
BENCHMARK(BM_Parse);

void BM_Eval(benchmark::State& state) {
  const Expr e = ckrlie::expr::parse(kSource);
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(e(x));
    x += 1e-6;
  }
}
BENCHMARK(BM_Eval);

void BM_Differentiate(benchmark::State& state) {
  const Expr e = ckrlie::expr::parse(kSource);
  for (auto _ : state) benchmark::DoNotOptimize(ckrlie::expr::differentiate(e));
}
BENCHMARK(BM_Differentiate);

void BM_EvalSecondDerivative(benchmark::State& state) {
  const Expr d2 = ckrlie::expr::differentiate(ckrlie::expr::differentiate(ckrlie::expr::parse(kSource)));
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(d2(x));
    x += 1e-6;
  }
}
BENCHMARK(BM_EvalSecondDerivative);

}  // namespace
